#pragma once

#include "panelcast/lstm.hpp"
#include "panelcast/parallel.hpp"
#include "panelcast/windowing.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace panelcast {

struct BatchGradient {
	double data_loss = 0.0;        // mean over the batch
	NetworkParameters gradient;    // mean data-term gradient, no L2
};

/// Mean loss and gradient of a minibatch. Window k of the batch draws its input
/// noise from a generator seeded with mix_seed(noise_key, k), so the serial and
/// parallel paths agree bit for bit.
BatchGradient batch_gradient(const NetworkParameters& params, std::span<const TrainingWindow* const> batch,
							 double noise_std, std::uint64_t noise_key, Execution execution = Execution::serial);

struct TrainResult {
	NetworkParameters params;
	std::vector<double> epoch_losses; // mean minibatch loss (with L2) per epoch
	std::size_t optimizer_steps = 0;
};

/// Trains one network on pooled windows.
///
/// Windows are first put in (series_id, offset) order, then reshuffled with the
/// seeded generator on every pass. An epoch is `epoch_size` passes; training
/// runs `max_epochs` epochs with one optimizer step per minibatch.
/// Throws EmptyTrainingError for an empty window set and ShapeError when the
/// windows disagree on their channel layout.
TrainResult train(std::span<const TrainingWindow> windows, const NetworkConfig& config,
				  Execution execution = Execution::serial);

/// Same, one network per config, runs in parallel across configs when asked.
std::vector<TrainResult> train_many(std::span<const TrainingWindow> windows, std::span<const NetworkConfig> configs,
									Execution execution = Execution::serial);

struct GradientCheckSettings {
	int trials = 20;
	int cell_dimension = 4;
	int hidden_layers = 1;
	int input_size = 5;
	int output_size = 2;
	int input_channels = 2;
	double step = 1e-5;
	double l2_weight = 1e-3;
	std::uint64_t seed = 2024;
};

struct GradientCheckReport {
	struct BlockError {
		std::string name;
		double max_relative_error = 0.0;
	};
	std::vector<BlockError> blocks;
	double max_relative_error = 0.0;
	int trials = 0;
	int skipped_near_kink = 0; // trials rejected because an output sat within 1e-3 of its target
	bool passed = false;
};

/// Compares `backward` against central finite differences on randomly seeded
/// small networks. Relative error is |a - n| / max(|a|, |n|, 1e-6).
GradientCheckReport gradient_check(const GradientCheckSettings& settings, double tolerance);

} // namespace panelcast
