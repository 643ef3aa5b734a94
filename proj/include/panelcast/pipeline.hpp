#pragma once

#include "panelcast/lstm.hpp"
#include "panelcast/panel.hpp"
#include "panelcast/parallel.hpp"
#include "panelcast/preprocess.hpp"
#include "panelcast/windowing.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace panelcast {

struct PipelineConfig {
	Paradigm paradigm = Paradigm::deseasonalised;
	Grouping grouping = Grouping::all;
	WindowSpec window;
	NetworkConfig network;
	StlConfig stl;
	int ensemble_seeds = 10;
	std::uint64_t master_seed = 7;
	std::vector<std::string> exogenous_names;
	Execution execution = Execution::parallel;

	void validate() const;
	WindowSpec window_spec() const;
	/// Seed of ensemble member k: master_seed + k.
	std::uint64_t member_seed(int k) const { return master_seed + static_cast<std::uint64_t>(k); }
};

/// Everything about one series that forecasting needs after fitting.
struct SeriesState {
	struct Exogenous {
		std::string name;
		double mean_scale = 1.0;
		std::vector<double> raw;
	};

	std::string id;
	std::string category;
	std::string group;
	YearMonth start;
	std::vector<double> history;     // raw training counts
	ScaleRecord scale;
	std::vector<double> transformed; // log-scaled history
	DecompositionResult decomposition;
	std::vector<Exogenous> exogenous; // in config.exogenous_names order

	YearMonth end() const { return start.plus(static_cast<int>(history.size()) - 1); }
	const Exogenous* find_exogenous(const std::string& name) const;
};

/// Scales, log-transforms and decomposes one series (and its exogenous inputs).
SeriesState prepare_series(const Panel& panel, const TimeSeries& series, const std::string& group_name,
						   const PipelineConfig& config);

/// The network-space primary sequence: deseasonalised for DS, as-is for SE.
std::vector<double> primary_sequence(const SeriesState& state, Paradigm paradigm);

/// Locally normalised training windows of one series.
std::vector<TrainingWindow> series_windows(const SeriesState& state, const PipelineConfig& config);

struct GroupModel {
	std::string name;
	std::vector<std::string> series_ids;
	std::vector<std::string> channel_layout;
	std::vector<NetworkParameters> members; // one per ensemble seed
	std::vector<std::vector<double>> epoch_losses;
};

struct TrainedModel {
	PipelineConfig config;
	int period = 12;
	std::vector<std::uint64_t> seeds;
	std::vector<GroupModel> groups;
	std::vector<SeriesState> series; // sorted by id

	const SeriesState* find(const std::string& id) const;
	const GroupModel& group_of(const SeriesState& state) const;
	bool has_exogenous(const std::string& name) const;
};

/// Preprocesses, windows and trains one network per ensemble seed for every group.
/// Throws EmptyTrainingError for an empty group, NoExogenousError when a
/// configured exogenous variable is missing for a series.
TrainedModel fit(const Panel& panel, const PipelineConfig& config);

/// The input a forecast conditions on: the last m_in steps, locally normalised.
/// `multipliers` scale named raw exogenous values before channel scaling.
struct ConditioningWindow {
	Eigen::MatrixXd input;
	double norm_value = 0.0;
};
ConditioningWindow conditioning_window(const SeriesState& state, const PipelineConfig& config,
									   const std::map<std::string, double>& multipliers = {});

struct PostProcessed {
	std::vector<double> values;
	bool clamped = false;
};

/// Network output -> counts: add the local level, re-add the repeated last
/// seasonal cycle (DS only), then undo the log and mean scaling.
PostProcessed postprocess(std::span<const double> network_output, double norm_value, Paradigm paradigm,
						  const SeriesState& state);

/// Elementwise median across members; even counts average the middle pair.
std::vector<double> median_ensemble(const std::vector<std::vector<double>>& members);

struct SeriesForecast {
	std::string id;
	std::vector<YearMonth> months;
	std::vector<std::vector<double>> network_space; // per seed, before post-processing
	std::vector<std::vector<double>> per_seed;      // counts
	std::vector<double> ensemble;
	double norm_value = 0.0;
	ScaleRecord scale;
	bool clamped = false;
};

struct ForecastBundle {
	Paradigm paradigm = Paradigm::deseasonalised;
	Grouping grouping = Grouping::all;
	std::vector<std::uint64_t> seeds;
	std::vector<SeriesForecast> series; // sorted by id

	const SeriesForecast* find(const std::string& id) const;
};

using Predictor = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

/// Forecasts one series with the given ensemble members.
SeriesForecast forecast_series(const SeriesState& state, const PipelineConfig& config,
							   std::span<const Predictor> members, int horizon,
							   const std::map<std::string, double>& multipliers = {});

struct ForecastOptions {
	std::vector<std::string> ids; // empty: every series
	std::map<std::string, double> multipliers;
	Execution execution = Execution::serial;
};

/// Forecasts `horizon` (<= M) months after the end of each training series.
/// Throws NotFittedError for unknown ids.
ForecastBundle forecast(const TrainedModel& model, int horizon, const ForecastOptions& options = {});
ForecastBundle forecast(const TrainedModel& model, const Panel& panel, int horizon);

struct SearchBounds {
	int cell_min = 20, cell_max = 50;
	int batch_min = 1, batch_max = 10;
	int epoch_size_min = 2, epoch_size_max = 10;
	int max_epochs_min = 3, max_epochs_max = 40;
	int layers_min = 1, layers_max = 2;
	double noise_min = 1e-4, noise_max = 8e-4;
	double init_min = 1e-4, init_max = 8e-4;
	double l2_min = 1e-4, l2_max = 8e-4;

	bool contains(const NetworkConfig& c) const;
};

struct SearchTrial {
	int index = 0;
	NetworkConfig config;
	double validation_smape = 0.0;
};

struct SearchResult {
	NetworkConfig best;
	int best_index = 0;
	std::vector<SearchTrial> trials;
	YearMonth last_month_read; // latest month any trial saw
	YearMonth test_start;      // earliest held-out test month
};

/// Draws `trials` configs (integers uniform, reals log-uniform within `bounds`),
/// fits each on the training region minus the validation months, and keeps the
/// config with the lowest mean validation sMAPE (earliest trial on ties).
/// Trials run in parallel when base.execution is parallel.
SearchResult hyperparameter_search(const Panel& panel, const PipelineConfig& base, const SplitSpec& split_spec,
								   const SearchBounds& bounds, int trials, std::uint64_t master_seed,
								   int ensemble_seeds = 1);

/// The configs a search with this master seed evaluates, in trial order.
std::vector<NetworkConfig> sample_configs(const SearchBounds& bounds, int trials, std::uint64_t master_seed);

} // namespace panelcast
