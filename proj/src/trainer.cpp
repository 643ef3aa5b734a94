#include "panelcast/trainer.hpp"

#include "panelcast/cocob.hpp"
#include "panelcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace panelcast {

Execution parse_execution(const std::string& text) {
	if (text == "serial")
		return Execution::serial;
	if (text == "parallel")
		return Execution::parallel;
	throw ConfigError("unknown execution mode '" + text + "'");
}

int max_threads() {
#ifdef _OPENMP
	return omp_get_max_threads();
#else
	return 1;
#endif
}

namespace {

struct WindowGradient {
	double loss = 0.0;
	NetworkParameters gradient;
};

void window_gradient(const NetworkParameters& params, const TrainingWindow& w, double noise_std, std::uint64_t key,
					 ForwardCache& cache, WindowGradient& out) {
	std::mt19937_64 rng(key);
	forward(params, w.input, noise_std, &rng, &cache);
	out.loss = data_loss(cache.prediction, w.target);
	backward(params, cache, w.target, 0.0, out.gradient);
}

} // namespace

BatchGradient batch_gradient(const NetworkParameters& params, std::span<const TrainingWindow* const> batch,
							 double noise_std, std::uint64_t noise_key, Execution execution) {
	if (batch.empty())
		throw EmptyTrainingError("empty minibatch");
	const int n = static_cast<int>(batch.size());
	std::vector<WindowGradient> parts(batch.size());
	for (auto& p : parts)
		p.gradient = NetworkParameters(params.shape());

	if (execution == Execution::parallel) {
		// Exceptions may not cross the region boundary; record and rethrow.
		std::vector<std::exception_ptr> errors(batch.size());
#pragma omp parallel
		{
			ForwardCache cache;
#pragma omp for schedule(static)
			for (int k = 0; k < n; ++k) {
				try {
					window_gradient(params, *batch[k], noise_std, mix_seed(noise_key, static_cast<std::uint64_t>(k)),
									cache, parts[k]);
				} catch (...) {
					errors[k] = std::current_exception();
				}
			}
		}
		for (const auto& e : errors)
			if (e)
				std::rethrow_exception(e);
	} else {
		ForwardCache cache;
		for (int k = 0; k < n; ++k)
			window_gradient(params, *batch[k], noise_std, mix_seed(noise_key, static_cast<std::uint64_t>(k)), cache,
							parts[k]);
	}

	BatchGradient out;
	out.gradient = NetworkParameters(params.shape());
	for (const auto& p : parts) {
		out.data_loss += p.loss;
		out.gradient += p.gradient;
	}
	out.data_loss /= n;
	out.gradient *= 1.0 / n;
	return out;
}

TrainResult train(std::span<const TrainingWindow> windows, const NetworkConfig& config, Execution execution) {
	config.validate();
	if (windows.empty())
		throw EmptyTrainingError("no training windows");
	const auto& layout = windows.front().channel_layout;
	const auto output_size = windows.front().target.size();
	for (const auto& w : windows)
		if (w.channel_layout != layout || w.target.size() != output_size ||
			w.input.cols() != static_cast<Eigen::Index>(layout.size()))
			throw ShapeError("training windows disagree on channel layout or horizon");

	std::vector<const TrainingWindow*> order;
	order.reserve(windows.size());
	for (const auto& w : windows)
		order.push_back(&w);
	std::sort(order.begin(), order.end(), [](const TrainingWindow* a, const TrainingWindow* b) {
		return a->series_id != b->series_id ? a->series_id < b->series_id : a->offset < b->offset;
	});

	TrainResult result;
	result.params = init_parameters(config, static_cast<int>(layout.size()), static_cast<int>(output_size));
	CocobState state = CocobState::start(result.params.values());
	std::mt19937_64 shuffle_rng(mix_seed(config.seed, 0x5eed));

	const std::size_t batch_size = static_cast<std::size_t>(config.minibatch_size);
	std::uint64_t step = 0;
	for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
		double epoch_loss = 0.0;
		std::size_t batches = 0;
		for (int pass = 0; pass < config.epoch_size; ++pass) {
			std::shuffle(order.begin(), order.end(), shuffle_rng);
			for (std::size_t start = 0; start < order.size(); start += batch_size) {
				const std::size_t end = std::min(order.size(), start + batch_size);
				std::span<const TrainingWindow* const> batch(order.data() + start, end - start);
				auto grad = batch_gradient(result.params, batch, config.gaussian_noise_std,
										   mix_seed(config.seed, step), execution);
				add_l2_gradient(result.params, config.l2_weight, grad.gradient);
				epoch_loss += grad.data_loss + config.l2_weight * result.params.weight_sum_of_squares();
				++batches;
				cocob_step(state, result.params.values(), grad.gradient.values());
				++step;
			}
		}
		result.epoch_losses.push_back(epoch_loss / static_cast<double>(batches));
	}
	for (double v : result.params.values())
		if (!std::isfinite(v))
			throw NumericalError("training diverged to non-finite parameters");
	result.optimizer_steps = step;
	return result;
}

std::vector<TrainResult> train_many(std::span<const TrainingWindow> windows, std::span<const NetworkConfig> configs,
									Execution execution) {
	std::vector<TrainResult> results(configs.size());
	const int n = static_cast<int>(configs.size());
	if (execution == Execution::parallel) {
		std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
		for (int k = 0; k < n; ++k) {
			try {
				results[k] = train(windows, configs[k], Execution::serial);
			} catch (...) {
				errors[k] = std::current_exception();
			}
		}
		for (const auto& e : errors)
			if (e)
				std::rethrow_exception(e);
	} else {
		for (int k = 0; k < n; ++k)
			results[k] = train(windows, configs[k], Execution::serial);
	}
	return results;
}

GradientCheckReport gradient_check(const GradientCheckSettings& settings, double tolerance) {
	GradientCheckReport report;
	std::mt19937_64 rng(settings.seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	const NetworkShape shape{settings.input_channels, settings.cell_dimension, settings.hidden_layers,
							 settings.output_size};
	{
		NetworkParameters probe(shape);
		for (const auto& b : probe.blocks())
			report.blocks.push_back({b.name, 0.0});
	}

	int attempts = 0;
	while (report.trials < settings.trials && attempts < 10 * settings.trials) {
		++attempts;
		NetworkParameters params(shape);
		for (double& v : params.values())
			v = 0.5 * normal(rng);
		Eigen::MatrixXd input(settings.input_size, settings.input_channels);
		for (Eigen::Index i = 0; i < input.size(); ++i)
			input.data()[i] = normal(rng);
		Eigen::VectorXd target(settings.output_size);
		for (Eigen::Index i = 0; i < target.size(); ++i)
			target(i) = 2.0 * normal(rng);

		ForwardCache cache;
		forward(params, input, 0.0, nullptr, &cache);
		// Finite differences straddling an L1 kink are meaningless.
		if (((cache.prediction - target).cwiseAbs().array() < 1e-3).any()) {
			++report.skipped_near_kink;
			continue;
		}
		NetworkParameters analytic(shape);
		backward(params, cache, target, settings.l2_weight, analytic);

		auto objective = [&](const NetworkParameters& p) {
			return loss(forward(p, input, 0.0, nullptr), target, p, settings.l2_weight);
		};
		NetworkParameters probe = params;
		auto values = probe.values();
		for (std::size_t bi = 0; bi < params.blocks().size(); ++bi) {
			const auto& b = params.blocks()[bi];
			for (std::size_t i = 0; i < b.size(); ++i) {
				const std::size_t idx = b.offset + i;
				const double saved = values[idx];
				values[idx] = saved + settings.step;
				const double up = objective(probe);
				values[idx] = saved - settings.step;
				const double down = objective(probe);
				values[idx] = saved;
				const double numeric = (up - down) / (2.0 * settings.step);
				const double a = analytic.values()[idx];
				const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
				report.blocks[bi].max_relative_error = std::max(report.blocks[bi].max_relative_error, rel);
			}
		}
		++report.trials;
	}
	for (const auto& b : report.blocks)
		report.max_relative_error = std::max(report.max_relative_error, b.max_relative_error);
	report.passed = report.trials == settings.trials && report.max_relative_error <= tolerance;
	return report;
}

} // namespace panelcast
