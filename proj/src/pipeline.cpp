#include "panelcast/pipeline.hpp"

#include "panelcast/errors.hpp"
#include "panelcast/metrics.hpp"
#include "panelcast/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

namespace panelcast {

namespace {

/// Runs body(i) for i in [0, n), in parallel when asked. Exceptions are
/// rethrown on the calling thread, lowest index first.
template <class Body>
void for_each_index(int n, Execution execution, Body&& body) {
	if (execution == Execution::serial || n < 2) {
		for (int i = 0; i < n; ++i)
			body(i);
		return;
	}
	std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
	for (int i = 0; i < n; ++i) {
		try {
			body(i);
		} catch (...) {
			errors[i] = std::current_exception();
		}
	}
	for (const auto& e : errors)
		if (e)
			std::rethrow_exception(e);
}

} // namespace

void PipelineConfig::validate() const {
	window.validate();
	network.validate();
	if (ensemble_seeds < 1)
		throw ConfigError("ensemble_seeds must be at least 1");
}

WindowSpec PipelineConfig::window_spec() const {
	WindowSpec spec = window;
	spec.paradigm = paradigm;
	return spec;
}

const SeriesState::Exogenous* SeriesState::find_exogenous(const std::string& name) const {
	for (const auto& e : exogenous)
		if (e.name == name)
			return &e;
	return nullptr;
}

SeriesState prepare_series(const Panel& panel, const TimeSeries& series, const std::string& group_name,
						   const PipelineConfig& config) {
	SeriesState state;
	state.id = series.id;
	state.category = series.category;
	state.group = group_name;
	state.start = series.start;
	state.history = series.values;
	state.transformed = to_model_space(series, state.scale);
	state.decomposition = decompose(state.transformed, panel.frequency(), config.stl);
	state.decomposition.id = series.id;
	state.decomposition.start = series.start;
	for (const auto& name : config.exogenous_names) {
		const TimeSeries* exo = panel.find_exogenous(name, series.id);
		if (exo == nullptr)
			throw NoExogenousError("series '" + series.id + "' has no exogenous '" + name + "'");
		SeriesState::Exogenous e;
		e.name = name;
		e.raw = exo->values;
		e.mean_scale = mean(e.raw);
		if (!(e.mean_scale > 0.0))
			throw DegenerateSeriesError("exogenous '" + name + "' of '" + series.id + "' has zero mean");
		state.exogenous.push_back(std::move(e));
	}
	return state;
}

std::vector<double> primary_sequence(const SeriesState& state, Paradigm paradigm) {
	std::vector<double> primary = state.transformed;
	if (paradigm == Paradigm::deseasonalised)
		for (std::size_t i = 0; i < primary.size(); ++i)
			primary[i] -= state.decomposition.seasonal[i];
	return primary;
}

std::vector<TrainingWindow> series_windows(const SeriesState& state, const PipelineConfig& config) {
	const WindowSpec spec = config.window_spec();
	const auto primary = primary_sequence(state, spec.paradigm);
	std::vector<ExogenousChannel> channels;
	for (const auto& e : state.exogenous)
		channels.push_back({e.name, scale_exogenous(e.raw, e.mean_scale)});
	auto windows = make_windows(state.id, primary, state.decomposition.seasonal, channels, spec);
	for (auto& w : windows)
		w = local_normalize(std::move(w), state.decomposition.trend, spec.paradigm);
	return windows;
}

const SeriesState* TrainedModel::find(const std::string& id) const {
	auto it = std::lower_bound(series.begin(), series.end(), id,
							   [](const SeriesState& s, const std::string& key) { return s.id < key; });
	return (it != series.end() && it->id == id) ? &*it : nullptr;
}

const GroupModel& TrainedModel::group_of(const SeriesState& state) const {
	for (const auto& g : groups)
		if (g.name == state.group)
			return g;
	throw NotFittedError("no trained group '" + state.group + "'");
}

bool TrainedModel::has_exogenous(const std::string& name) const {
	return std::find(config.exogenous_names.begin(), config.exogenous_names.end(), name) !=
		   config.exogenous_names.end();
}

TrainedModel fit(const Panel& panel, const PipelineConfig& config) {
	config.validate();
	if (panel.empty())
		throw EmptyTrainingError("panel has no series");
	TrainedModel model;
	model.config = config;
	model.config.window.paradigm = config.paradigm;
	model.period = panel.frequency();
	for (int k = 0; k < config.ensemble_seeds; ++k)
		model.seeds.push_back(config.member_seed(k));

	std::vector<NetworkConfig> members;
	for (auto seed : model.seeds) {
		NetworkConfig c = config.network;
		c.seed = seed;
		members.push_back(c);
	}

	for (const Panel& sub : group(panel, config.grouping)) {
		GroupModel gm;
		gm.name = config.grouping == Grouping::all ? "all" : sub.series().front().category;
		if (sub.empty())
			throw EmptyTrainingError("group '" + gm.name + "' has no usable series");

		const int n = static_cast<int>(sub.size());
		std::vector<SeriesState> states(static_cast<std::size_t>(n));
		std::vector<std::vector<TrainingWindow>> per_series(static_cast<std::size_t>(n));
		for_each_index(n, config.execution, [&](int i) {
			states[i] = prepare_series(sub, sub.series()[i], gm.name, config);
			per_series[i] = series_windows(states[i], config);
		});

		std::vector<TrainingWindow> windows;
		for (int i = 0; i < n; ++i) {
			gm.series_ids.push_back(states[i].id);
			std::move(per_series[i].begin(), per_series[i].end(), std::back_inserter(windows));
		}
		if (windows.empty())
			throw EmptyTrainingError("group '" + gm.name + "' produced no training windows");
		gm.channel_layout = windows.front().channel_layout;

		auto results = train_many(windows, members, config.execution);
		for (auto& r : results) {
			gm.members.push_back(std::move(r.params));
			gm.epoch_losses.push_back(std::move(r.epoch_losses));
		}
		std::move(states.begin(), states.end(), std::back_inserter(model.series));
		model.groups.push_back(std::move(gm));
	}
	std::sort(model.series.begin(), model.series.end(),
			  [](const SeriesState& a, const SeriesState& b) { return a.id < b.id; });
	return model;
}

ConditioningWindow conditioning_window(const SeriesState& state, const PipelineConfig& config,
									   const std::map<std::string, double>& multipliers) {
	const WindowSpec spec = config.window_spec();
	const auto primary = primary_sequence(state, spec.paradigm);
	const int n = static_cast<int>(primary.size());
	const int m = spec.input_size;
	if (n < m)
		throw LengthError("series '" + state.id + "' is shorter than the input window");
	const int offset = n - m;
	const int channels = 1 + (spec.paradigm == Paradigm::seasonal_exogenous ? 1 : 0) +
						 static_cast<int>(state.exogenous.size());
	ConditioningWindow cw;
	cw.input.resize(m, channels);
	for (int t = 0; t < m; ++t) {
		int c = 0;
		cw.input(t, c++) = primary[offset + t];
		if (spec.paradigm == Paradigm::seasonal_exogenous)
			cw.input(t, c++) = state.decomposition.seasonal[offset + t];
	}
	int c = spec.paradigm == Paradigm::seasonal_exogenous ? 2 : 1;
	for (const auto& e : state.exogenous) {
		double multiplier = 1.0;
		if (auto it = multipliers.find(e.name); it != multipliers.end())
			multiplier = it->second;
		std::span<const double> tail(e.raw.data() + offset, static_cast<std::size_t>(m));
		const auto scaled = scale_exogenous(tail, e.mean_scale, multiplier);
		for (int t = 0; t < m; ++t)
			cw.input(t, c) = scaled[t];
		++c;
	}
	cw.norm_value = local_norm_value(cw.input, offset, state.decomposition.trend, spec.paradigm);
	cw.input.col(0).array() -= cw.norm_value;
	return cw;
}

PostProcessed postprocess(std::span<const double> network_output, double norm_value, Paradigm paradigm,
						  const SeriesState& state) {
	auto values = denormalize(network_output, norm_value);
	if (paradigm == Paradigm::deseasonalised) {
		const auto seasonal = seasonal_forecast(state.decomposition, static_cast<int>(values.size()));
		for (std::size_t h = 0; h < values.size(); ++h)
			values[h] += seasonal[h];
	}
	auto inv = inverse_transform(values, state.scale);
	return {std::move(inv.values), inv.clamped};
}

std::vector<double> median_ensemble(const std::vector<std::vector<double>>& members) {
	if (members.empty())
		throw ValueError("median of an empty ensemble");
	const std::size_t h = members.front().size();
	std::vector<double> out(h);
	std::vector<double> column(members.size());
	for (std::size_t k = 0; k < h; ++k) {
		for (std::size_t s = 0; s < members.size(); ++s) {
			if (members[s].size() != h)
				throw ShapeError("ensemble members have different horizons");
			column[s] = members[s][k];
		}
		out[k] = median(column);
	}
	return out;
}

SeriesForecast forecast_series(const SeriesState& state, const PipelineConfig& config,
							   std::span<const Predictor> members, int horizon,
							   const std::map<std::string, double>& multipliers) {
	if (members.empty())
		throw NotFittedError("no ensemble members for '" + state.id + "'");
	if (horizon < 1 || horizon > config.window.output_size)
		throw ConfigError("horizon must be between 1 and the trained output size " +
						  std::to_string(config.window.output_size));
	const auto cw = conditioning_window(state, config, multipliers);
	SeriesForecast out;
	out.id = state.id;
	out.scale = state.scale;
	out.norm_value = cw.norm_value;
	for (int h = 1; h <= horizon; ++h)
		out.months.push_back(state.end().plus(h));
	for (const auto& predict : members) {
		const Eigen::VectorXd y = predict(cw.input);
		if (y.size() < horizon)
			throw ShapeError("network output shorter than the horizon");
		std::vector<double> net(y.data(), y.data() + horizon);
		auto post = postprocess(net, cw.norm_value, config.paradigm, state);
		out.clamped = out.clamped || post.clamped;
		out.network_space.push_back(std::move(net));
		out.per_seed.push_back(std::move(post.values));
	}
	out.ensemble = median_ensemble(out.per_seed);
	return out;
}

const SeriesForecast* ForecastBundle::find(const std::string& id) const {
	for (const auto& s : series)
		if (s.id == id)
			return &s;
	return nullptr;
}

ForecastBundle forecast(const TrainedModel& model, int horizon, const ForecastOptions& options) {
	std::vector<const SeriesState*> targets;
	if (options.ids.empty()) {
		for (const auto& s : model.series)
			targets.push_back(&s);
	} else {
		for (const auto& id : options.ids) {
			const SeriesState* s = model.find(id);
			if (s == nullptr)
				throw NotFittedError("series '" + id + "' was not part of the fitted panel");
			targets.push_back(s);
		}
		std::sort(targets.begin(), targets.end(), [](auto* a, auto* b) { return a->id < b->id; });
		targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
	}
	for (const auto& [name, multiplier] : options.multipliers) {
		if (!model.has_exogenous(name))
			throw NoExogenousError("model has no exogenous channel '" + name + "'");
		if (!(multiplier > 0.0) || !std::isfinite(multiplier))
			throw ConfigError("scenario multiplier must be positive");
	}

	ForecastBundle bundle;
	bundle.paradigm = model.config.paradigm;
	bundle.grouping = model.config.grouping;
	bundle.seeds = model.seeds;
	bundle.series.resize(targets.size());
	for_each_index(static_cast<int>(targets.size()), options.execution, [&](int i) {
		const SeriesState& state = *targets[i];
		const GroupModel& gm = model.group_of(state);
		std::vector<Predictor> members;
		for (const auto& params : gm.members)
			members.emplace_back([&params](const Eigen::MatrixXd& x) { return forward(params, x, 0.0, nullptr); });
		bundle.series[i] = forecast_series(state, model.config, members, horizon, options.multipliers);
	});
	return bundle;
}

ForecastBundle forecast(const TrainedModel& model, const Panel& panel, int horizon) {
	ForecastOptions options;
	for (const auto& s : panel.series()) {
		if (model.find(s.id) == nullptr)
			throw NotFittedError("series '" + s.id + "' was not part of the fitted panel");
		options.ids.push_back(s.id);
	}
	return forecast(model, horizon, options);
}

bool SearchBounds::contains(const NetworkConfig& c) const {
	auto in = [](auto v, auto lo, auto hi) { return v >= lo && v <= hi; };
	return in(c.cell_dimension, cell_min, cell_max) && in(c.minibatch_size, batch_min, batch_max) &&
		   in(c.epoch_size, epoch_size_min, epoch_size_max) && in(c.max_epochs, max_epochs_min, max_epochs_max) &&
		   in(c.hidden_layers, layers_min, layers_max) && in(c.gaussian_noise_std, noise_min, noise_max) &&
		   in(c.init_std, init_min, init_max) && in(c.l2_weight, l2_min, l2_max);
}

std::vector<NetworkConfig> sample_configs(const SearchBounds& bounds, int trials, std::uint64_t master_seed) {
	std::mt19937_64 rng(master_seed);
	auto integer = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
	auto log_uniform = [&](double lo, double hi) {
		const double v = std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
		return std::clamp(v, lo, hi);
	};
	std::vector<NetworkConfig> out;
	for (int t = 0; t < trials; ++t) {
		NetworkConfig c;
		c.cell_dimension = integer(bounds.cell_min, bounds.cell_max);
		c.minibatch_size = integer(bounds.batch_min, bounds.batch_max);
		c.epoch_size = integer(bounds.epoch_size_min, bounds.epoch_size_max);
		c.max_epochs = integer(bounds.max_epochs_min, bounds.max_epochs_max);
		c.hidden_layers = integer(bounds.layers_min, bounds.layers_max);
		c.gaussian_noise_std = log_uniform(bounds.noise_min, bounds.noise_max);
		c.init_std = log_uniform(bounds.init_min, bounds.init_max);
		c.l2_weight = log_uniform(bounds.l2_min, bounds.l2_max);
		c.seed = mix_seed(master_seed, static_cast<std::uint64_t>(t));
		out.push_back(c);
	}
	return out;
}

SearchResult hyperparameter_search(const Panel& panel, const PipelineConfig& base, const SplitSpec& split_spec,
								   const SearchBounds& bounds, int trials, std::uint64_t master_seed,
								   int ensemble_seeds) {
	if (trials < 1)
		throw ConfigError("search needs at least one trial");
	if (split_spec.validation_length < 1)
		throw ConfigError("search needs a validation region");
	const int horizon = std::min(split_spec.validation_length, base.window.output_size);

	const auto outer = split(panel, split_spec);
	const auto inner = split(outer.train, SplitSpec{split_spec.validation_length, 0});

	SearchResult result;
	result.test_start = outer.test.series().front().start;
	for (const auto& s : outer.test.series())
		result.test_start = std::min(result.test_start, s.start);
	result.last_month_read = inner.test.series().front().end();
	for (const auto& s : inner.test.series())
		result.last_month_read = std::max(result.last_month_read, s.end());
	if (!(result.last_month_read < result.test_start))
		throw ConfigError("validation region overlaps the test region");

	const auto configs = sample_configs(bounds, trials, master_seed);
	result.trials.resize(configs.size());
	for_each_index(trials, base.execution, [&](int t) {
		PipelineConfig cfg = base;
		cfg.network = configs[t];
		cfg.ensemble_seeds = ensemble_seeds;
		cfg.master_seed = configs[t].seed;
		cfg.execution = Execution::serial;
		const auto model = fit(inner.train, cfg);
		const auto bundle = forecast(model, horizon);
		std::vector<double> scores;
		for (const auto& s : inner.test.series()) {
			const auto* f = bundle.find(s.id);
			scores.push_back(smape(f->ensemble, std::span<const double>(s.values).first(horizon)));
		}
		result.trials[t] = SearchTrial{t, configs[t], mean(scores)};
	});

	result.best_index = 0;
	for (const auto& trial : result.trials)
		if (trial.validation_smape < result.trials[result.best_index].validation_smape)
			result.best_index = trial.index;
	result.best = result.trials[result.best_index].config;
	return result;
}

} // namespace panelcast
