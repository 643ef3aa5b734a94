// One pass/fail line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include "panelcast/causal.hpp"
#include "panelcast/cli.hpp"
#include "panelcast/errors.hpp"
#include "panelcast/metrics.hpp"
#include "panelcast/model_io.hpp"
#include "panelcast/pipeline.hpp"
#include "panelcast/preprocess.hpp"
#include "panelcast/synth.hpp"
#include "panelcast/trainer.hpp"
#include "panelcast/windowing.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace panelcast;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and thresholds.
constexpr double kGradientTolerance = 1e-4;
constexpr int kGradientTrials = 20;
constexpr double kGradientSeconds = 60.0;
constexpr double kRoundTripTolerance = 1e-9;
constexpr double kChainTolerance = 1e-9;
constexpr double kAccuracyMargin = 0.10;
constexpr double kAccuracySeconds = 15 * 60.0;
constexpr double kHighStrength = 0.9;
constexpr double kLowStrength = 0.3;
constexpr int kMasterSeeds = 5;
constexpr int kGcRuns = 10;
constexpr int kGcPlantedMinWins = 8;
constexpr int kGcNullMaxWins = 6;
constexpr double kGcSeconds = 20 * 60.0;
constexpr double kWhatIfOrderedShare = 0.9;

struct Outcome {
	bool pass = false;
	std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
	return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
	std::ostringstream o;
	o.precision(digits);
	o << v;
	return o.str();
}

double rel(double a, double b) {
	return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// 1
Outcome gradient_correctness() {
	const auto t0 = Clock::now();
	GradientCheckSettings s;
	s.trials = kGradientTrials;
	s.cell_dimension = 4;
	s.hidden_layers = 1;
	s.input_size = 5;
	s.output_size = 2;
	s.step = 1e-5;
	const auto r = gradient_check(s, kGradientTolerance);
	const double secs = seconds_since(t0);
	bool blocks_ok = !r.blocks.empty();
	for (const auto& b : r.blocks)
		blocks_ok = blocks_ok && b.max_relative_error <= kGradientTolerance;
	return {r.passed && blocks_ok && r.trials == kGradientTrials && secs < kGradientSeconds,
			"max rel " + fmt(r.max_relative_error) + " over " + std::to_string(r.blocks.size()) + " blocks, " +
				std::to_string(r.trials) + " trials, " + fmt(secs, 3) + "s"};
}

// 2
Outcome inverse_exactness() {
	std::mt19937_64 rng(2);
	std::uniform_int_distribution<int> len(30, 120);
	std::uniform_real_distribution<double> level(0.5, 5000.0);
	double worst_scale = 0.0, worst_window = 0.0, worst_chain = 0.0;
	const PipelineConfig config;
	for (int k = 0; k < 1000; ++k) {
		const int n = len(rng);
		const double mu = level(rng);
		std::uniform_real_distribution<double> u(0.0, 2.0 * mu);
		std::vector<double> values(static_cast<std::size_t>(n));
		for (auto& v : values)
			v = std::round(u(rng));
		values[0] = std::max(values[0], 1.0);
		const TimeSeries series{"r" + std::to_string(k), "A", {2015, 1}, values};

		const auto scaled = mean_scale(series);
		const auto logged = log_stabilize(scaled.values, scaled.record);
		const auto back = inverse_transform(logged, scaled.record);
		for (int t = 0; t < n; ++t) {
			const double err = values[t] == 0.0 ? std::abs(back.values[t]) / scaled.record.mean_scale
												: rel(back.values[t], values[t]);
			worst_scale = std::max(worst_scale, err);
		}

		// Window normalisation round trip on the DS path.
		const Panel panel({series});
		const auto state = prepare_series(panel, series, "all", config);
		if (window_count(n, config.window_spec()) > 0) {
			const auto primary = primary_sequence(state, config.paradigm);
			const auto raw = make_windows(series.id, primary, state.decomposition.seasonal, {}, config.window_spec());
			for (const auto& w : raw) {
				const auto normed = local_normalize(w, state.decomposition.trend, config.paradigm);
				std::vector<double> target(normed.target.data(), normed.target.data() + normed.target.size());
				const auto restored = denormalize(target, normed.norm_value);
				for (std::size_t h = 0; h < restored.size(); ++h)
					worst_window = std::max(worst_window, rel(restored[h], w.target(static_cast<Eigen::Index>(h))));
			}
		}

		// DS re-seasonalisation chain against hand arithmetic.
		std::vector<double> output(12);
		for (auto& v : output)
			v = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
		const double norm = state.decomposition.trend.back();
		const auto post = postprocess(output, norm, Paradigm::deseasonalised, state);
		for (int h = 0; h < 12; ++h) {
			const double s = state.decomposition.seasonal[n - 12 + h];
			const double expected = std::max(0.0, (std::exp(output[h] + norm + s) - 1.0) * state.scale.mean_scale);
			worst_chain = std::max(worst_chain, std::abs(post.values[h] - expected) / std::max(1.0, expected));
		}
	}
	return {worst_scale <= kRoundTripTolerance && worst_window <= kRoundTripTolerance && worst_chain <= kChainTolerance,
			"scale/log " + fmt(worst_scale) + ", window " + fmt(worst_window) + ", DS chain " + fmt(worst_chain)};
}

// 3
Outcome metric_oracles() {
	bool ok = true;
	std::string failed;
	auto expect = [&](bool cond, const std::string& what) {
		if (!cond) {
			ok = false;
			failed += " " + what;
		}
	};
	expect(smape(std::vector<double>{3}, std::vector<double>{1}) == 1.0, "smape([3],[1])");
	expect(smape(std::vector<double>{0}, std::vector<double>{0}) == 0.0, "smape(0,0)");

	std::vector<double> train(36), actual(12), forecast(12);
	for (int t = 0; t < 36; ++t)
		train[t] = t;
	for (int h = 0; h < 12; ++h) {
		actual[h] = 36 + h;
		forecast[h] = actual[h] + (h % 2 ? 12.0 : -12.0);
	}
	expect(mase(forecast, actual, train, 12) == 1.0, "mase=1");

	const auto naive = seasonal_naive(train, 12, 12);
	expect(std::equal(naive.begin(), naive.end(), train.end() - 12), "seasonal_naive");

	std::vector<double> a(12), b(12, 0.0);
	for (int i = 0; i < 12; ++i)
		a[i] = 1.0 + i;
	const auto w = wilcoxon_signed_rank(a, b);
	expect(w.exact && std::abs(w.p_value - std::ldexp(1.0, -11)) <= 1e-15, "wilcoxon");
	return {ok, ok ? "smape 1.0, mase 1.0, naive cycle, wilcoxon p " + fmt(w.p_value, 6) : "failed:" + failed};
}

struct Scores {
	double model = 0.0;
	double naive = 0.0;
};

Scores holdout_scores(const PanelSplit& parts, const PipelineConfig& config) {
	const auto model = fit(parts.train, config);
	ForecastOptions options;
	options.execution = config.execution;
	const auto bundle = forecast(model, 12, options);
	std::vector<double> m, n;
	for (const auto& s : parts.test.series()) {
		const auto& train = parts.train.find(s.id)->values;
		m.push_back(smape(bundle.find(s.id)->ensemble, s.values));
		n.push_back(smape(seasonal_naive(train, 12, 12), s.values));
	}
	return {mean(m), mean(n)};
}

// 4
Outcome end_to_end_accuracy() {
	const auto t0 = Clock::now();
	const auto parts = split(generate(SynthSpec{}).panel, {12, 0});
	bool ok = true;
	std::string detail;
	for (auto paradigm : {Paradigm::deseasonalised, Paradigm::seasonal_exogenous}) {
		PipelineConfig c;
		c.paradigm = paradigm;
		const auto s = holdout_scores(parts, c);
		const double gain = 1.0 - s.model / s.naive;
		ok = ok && gain >= kAccuracyMargin;
		detail += to_string(paradigm) + " " + fmt(s.model) + " vs naive " + fmt(s.naive) + " (" +
				  fmt(100 * gain, 3) + "% better), ";
	}
	const double secs = seconds_since(t0);
	return {ok && secs < kAccuracySeconds, detail + fmt(secs, 3) + "s"};
}

double mean_strength(const Panel& panel) {
	const PipelineConfig c;
	double sum = 0.0;
	for (const auto& s : panel.series())
		sum += seasonal_strength(prepare_series(panel, s, "all", c).decomposition);
	return sum / static_cast<double>(panel.size());
}

// 5
Outcome paradigm_interaction() {
	SynthSpec high;
	high.n_series = 20;
	high.amplitude_min = 40;
	high.amplitude_max = 80;
	high.noise_std = 3;
	SynthSpec low;
	low.n_series = 20;
	low.amplitude_min = 1;
	low.amplitude_max = 3;
	low.noise_std = 8;

	const auto hp = split(generate(high).panel, {12, 0});
	const auto lp = split(generate(low).panel, {12, 0});
	const double hs = mean_strength(hp.train), ls = mean_strength(lp.train);

	int ds_wins_high = 0, se_wins_low = 0;
	for (int k = 0; k < kMasterSeeds; ++k) {
		PipelineConfig c;
		c.ensemble_seeds = 1;
		c.master_seed = 1 + static_cast<std::uint64_t>(k);
		auto run = [&](const PanelSplit& parts, Paradigm p) {
			c.paradigm = p;
			return holdout_scores(parts, c).model;
		};
		ds_wins_high += run(hp, Paradigm::deseasonalised) <= run(hp, Paradigm::seasonal_exogenous);
		se_wins_low += run(lp, Paradigm::seasonal_exogenous) <= run(lp, Paradigm::deseasonalised);
	}
	const int majority = kMasterSeeds / 2 + 1;
	return {hs >= kHighStrength && ls <= kLowStrength && ds_wins_high >= majority && se_wins_low >= majority,
			"strength " + fmt(hs, 3) + ": DS<=SE " + std::to_string(ds_wins_high) + "/" +
				std::to_string(kMasterSeeds) + "; strength " + fmt(ls, 3) + ": SE<=DS " + std::to_string(se_wins_low) +
				"/" + std::to_string(kMasterSeeds)};
}

int gc_wins(double beta) {
	int wins = 0;
	for (int k = 0; k < kGcRuns; ++k) {
		SynthSpec spec;
		spec.n_series = 20;
		spec.seed = 100 + static_cast<std::uint64_t>(k);
		DriverSpec d;
		d.lag = 1;
		d.beta = beta;
		spec.driver = d;
		PipelineConfig c;
		c.ensemble_seeds = 1;
		c.master_seed = 1000 + static_cast<std::uint64_t>(k);
		wins += gc_compare(generate(spec).panel, "driver", c, {12, 0}).improved;
	}
	return wins;
}

// 6
Outcome gc_power() {
	const auto t0 = Clock::now();
	const int planted = gc_wins(1.0);
	const int null = gc_wins(0.0);
	const double secs = seconds_since(t0);
	return {planted >= kGcPlantedMinWins && null <= kGcNullMaxWins && secs < kGcSeconds,
			"planted " + std::to_string(planted) + "/" + std::to_string(kGcRuns) + ", null " + std::to_string(null) +
				"/" + std::to_string(kGcRuns) + ", " + fmt(secs, 3) + "s"};
}

// 7
Outcome whatif_sanity() {
	// The driver leads the series by the full horizon, so the conditioning
	// window holds exactly the driver values that move the forecast months.
	SynthSpec spec;
	spec.n_series = 20;
	spec.seed = 11;
	DriverSpec d;
	d.lag = 12;
	d.beta = 1.0;
	spec.driver = d;
	PipelineConfig c;
	c.ensemble_seeds = 1;
	c.exogenous_names = {"driver"};
	const auto model = fit(generate(spec).panel, c);

	const auto baseline = forecast(model, 12);
	const auto same = whatif(model, {"driver", 1.0, {}}, 12);
	bool identity = same.series.size() == baseline.series.size();
	for (std::size_t i = 0; identity && i < same.series.size(); ++i)
		identity = same.series[i].scenario == baseline.series[i].ensemble &&
				   same.series[i].baseline == baseline.series[i].ensemble;

	auto means = [&](double m) {
		std::vector<double> out;
		for (const auto& s : whatif(model, {"driver", m, {}}, 12).series)
			out.push_back(mean(s.scenario));
		return out;
	};
	const auto m90 = means(0.90), m95 = means(0.95), m105 = means(1.05), m110 = means(1.10);
	int ordered = 0;
	for (std::size_t i = 0; i < m90.size(); ++i)
		ordered += m110[i] > m90[i];
	const double a90 = mean(m90), a95 = mean(m95), a105 = mean(m105), a110 = mean(m110);
	std::vector<double> base_means;
	for (const auto& s : baseline.series)
		base_means.push_back(mean(s.ensemble));
	const double a100 = mean(base_means);
	const bool bracketed = a90 <= a95 && a95 <= a100 && a100 <= a105 && a105 <= a110;
	const double share = static_cast<double>(ordered) / static_cast<double>(m90.size());
	return {identity && share >= kWhatIfOrderedShare && bracketed,
			std::string("identity ") + (identity ? "exact" : "broken") + ", ordered " + std::to_string(ordered) + "/" +
				std::to_string(m90.size()) + ", aggregate means " + fmt(a90, 6) + " " + fmt(a95, 6) + " " +
				fmt(a100, 6) + " " + fmt(a105, 6) + " " + fmt(a110, 6)};
}

// 8
Outcome determinism() {
	testing::TempDir tmp("acceptance_det");
	std::ostringstream out, err;
	bool ok = run_cli({"synth", "--out", tmp / "p.csv", "--series", "8", "--months", "60"}, out, err) == 0;
	const std::vector<std::string> train_args{"train", "--panel", tmp / "p.csv", "--cell", "8", "--epochs", "3",
											  "--seeds", "3", "--out"};
	for (const char* dir : {"a", "b"}) {
		auto args = train_args;
		args.push_back(tmp / dir);
		ok = ok && run_cli(args, out, err) == 0;
	}
	int files = 0;
	bool identical = ok;
	for (const auto& e : fs::recursive_directory_iterator(tmp.path() / "a")) {
		if (!e.is_regular_file() || e.path().filename() == "run_manifest.json")
			continue;
		++files;
		const auto other = tmp.path() / "b" / fs::relative(e.path(), tmp.path() / "a");
		identical = identical && fs::exists(other) && testing::slurp(e.path()) == testing::slurp(other);
	}

	// Ten-member ensemble: reproducible and independent of member order.
	SynthSpec spec;
	spec.n_series = 6;
	spec.n_months = 48;
	PipelineConfig c;
	c.network.cell_dimension = 6;
	c.network.max_epochs = 3;
	c.ensemble_seeds = 10;
	const auto panel = generate(spec).panel;
	const auto f1 = forecast(fit(panel, c), 12);
	const auto f2 = forecast(fit(panel, c), 12);
	bool ensemble_ok = f1.seeds.size() == 10;
	std::mt19937_64 rng(8);
	for (std::size_t i = 0; i < f1.series.size(); ++i) {
		ensemble_ok = ensemble_ok && f1.series[i].ensemble == f2.series[i].ensemble;
		auto members = f1.series[i].per_seed;
		for (int p = 0; p < 5; ++p) {
			std::shuffle(members.begin(), members.end(), rng);
			ensemble_ok = ensemble_ok && median_ensemble(members) == f1.series[i].ensemble;
		}
	}
	return {identical && files > 0 && ensemble_ok,
			std::to_string(files) + " model files " + (identical ? "identical" : "differ") + ", 10-seed median " +
				(ensemble_ok ? "reproducible and order-free" : "unstable")};
}

// 9
Outcome search_checks() {
	// Reference search bounds, pinned here independently of the library defaults.
	const SearchBounds reference{20, 50, 1, 10, 2, 10, 3, 40, 1, 2, 1e-4, 8e-4, 1e-4, 8e-4, 1e-4, 8e-4};
	const SearchBounds lib;
	const bool same_bounds = lib.cell_min == 20 && lib.cell_max == 50 && lib.batch_min == 1 && lib.batch_max == 10 &&
							 lib.epoch_size_min == 2 && lib.epoch_size_max == 10 && lib.max_epochs_min == 3 &&
							 lib.max_epochs_max == 40 && lib.layers_min == 1 && lib.layers_max == 2 &&
							 lib.noise_min == 1e-4 && lib.noise_max == 8e-4 && lib.init_min == 1e-4 &&
							 lib.init_max == 8e-4 && lib.l2_min == 1e-4 && lib.l2_max == 8e-4;
	int inside = 0;
	const auto sampled = sample_configs(lib, 1000, 3);
	for (const auto& cfg : sampled)
		inside += reference.contains(cfg);

	SynthSpec spec;
	spec.n_series = 4;
	spec.n_months = 60;
	const auto panel = generate(spec).panel;
	PipelineConfig base;
	const SplitSpec split_spec{12, 12};
	const int trials = 3;
	const auto a = hyperparameter_search(panel, base, split_spec, lib, trials, 17);
	const auto b = hyperparameter_search(panel, base, split_spec, lib, trials, 17);

	// Scrambling every test month must not change anything the search reports.
	std::vector<TimeSeries> scrambled = panel.series();
	for (auto& s : scrambled)
		for (std::size_t t = s.values.size() - 12; t < s.values.size(); ++t)
			s.values[t] = 1e6 + static_cast<double>(t);
	const auto c = hyperparameter_search(Panel(scrambled), base, split_spec, lib, trials, 17);
	bool blind = c.best_index == a.best_index;
	for (int t = 0; t < trials; ++t)
		blind = blind && c.trials[t].validation_smape == a.trials[t].validation_smape;
	const bool calendar = a.last_month_read < a.test_start;

	return {same_bounds && inside == 1000 && a.best == b.best && a.best_index == b.best_index && blind && calendar,
			std::to_string(inside) + "/1000 configs in bounds, winner trial " + std::to_string(a.best_index) + " " +
				(a.best == b.best ? "reproduced" : "changed") + ", last month read " + a.last_month_read.str() +
				" < test start " + a.test_start.str() + (blind ? ", test values never read" : ", TEST LEAK")};
}

} // namespace

int main() {
	const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
		{"gradient correctness", gradient_correctness},
		{"inverse exactness", inverse_exactness},
		{"metric oracles", metric_oracles},
		{"end-to-end accuracy", end_to_end_accuracy},
		{"paradigm vs seasonal strength", paradigm_interaction},
		{"exogenous candidate detection", gc_power},
		{"what-if sanity", whatif_sanity},
		{"determinism", determinism},
		{"hyper-parameter search", search_checks},
	};
	int failures = 0;
	for (std::size_t i = 0; i < criteria.size(); ++i) {
		Outcome o;
		try {
			o = criteria[i].second();
		} catch (const std::exception& e) {
			o = {false, std::string("threw: ") + e.what()};
		}
		failures += !o.pass;
		std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
				  << o.detail << std::endl;
	}
	return failures == 0 ? 0 : 1;
}
