// Serial reference vs OpenMP paths of the data-parallel kernels.

#include "panelcast/pipeline.hpp"
#include "panelcast/synth.hpp"
#include "panelcast/trainer.hpp"

#include <benchmark/benchmark.h>

using namespace panelcast;

namespace {

const std::vector<TrainingWindow>& windows() {
	static const auto w = [] {
		SynthSpec spec;
		spec.n_series = 40;
		const auto panel = generate(spec).panel;
		PipelineConfig c;
		std::vector<TrainingWindow> out;
		for (const auto& s : panel.series()) {
			auto part = series_windows(prepare_series(panel, s, "all", c), c);
			out.insert(out.end(), part.begin(), part.end());
		}
		return out;
	}();
	return w;
}

Execution mode(const benchmark::State& state) {
	return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_BatchGradient(benchmark::State& state) {
	const auto& ws = windows();
	const auto params = init_parameters(NetworkConfig{}, 1, 12);
	std::vector<const TrainingWindow*> batch;
	for (std::size_t i = 0; i < 64; ++i)
		batch.push_back(&ws[i]);
	for (auto _ : state)
		benchmark::DoNotOptimize(batch_gradient(params, batch, 3e-4, 1, mode(state)));
	state.SetItemsProcessed(state.iterations() * 64);
}

void BM_TrainMany(benchmark::State& state) {
	const auto& ws = windows();
	std::vector<NetworkConfig> configs(4);
	for (std::size_t k = 0; k < configs.size(); ++k) {
		configs[k].seed = k + 1;
		configs[k].max_epochs = 1;
		configs[k].epoch_size = 1;
	}
	for (auto _ : state)
		benchmark::DoNotOptimize(train_many(ws, configs, mode(state)));
}

void BM_Forecast(benchmark::State& state) {
	SynthSpec spec;
	spec.n_series = 40;
	PipelineConfig c;
	c.ensemble_seeds = 3;
	c.network.max_epochs = 1;
	c.network.epoch_size = 1;
	static const auto model = fit(generate(spec).panel, c);
	ForecastOptions options;
	options.execution = mode(state);
	for (auto _ : state)
		benchmark::DoNotOptimize(forecast(model, 12, options));
}

} // namespace

BENCHMARK(BM_BatchGradient)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainMany)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Forecast)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
