#include "panelcast/cli.hpp"

#include "panelcast/causal.hpp"
#include "panelcast/errors.hpp"
#include "panelcast/gateway.hpp"
#include "panelcast/metrics.hpp"
#include "panelcast/synth.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <omp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace panelcast {

std::string sha256_hex(const std::string& bytes) {
	unsigned char digest[EVP_MAX_MD_SIZE];
	unsigned int length = 0;
	if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
		throw Error("DigestError", "SHA-256 failed");
	std::ostringstream hex;
	for (unsigned int i = 0; i < length; ++i)
		hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
	return hex.str();
}

std::string file_sha256(const fs::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw Error("FileNotFoundError", "cannot read '" + path.string() + "'");
	return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

void RunManifest::add_input(const fs::path& path) {
	inputs[path.string()] = file_sha256(path);
}

void RunManifest::add_artifact(const fs::path& path) {
	if (fs::is_directory(path)) {
		std::vector<fs::path> files;
		for (const auto& e : fs::recursive_directory_iterator(path))
			if (e.is_regular_file() && e.path().filename() != "run_manifest.json")
				files.push_back(e.path());
		std::sort(files.begin(), files.end());
		for (const auto& f : files)
			artifacts[f.string()] = file_sha256(f);
	} else {
		artifacts[path.string()] = file_sha256(path);
	}
}

Json RunManifest::to_json() const {
	Json j;
	j["command"] = command;
	j["arguments"] = arguments;
	j["config"] = config;
	j["inputs"] = inputs;
	j["master_seed"] = master_seed;
	j["artifacts"] = artifacts;
	j["timing"] = {{"seconds", seconds}, {"threads", threads}};
	return j;
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> split_list(const std::vector<std::string>& items) {
	std::vector<std::string> out;
	for (const auto& item : items) {
		std::stringstream ss(item);
		std::string part;
		while (std::getline(ss, part, ','))
			if (!part.empty())
				out.push_back(part);
	}
	return out;
}

void require_file(const std::string& path, const char* what) {
	if (!fs::is_regular_file(path))
		throw Error("FileNotFoundError", std::string(what) + " '" + path + "' does not exist");
}

/// Options shared by the commands that fit pipelines. Flags given on the
/// command line override the JSON config file.
struct PipelineFlags {
	std::string config_path;
	std::string paradigm;
	std::string grouping;
	std::string execution;
	std::uint64_t master_seed = 0;
	int ensemble_seeds = 0;
	std::vector<std::string> exogenous;
	int input_size = 0;
	int horizon = 0;
	int cell = 0;
	int layers = 0;
	int batch = 0;
	int epoch_size = 0;
	int max_epochs = 0;
	std::vector<CLI::Option*> given;

	void attach(CLI::App* app, bool with_exogenous = true) {
		app->add_option("--config", config_path, "pipeline config JSON")->check(CLI::ExistingFile);
		given = {
			app->add_option("--paradigm", paradigm, "ds or se"),
			app->add_option("--grouping", grouping, "all or category"),
			app->add_option("--execution", execution, "serial or parallel"),
			app->add_option("--seed", master_seed, "master seed"),
			app->add_option("--seeds", ensemble_seeds, "ensemble size"),
			with_exogenous ? app->add_option("--exogenous", exogenous, "exogenous input channels (comma list)")
						   : nullptr,
			app->add_option("--input-size", input_size, "input window length"),
			app->add_option("--horizon", horizon, "output window length"),
			app->add_option("--cell", cell, "LSTM cell dimension"),
			app->add_option("--layers", layers, "hidden layers"),
			app->add_option("--batch", batch, "minibatch size"),
			app->add_option("--epoch-size", epoch_size, "passes per epoch"),
			app->add_option("--epochs", max_epochs, "maximum epochs"),
		};
	}

	bool has(std::size_t i) const { return given[i] != nullptr && given[i]->count() > 0; }

	PipelineConfig resolve() const {
		PipelineConfig c;
		if (!config_path.empty())
			from_json(read_json_file(config_path), c);
		if (has(0))
			c.paradigm = parse_paradigm(paradigm);
		if (has(1))
			c.grouping = parse_grouping(grouping);
		if (has(2))
			c.execution = parse_execution(execution);
		if (has(3))
			c.master_seed = master_seed;
		if (has(4))
			c.ensemble_seeds = ensemble_seeds;
		if (has(5))
			c.exogenous_names = split_list(exogenous);
		if (has(6))
			c.window.input_size = input_size;
		if (has(7)) {
			c.window.output_size = horizon;
			if (!has(6))
				c.window.input_size = WindowSpec::default_input_size(horizon);
		}
		if (has(8))
			c.network.cell_dimension = cell;
		if (has(9))
			c.network.hidden_layers = layers;
		if (has(10))
			c.network.minibatch_size = batch;
		if (has(11))
			c.network.epoch_size = epoch_size;
		if (has(12))
			c.network.max_epochs = max_epochs;
		c.window.paradigm = c.paradigm;
		c.validate();
		return c;
	}
};

struct PanelFlags {
	std::string panel_path;
	std::string exo_path;
	int frequency = 12;

	void attach(CLI::App* app, bool required = true) {
		auto* p = app->add_option("--panel", panel_path, "long-format panel CSV");
		if (required)
			p->required();
		app->add_option("--exo", exo_path, "long-format exogenous CSV (category = variable name)");
		app->add_option("--frequency", frequency, "seasonal period")->check(CLI::Range(2, 366));
	}

	Panel load(RunManifest& manifest) const {
		require_file(panel_path, "panel file");
		manifest.add_input(panel_path);
		if (!exo_path.empty()) {
			require_file(exo_path, "exogenous file");
			manifest.add_input(exo_path);
		}
		return load_panel_file(panel_path, exo_path, frequency);
	}
};

std::string fixed(double v, int digits = 4) {
	std::ostringstream s;
	s << std::fixed << std::setprecision(digits) << v;
	return s.str();
}

void write_stream_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
	std::ostringstream s;
	writer(s);
	write_text_file(path, s.str());
}

fs::path manifest_path_for(const fs::path& artifact) {
	if (fs::is_directory(artifact))
		return artifact / "run_manifest.json";
	return fs::path(artifact.string() + ".run.json");
}

std::string method_name(const PipelineConfig& c) {
	return "lstm_" + to_string(c.paradigm) + "_" + to_string(c.grouping);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
	CLI::App app{"Global LSTM forecasting for panels of monthly series"};
	app.require_subcommand(1);
	int threads = 0;
	app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

	RunManifest manifest;
	std::function<std::string()> action;
	fs::path manifest_target;

	// synth
	auto* synth = app.add_subcommand("synth", "write a synthetic panel");
	struct {
		std::string out, exo_out, config;
		int series = 0, months = 0;
		std::uint64_t seed = 0;
		double noise = 0, beta = 0, persistence = 0;
		int lag = 0;
		std::string driver;
		std::vector<std::string> categories;
	} sf;
	synth->add_option("--out", sf.out, "panel CSV to write")->required();
	synth->add_option("--exo-out", sf.exo_out, "exogenous CSV to write");
	synth->add_option("--config", sf.config, "synthetic spec JSON")->check(CLI::ExistingFile);
	auto* s_series = synth->add_option("--series", sf.series);
	auto* s_months = synth->add_option("--months", sf.months);
	auto* s_seed = synth->add_option("--seed", sf.seed);
	auto* s_noise = synth->add_option("--noise", sf.noise);
	auto* s_cats = synth->add_option("--categories", sf.categories, "comma list");
	auto* s_driver = synth->add_option("--driver", sf.driver, "planted driver name");
	auto* s_beta = synth->add_option("--driver-beta", sf.beta);
	auto* s_lag = synth->add_option("--driver-lag", sf.lag);
	auto* s_pers = synth->add_option("--driver-persistence", sf.persistence);
	synth->callback([&] {
		action = [&] {
			SynthSpec spec;
			if (!sf.config.empty()) {
				manifest.add_input(sf.config);
				from_json(read_json_file(sf.config), spec);
			}
			if (s_series->count())
				spec.n_series = sf.series;
			if (s_months->count())
				spec.n_months = sf.months;
			if (s_seed->count())
				spec.seed = sf.seed;
			if (s_noise->count())
				spec.noise_std = sf.noise;
			if (s_cats->count())
				spec.categories = split_list(sf.categories);
			if (s_driver->count() || s_beta->count() || s_lag->count() || s_pers->count()) {
				DriverSpec d = spec.driver.value_or(DriverSpec{});
				if (s_driver->count())
					d.name = sf.driver;
				if (s_beta->count())
					d.beta = sf.beta;
				if (s_lag->count())
					d.lag = sf.lag;
				if (s_pers->count())
					d.persistence = sf.persistence;
				spec.driver = d;
			}
			if (spec.driver && sf.exo_out.empty())
				throw ConfigError("a planted driver needs --exo-out");
			const auto result = generate(spec);
			manifest.config = to_json(spec);
			manifest.master_seed = spec.seed;
			write_stream_file(sf.out, [&](std::ostream& o) { write_series_csv(o, result.panel.series()); });
			manifest.add_artifact(sf.out);
			if (spec.driver) {
				write_stream_file(sf.exo_out, [&](std::ostream& o) { write_series_csv(o, result.panel.exogenous()); });
				manifest.add_artifact(sf.exo_out);
			}
			manifest_target = sf.out;
			return "synth: " + std::to_string(spec.n_series) + " series x " + std::to_string(spec.n_months) +
				   " months -> " + sf.out;
		};
	});

	// train
	auto* train_cmd = app.add_subcommand("train", "fit the global model ensemble");
	PanelFlags tp;
	PipelineFlags tf;
	std::string t_out;
	int t_test = 0;
	tp.attach(train_cmd);
	tf.attach(train_cmd);
	train_cmd->add_option("--test", t_test, "months held out from the end of every series")
		->check(CLI::NonNegativeNumber);
	train_cmd->add_option("--out", t_out, "model directory")->required();
	train_cmd->callback([&] {
		action = [&] {
			const auto config = tf.resolve();
			if (!tf.config_path.empty())
				manifest.add_input(tf.config_path);
			Panel panel = tp.load(manifest);
			if (t_test > 0)
				panel = split(panel, {t_test, 0}).train;
			const auto model = fit(panel, config);
			save_model(model, t_out);
			manifest.config = to_json(config);
			manifest.config["holdout"] = t_test;
			manifest.master_seed = config.master_seed;
			manifest.add_artifact(t_out);
			manifest_target = t_out;
			return "train: " + std::to_string(model.series.size()) + " series, " +
				   std::to_string(model.groups.size()) + " group(s), " + std::to_string(model.seeds.size()) +
				   " seed(s), " + method_name(config) + " -> " + t_out;
		};
	});

	// forecast
	auto* fc = app.add_subcommand("forecast", "forecast past the end of the training data");
	std::string f_model, f_out;
	int f_horizon = 0;
	std::vector<std::string> f_ids;
	fc->add_option("--model", f_model, "model directory")->required()->check(CLI::ExistingDirectory);
	fc->add_option("--horizon", f_horizon, "months to forecast (default: the model's horizon)");
	fc->add_option("--ids", f_ids, "series to forecast (comma list)");
	fc->add_option("--out", f_out, "forecast CSV")->required();
	fc->callback([&] {
		action = [&] {
			manifest.add_input(fs::path(f_model) / "manifest.json");
			const auto model = load_model(f_model);
			const int h = f_horizon > 0 ? f_horizon : model.config.window.output_size;
			ForecastOptions options;
			options.ids = split_list(f_ids);
			const auto bundle = forecast(model, h, options);
			write_stream_file(f_out, [&](std::ostream& o) {
				o.precision(17);
				o << "series_id,month,forecast\n";
				for (const auto& s : bundle.series)
					for (std::size_t i = 0; i < s.months.size(); ++i)
						o << s.id << ',' << s.months[i].str() << ',' << s.ensemble[i] << '\n';
			});
			manifest.config = to_json(model.config);
			manifest.config["horizon"] = h;
			manifest.master_seed = model.config.master_seed;
			manifest.add_artifact(f_out);
			manifest_target = f_out;
			return "forecast: " + std::to_string(bundle.series.size()) + " series x " + std::to_string(h) +
				   " months -> " + f_out;
		};
	});

	// evaluate
	auto* ev = app.add_subcommand("evaluate", "score a model on the held-out months");
	std::string e_model, e_out, e_scores, e_json;
	PanelFlags ep;
	int e_test = 12;
	ev->add_option("--model", e_model, "model directory")->required()->check(CLI::ExistingDirectory);
	ep.attach(ev);
	ev->add_option("--test", e_test, "held-out months at the end of the panel")->check(CLI::PositiveNumber);
	ev->add_option("--out", e_out, "aggregate CSV (default: <model>/evaluation.csv)");
	ev->add_option("--scores", e_scores, "per-series scores CSV");
	ev->add_option("--json", e_json, "metrics JSON for the service");
	ev->callback([&] {
		action = [&] {
			manifest.add_input(fs::path(e_model) / "manifest.json");
			const auto model = load_model(e_model);
			const Panel panel = ep.load(manifest);
			if (e_test > model.config.window.output_size)
				throw ConfigError("--test exceeds the model's horizon of " +
								  std::to_string(model.config.window.output_size));
			const auto parts = split(panel, {e_test, 0});
			for (const auto& s : parts.train.series()) {
				const auto* state = model.find(s.id);
				if (state == nullptr)
					throw NotFittedError("series '" + s.id + "' is not in the model");
				if (state->end() != s.end())
					throw ConfigError("model of '" + s.id + "' was trained through " + state->end().str() +
									  ", expected " + s.end().str() + "; train with --test " + std::to_string(e_test));
			}
			const auto bundle = forecast(model, e_test);
			std::vector<SeriesScore> model_scores, naive_scores;
			for (const auto& s : parts.test.series()) {
				const auto& train = parts.train.find(s.id)->values;
				const auto& f = bundle.find(s.id)->ensemble;
				model_scores.push_back({s.id, smape(f, s.values), mase(f, s.values, train, model.period)});
				const auto naive = seasonal_naive(train, model.period, e_test);
				naive_scores.push_back({s.id, smape(naive, s.values), mase(naive, s.values, train, model.period)});
			}
			std::vector<EvalReport> reports{aggregate(model_scores, method_name(model.config)),
											aggregate(naive_scores, "seasonal_naive")};
			const fs::path out_path = e_out.empty() ? fs::path(e_model) / "evaluation.csv" : fs::path(e_out);
			write_stream_file(out_path, [&](std::ostream& o) { write_aggregate_csv(o, reports); });
			manifest.add_artifact(out_path);
			if (!e_scores.empty()) {
				write_stream_file(e_scores, [&](std::ostream& o) { write_series_scores_csv(o, reports[0]); });
				manifest.add_artifact(e_scores);
			}
			if (!e_json.empty()) {
				write_text_file(e_json, reports_to_json(reports).dump(1, '\t') + "\n");
				manifest.add_artifact(e_json);
			}
			manifest.config = to_json(model.config);
			manifest.config["test"] = e_test;
			manifest.master_seed = model.config.master_seed;
			manifest_target = out_path;
			return "evaluate: mean sMAPE " + fixed(reports[0].mean_smape) + " (seasonal naive " +
				   fixed(reports[1].mean_smape) + "), mean MASE " + fixed(reports[0].mean_mase) + " -> " +
				   out_path.string();
		};
	});

	// hpo
	auto* hpo = app.add_subcommand("hpo", "random search over the network hyper-parameters");
	PanelFlags hp;
	PipelineFlags hf;
	std::string h_out, h_trials_out;
	int h_trials = 30, h_test = 12, h_validation = 12;
	hp.attach(hpo);
	hf.attach(hpo);
	hpo->add_option("--trials", h_trials, "configs to evaluate")->check(CLI::PositiveNumber);
	hpo->add_option("--test", h_test, "held-out test months (never read)")->check(CLI::PositiveNumber);
	hpo->add_option("--validation", h_validation, "validation months before the test region")
		->check(CLI::PositiveNumber);
	hpo->add_option("--out", h_out, "winning pipeline config JSON")->required();
	hpo->add_option("--trials-out", h_trials_out, "per-trial CSV");
	hpo->callback([&] {
		action = [&] {
			const auto base = hf.resolve();
			if (!hf.config_path.empty())
				manifest.add_input(hf.config_path);
			const Panel panel = hp.load(manifest);
			const auto result = hyperparameter_search(panel, base, {h_test, h_validation}, SearchBounds{}, h_trials,
													  base.master_seed, base.ensemble_seeds);
			PipelineConfig best = base;
			best.network = result.best;
			write_text_file(h_out, to_json(best).dump(1, '\t') + "\n");
			manifest.add_artifact(h_out);
			if (!h_trials_out.empty()) {
				write_stream_file(h_trials_out, [&](std::ostream& o) {
					o.precision(17);
					o << "trial,cell_dimension,hidden_layers,minibatch_size,epoch_size,max_epochs,"
						 "gaussian_noise_std,init_std,l2_weight,validation_smape\n";
					for (const auto& t : result.trials) {
						const auto& c = t.config;
						o << t.index << ',' << c.cell_dimension << ',' << c.hidden_layers << ',' << c.minibatch_size
						  << ',' << c.epoch_size << ',' << c.max_epochs << ',' << c.gaussian_noise_std << ','
						  << c.init_std << ',' << c.l2_weight << ',' << t.validation_smape << '\n';
					}
				});
				manifest.add_artifact(h_trials_out);
			}
			manifest.config = to_json(base);
			manifest.config["trials"] = h_trials;
			manifest.config["test"] = h_test;
			manifest.config["validation"] = h_validation;
			manifest.config["last_month_read"] = result.last_month_read.str();
			manifest.master_seed = base.master_seed;
			manifest_target = h_out;
			return "hpo: best trial " + std::to_string(result.best_index) + " of " + std::to_string(h_trials) +
				   ", validation sMAPE " + fixed(result.trials[result.best_index].validation_smape) +
				   ", read through " + result.last_month_read.str() + " -> " + h_out;
		};
	});

	// gc
	auto* gc = app.add_subcommand("gc", "does an exogenous candidate improve held-out accuracy");
	PanelFlags gp;
	PipelineFlags gf;
	std::string g_candidate, g_out;
	int g_test = 12;
	gp.attach(gc);
	gf.attach(gc, false);
	gc->add_option("--candidate", g_candidate, "exogenous variable to test")->required();
	gc->add_option("--test", g_test, "held-out months")->check(CLI::PositiveNumber);
	gc->add_option("--out", g_out, "output directory for gc.csv and gc.json")->required();
	gc->callback([&] {
		action = [&] {
			const auto config = gf.resolve();
			if (!gf.config_path.empty())
				manifest.add_input(gf.config_path);
			const Panel panel = gp.load(manifest);
			const auto report = gc_compare(panel, g_candidate, config, {g_test, 0});
			fs::create_directories(g_out);
			write_stream_file(fs::path(g_out) / "gc.csv", [&](std::ostream& o) { write_gc_csv(o, report); });
			write_text_file(fs::path(g_out) / "gc.json", gc_json(report) + "\n");
			manifest.config = to_json(config);
			manifest.config["candidate"] = g_candidate;
			manifest.config["test"] = g_test;
			manifest.master_seed = config.master_seed;
			manifest.add_artifact(g_out);
			manifest_target = g_out;
			return "gc: " + g_candidate + " mean sMAPE with " + fixed(report.mean_with) + ", without " +
				   fixed(report.mean_without) + ", Wilcoxon p " + fixed(report.wilcoxon.p_value) +
				   (report.improved ? ", improvement observed" : ", no improvement") + " -> " + g_out;
		};
	});

	// whatif
	auto* wi = app.add_subcommand("whatif", "baseline vs scaled-exogenous forecasts");
	std::string w_model, w_exo, w_out;
	double w_multiplier = 1.0;
	int w_horizon = 0;
	std::vector<std::string> w_ids;
	wi->add_option("--model", w_model, "model directory")->required()->check(CLI::ExistingDirectory);
	wi->add_option("--exo", w_exo, "exogenous channel to perturb")->required();
	wi->add_option("--multiplier", w_multiplier, "scale applied to the exogenous values")->required();
	wi->add_option("--horizon", w_horizon, "months to forecast (default: the model's horizon)");
	wi->add_option("--ids", w_ids, "series to include (comma list)");
	wi->add_option("--out", w_out, "baseline+scenario CSV (default: whatif.csv)");
	wi->callback([&] {
		action = [&] {
			manifest.add_input(fs::path(w_model) / "manifest.json");
			const auto model = load_model(w_model);
			const int h = w_horizon > 0 ? w_horizon : model.config.window.output_size;
			const auto result = whatif(model, {w_exo, w_multiplier, split_list(w_ids)}, h);
			const std::string path = w_out.empty() ? "whatif.csv" : w_out;
			write_stream_file(path, [&](std::ostream& o) { write_whatif_csv(o, result); });
			double base_sum = 0.0, scen_sum = 0.0;
			for (const auto& s : result.series)
				for (std::size_t i = 0; i < s.baseline.size(); ++i) {
					base_sum += s.baseline[i];
					scen_sum += s.scenario[i];
				}
			manifest.config = to_json(model.config);
			manifest.config["exogenous"] = w_exo;
			manifest.config["multiplier"] = w_multiplier;
			manifest.master_seed = model.config.master_seed;
			manifest.add_artifact(path);
			manifest_target = path;
			const double change = base_sum > 0.0 ? 100.0 * (scen_sum - base_sum) / base_sum : 0.0;
			return "whatif: " + w_exo + " x" + fixed(w_multiplier, 3) + " changes total forecast by " +
				   fixed(change, 2) + "% over " + std::to_string(result.series.size()) + " series -> " + path;
		};
	});

	// serve
	auto* sv = app.add_subcommand("serve", "serve forecasts and what-if scenarios over HTTP");
	std::string s_model, s_bind = "127.0.0.1:8080", s_metrics;
	int s_horizon = 0;
	sv->add_option("--model", s_model, "model directory")->required()->check(CLI::ExistingDirectory);
	sv->add_option("--bind", s_bind, "host:port");
	sv->add_option("--horizon", s_horizon, "forecast months (default: the model's horizon)");
	sv->add_option("--metrics", s_metrics, "metrics JSON written by evaluate --json")->check(CLI::ExistingFile);
	sv->callback([&] {
		action = [&] {
			const auto colon = s_bind.rfind(':');
			if (colon == std::string::npos)
				throw ConfigError("--bind must be host:port");
			const std::string host = s_bind.substr(0, colon);
			int port = 0;
			try {
				port = std::stoi(s_bind.substr(colon + 1));
			} catch (const std::exception&) {
				throw ConfigError("--bind must be host:port");
			}
			auto model = load_model(s_model);
			const int h = s_horizon > 0 ? s_horizon : model.config.window.output_size;
			std::vector<EvalReport> metrics;
			if (!s_metrics.empty())
				metrics = reports_from_json(read_json_file(s_metrics));
			Gateway gateway(std::move(model), h, std::move(metrics));
			out << "serve: listening on " << host << ':' << port << std::endl;
			serve(gateway, host, port);
			return std::string("serve: stopped");
		};
	});

	std::vector<std::string> reversed(args.rbegin(), args.rend());
	try {
		app.parse(reversed);
	} catch (const CLI::CallForHelp&) {
		out << app.help();
		return 0;
	} catch (const CLI::ParseError& e) {
		err << "error code=UsageError message=\"" << e.what() << "\"\n";
		return 2;
	}

	try {
		if (threads > 0)
			omp_set_num_threads(threads);
		manifest.command = app.get_subcommands().front()->get_name();
		manifest.arguments = args;
		manifest.threads = max_threads();
		const auto started = Clock::now();
		const std::string summary = action();
		manifest.seconds = std::chrono::duration<double>(Clock::now() - started).count();
		if (!manifest_target.empty())
			write_text_file(manifest_path_for(manifest_target), manifest.to_json().dump(1, '\t') + "\n");
		out << summary << '\n';
		return 0;
	} catch (const Error& e) {
		err << "error code=" << e.code() << " message=\"" << e.what() << "\"\n";
	} catch (const fs::filesystem_error& e) {
		err << "error code=IOError message=\"" << e.what() << "\"\n";
	} catch (const std::exception& e) {
		err << "error code=InternalError message=\"" << e.what() << "\"\n";
	}
	return 1;
}

} // namespace panelcast
