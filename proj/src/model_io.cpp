#include "panelcast/model_io.hpp"

#include "panelcast/errors.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace fs = std::filesystem;

namespace panelcast {

namespace {

constexpr int kFormatVersion = 1;

void check_object(const Json& j, const char* what) {
	if (!j.is_object())
		throw SchemaError(std::string(what) + " must be a JSON object");
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
	check_object(j, what);
	for (const auto& item : j.items()) {
		if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; }))
			throw SchemaError(std::string("unknown key '") + item.key() + "' in " + what);
	}
}

template <class T>
void read(const Json& j, const char* key, T& out) {
	auto it = j.find(key);
	if (it == j.end())
		return;
	try {
		out = it->template get<T>();
	} catch (const nlohmann::json::exception&) {
		throw SchemaError(std::string("key '") + key + "' has the wrong type");
	}
}

template <class T>
T require(const Json& j, const char* key) {
	if (!j.contains(key))
		throw SchemaError(std::string("missing key '") + key + "'");
	T out{};
	read(j, key, out);
	return out;
}

std::string param_file(const std::string& group, std::size_t k) {
	return group + "_seed" + std::to_string(k) + ".json";
}

Json state_to_json(const SeriesState& s) {
	Json j;
	j["id"] = s.id;
	j["category"] = s.category;
	j["group"] = s.group;
	j["start"] = s.start.str();
	j["mean_scale"] = s.scale.mean_scale;
	j["log_offset"] = s.scale.log_offset;
	j["history"] = s.history;
	j["seasonal"] = s.decomposition.seasonal;
	j["trend"] = s.decomposition.trend;
	j["remainder"] = s.decomposition.remainder;
	auto& exo = j["exogenous"] = Json::array();
	for (const auto& e : s.exogenous)
		exo.push_back({{"name", e.name}, {"mean_scale", e.mean_scale}, {"raw", e.raw}});
	return j;
}

SeriesState state_from_json(const Json& j, int period) {
	check_object(j, "series state");
	SeriesState s;
	s.id = require<std::string>(j, "id");
	s.category = require<std::string>(j, "category");
	s.group = require<std::string>(j, "group");
	s.start = YearMonth::parse(require<std::string>(j, "start"));
	s.history = require<std::vector<double>>(j, "history");
	s.scale.id = s.id;
	s.scale.mean_scale = require<double>(j, "mean_scale");
	s.scale.log_offset = require<double>(j, "log_offset");
	ScaledSeries scaled;
	scaled.values.reserve(s.history.size());
	for (double v : s.history)
		scaled.values.push_back(v / s.scale.mean_scale);
	s.transformed = log_stabilize(scaled.values, s.scale);
	s.decomposition.id = s.id;
	s.decomposition.period = period;
	s.decomposition.start = s.start;
	s.decomposition.seasonal = require<std::vector<double>>(j, "seasonal");
	s.decomposition.trend = require<std::vector<double>>(j, "trend");
	s.decomposition.remainder = require<std::vector<double>>(j, "remainder");
	const auto n = s.history.size();
	if (s.decomposition.seasonal.size() != n || s.decomposition.trend.size() != n ||
		s.decomposition.remainder.size() != n)
		throw SchemaError("decomposition of '" + s.id + "' does not match its history");
	if (j.contains("exogenous")) {
		for (const auto& e : j.at("exogenous")) {
			SeriesState::Exogenous x;
			x.name = require<std::string>(e, "name");
			x.mean_scale = require<double>(e, "mean_scale");
			x.raw = require<std::vector<double>>(e, "raw");
			if (x.raw.size() != n)
				throw SchemaError("exogenous '" + x.name + "' of '" + s.id + "' does not match its history");
			s.exogenous.push_back(std::move(x));
		}
	}
	return s;
}

} // namespace

Json to_json(const NetworkConfig& c) {
	Json j;
	j["cell_dimension"] = c.cell_dimension;
	j["hidden_layers"] = c.hidden_layers;
	j["minibatch_size"] = c.minibatch_size;
	j["epoch_size"] = c.epoch_size;
	j["max_epochs"] = c.max_epochs;
	j["gaussian_noise_std"] = c.gaussian_noise_std;
	j["init_std"] = c.init_std;
	j["l2_weight"] = c.l2_weight;
	j["seed"] = c.seed;
	return j;
}

void from_json(const Json& j, NetworkConfig& c) {
	check_keys(j,
			   {"cell_dimension", "hidden_layers", "minibatch_size", "epoch_size", "max_epochs", "gaussian_noise_std",
				"init_std", "l2_weight", "seed"},
			   "network config");
	read(j, "cell_dimension", c.cell_dimension);
	read(j, "hidden_layers", c.hidden_layers);
	read(j, "minibatch_size", c.minibatch_size);
	read(j, "epoch_size", c.epoch_size);
	read(j, "max_epochs", c.max_epochs);
	read(j, "gaussian_noise_std", c.gaussian_noise_std);
	read(j, "init_std", c.init_std);
	read(j, "l2_weight", c.l2_weight);
	read(j, "seed", c.seed);
}

Json to_json(const StlConfig& c) {
	Json j;
	j["seasonal_window"] = c.seasonal_window;
	j["seasonal_degree"] = c.seasonal_degree;
	j["trend_window"] = c.trend_window;
	j["trend_degree"] = c.trend_degree;
	j["lowpass_window"] = c.lowpass_window;
	j["lowpass_degree"] = c.lowpass_degree;
	j["inner_iterations"] = c.inner_iterations;
	j["robust_iterations"] = c.robust_iterations;
	return j;
}

void from_json(const Json& j, StlConfig& c) {
	check_keys(j,
			   {"seasonal_window", "seasonal_degree", "trend_window", "trend_degree", "lowpass_window",
				"lowpass_degree", "inner_iterations", "robust_iterations"},
			   "decomposition config");
	read(j, "seasonal_window", c.seasonal_window);
	read(j, "seasonal_degree", c.seasonal_degree);
	read(j, "trend_window", c.trend_window);
	read(j, "trend_degree", c.trend_degree);
	read(j, "lowpass_window", c.lowpass_window);
	read(j, "lowpass_degree", c.lowpass_degree);
	read(j, "inner_iterations", c.inner_iterations);
	read(j, "robust_iterations", c.robust_iterations);
}

Json to_json(const WindowSpec& w) {
	Json j;
	j["input_size"] = w.input_size;
	j["output_size"] = w.output_size;
	j["stride"] = w.stride;
	return j;
}

void from_json(const Json& j, WindowSpec& w) {
	check_keys(j, {"input_size", "output_size", "stride"}, "window config");
	read(j, "input_size", w.input_size);
	read(j, "output_size", w.output_size);
	read(j, "stride", w.stride);
}

Json to_json(const PipelineConfig& c) {
	Json j;
	j["paradigm"] = to_string(c.paradigm);
	j["grouping"] = to_string(c.grouping);
	j["window"] = to_json(c.window);
	j["network"] = to_json(c.network);
	j["stl"] = to_json(c.stl);
	j["ensemble_seeds"] = c.ensemble_seeds;
	j["master_seed"] = c.master_seed;
	j["exogenous"] = c.exogenous_names;
	return j;
}

void from_json(const Json& j, PipelineConfig& c) {
	check_keys(j,
			   {"paradigm", "grouping", "window", "network", "stl", "ensemble_seeds", "master_seed", "exogenous",
				"execution"},
			   "pipeline config");
	try {
		if (j.contains("paradigm"))
			c.paradigm = parse_paradigm(require<std::string>(j, "paradigm"));
		if (j.contains("grouping"))
			c.grouping = parse_grouping(require<std::string>(j, "grouping"));
		if (j.contains("execution"))
			c.execution = parse_execution(require<std::string>(j, "execution"));
	} catch (const ConfigError& e) {
		throw SchemaError(e.what());
	}
	if (j.contains("window"))
		from_json(j.at("window"), c.window);
	if (j.contains("network"))
		from_json(j.at("network"), c.network);
	if (j.contains("stl"))
		from_json(j.at("stl"), c.stl);
	read(j, "ensemble_seeds", c.ensemble_seeds);
	read(j, "master_seed", c.master_seed);
	read(j, "exogenous", c.exogenous_names);
	c.window.paradigm = c.paradigm;
}

Json to_json(const SynthSpec& s) {
	Json j;
	j["n_series"] = s.n_series;
	j["n_months"] = s.n_months;
	j["period"] = s.period;
	j["start"] = s.start.str();
	j["categories"] = s.categories;
	j["base"] = {s.base_min, s.base_max};
	j["slope"] = {s.slope_min, s.slope_max};
	j["amplitude"] = {s.amplitude_min, s.amplitude_max};
	j["noise_std"] = s.noise_std;
	j["seed"] = s.seed;
	if (s.driver) {
		const auto& d = *s.driver;
		j["driver"] = {{"name", d.name},	 {"lag", d.lag}, {"beta", d.beta},
					   {"mean", d.mean},	 {"std", d.std}, {"persistence", d.persistence}};
	}
	return j;
}

void from_json(const Json& j, SynthSpec& s) {
	check_keys(j,
			   {"n_series", "n_months", "period", "start", "categories", "base", "slope", "amplitude", "noise_std",
				"seed", "driver"},
			   "synthetic spec");
	read(j, "n_series", s.n_series);
	read(j, "n_months", s.n_months);
	read(j, "period", s.period);
	if (j.contains("start"))
		s.start = YearMonth::parse(require<std::string>(j, "start"));
	read(j, "categories", s.categories);
	auto range = [&](const char* key, double& lo, double& hi) {
		if (!j.contains(key))
			return;
		auto v = require<std::vector<double>>(j, key);
		if (v.size() != 2 || v[0] > v[1])
			throw SchemaError(std::string("key '") + key + "' must be [min, max]");
		lo = v[0];
		hi = v[1];
	};
	range("base", s.base_min, s.base_max);
	range("slope", s.slope_min, s.slope_max);
	range("amplitude", s.amplitude_min, s.amplitude_max);
	read(j, "noise_std", s.noise_std);
	read(j, "seed", s.seed);
	if (j.contains("driver")) {
		const auto& d = j.at("driver");
		if (d.is_null()) {
			s.driver.reset();
		} else {
			check_keys(d, {"name", "lag", "beta", "mean", "std", "persistence"}, "driver spec");
			DriverSpec spec = s.driver.value_or(DriverSpec{});
			read(d, "name", spec.name);
			read(d, "lag", spec.lag);
			read(d, "beta", spec.beta);
			read(d, "mean", spec.mean);
			read(d, "std", spec.std);
			read(d, "persistence", spec.persistence);
			s.driver = spec;
		}
	}
}

Json to_json(const NetworkParameters& p) {
	const auto& shape = p.shape();
	Json j;
	j["input_channels"] = shape.input_channels;
	j["cell_dimension"] = shape.cell_dimension;
	j["hidden_layers"] = shape.hidden_layers;
	j["output_size"] = shape.output_size;
	auto& blocks = j["blocks"] = Json::object();
	for (const auto& b : p.blocks()) {
		auto values = p.values().subspan(b.offset, b.size());
		blocks[b.name] = std::vector<double>(values.begin(), values.end());
	}
	return j;
}

NetworkParameters parameters_from_json(const Json& j) {
	check_keys(j, {"input_channels", "cell_dimension", "hidden_layers", "output_size", "blocks"}, "parameter file");
	NetworkShape shape;
	shape.input_channels = require<int>(j, "input_channels");
	shape.cell_dimension = require<int>(j, "cell_dimension");
	shape.hidden_layers = require<int>(j, "hidden_layers");
	shape.output_size = require<int>(j, "output_size");
	if (shape.input_channels < 1 || shape.cell_dimension < 1 || shape.hidden_layers < 1 || shape.output_size < 1)
		throw SchemaError("parameter shape must be positive");
	NetworkParameters p(shape);
	const auto& blocks = j.at("blocks");
	check_object(blocks, "parameter blocks");
	if (blocks.size() != p.blocks().size())
		throw SchemaError("parameter file has the wrong number of blocks");
	for (const auto& b : p.blocks()) {
		auto values = require<std::vector<double>>(blocks, b.name.c_str());
		if (values.size() != b.size())
			throw SchemaError("block '" + b.name + "' has the wrong size");
		std::copy(values.begin(), values.end(), p.values().begin() + static_cast<std::ptrdiff_t>(b.offset));
	}
	return p;
}

Json read_json_file(const fs::path& path) {
	std::ifstream in(path);
	if (!in)
		throw SchemaError("cannot open '" + path.string() + "'");
	try {
		return Json::parse(in);
	} catch (const nlohmann::json::parse_error& e) {
		throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
	}
}

void write_text_file(const fs::path& path, const std::string& text) {
	if (path.has_parent_path())
		fs::create_directories(path.parent_path());
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw Error("IOError", "cannot write '" + path.string() + "'");
	out << text;
}

void save_model(const TrainedModel& model, const fs::path& dir) {
	fs::create_directories(dir / "params");
	Json manifest;
	manifest["format_version"] = kFormatVersion;
	manifest["config"] = to_json(model.config);
	manifest["period"] = model.period;
	manifest["seeds"] = model.seeds;
	auto& groups = manifest["groups"] = Json::array();
	for (const auto& g : model.groups) {
		Json jg;
		jg["name"] = g.name;
		jg["series_ids"] = g.series_ids;
		jg["channel_layout"] = g.channel_layout;
		jg["epoch_losses"] = g.epoch_losses;
		auto& files = jg["parameter_files"] = Json::array();
		for (std::size_t k = 0; k < g.members.size(); ++k) {
			const auto name = param_file(g.name, k);
			files.push_back("params/" + name);
			write_text_file(dir / "params" / name, to_json(g.members[k]).dump() + "\n");
		}
		groups.push_back(std::move(jg));
	}
	auto& series = manifest["series"] = Json::array();
	for (const auto& s : model.series)
		series.push_back(state_to_json(s));
	write_text_file(dir / "manifest.json", manifest.dump(1, '\t') + "\n");
}

TrainedModel load_model(const fs::path& dir) {
	const Json manifest = read_json_file(dir / "manifest.json");
	check_keys(manifest, {"format_version", "config", "period", "seeds", "groups", "series"}, "model manifest");
	if (require<int>(manifest, "format_version") != kFormatVersion)
		throw SchemaError("unsupported model format version");
	TrainedModel model;
	from_json(manifest.at("config"), model.config);
	model.period = require<int>(manifest, "period");
	model.seeds = require<std::vector<std::uint64_t>>(manifest, "seeds");
	for (const auto& jg : manifest.at("groups")) {
		GroupModel g;
		g.name = require<std::string>(jg, "name");
		g.series_ids = require<std::vector<std::string>>(jg, "series_ids");
		g.channel_layout = require<std::vector<std::string>>(jg, "channel_layout");
		g.epoch_losses = require<std::vector<std::vector<double>>>(jg, "epoch_losses");
		for (const auto& file : require<std::vector<std::string>>(jg, "parameter_files"))
			g.members.push_back(parameters_from_json(read_json_file(dir / file)));
		if (g.members.size() != model.seeds.size())
			throw SchemaError("group '" + g.name + "' has the wrong number of members");
		model.groups.push_back(std::move(g));
	}
	for (const auto& js : manifest.at("series"))
		model.series.push_back(state_from_json(js, model.period));
	if (!std::is_sorted(model.series.begin(), model.series.end(),
						[](const SeriesState& a, const SeriesState& b) { return a.id < b.id; }))
		throw SchemaError("model series must be sorted by id");
	return model;
}

} // namespace panelcast
