#include "panelcast/windowing.hpp"

#include "panelcast/errors.hpp"

#include <cmath>
#include <ostream>

namespace panelcast {

Paradigm parse_paradigm(const std::string& text) {
	if (text == "ds" || text == "DS")
		return Paradigm::deseasonalised;
	if (text == "se" || text == "SE")
		return Paradigm::seasonal_exogenous;
	throw ConfigError("unknown paradigm '" + text + "' (expected ds or se)");
}

std::string to_string(Paradigm paradigm) {
	return paradigm == Paradigm::deseasonalised ? "ds" : "se";
}

void WindowSpec::validate() const {
	if (input_size < 1 || output_size < 1 || stride < 1)
		throw ConfigError("window sizes and stride must be at least 1");
}

std::vector<double> scale_exogenous(std::span<const double> raw, double mean_scale, double multiplier) {
	if (!(mean_scale > 0.0))
		throw DegenerateSeriesError("exogenous series has zero mean, cannot scale");
	std::vector<double> out;
	out.reserve(raw.size());
	for (double v : raw)
		out.push_back(v * multiplier / mean_scale - 1.0);
	return out;
}

std::vector<std::string> channel_layout(Paradigm paradigm, const std::vector<std::string>& exogenous_names) {
	std::vector<std::string> layout{"primary"};
	if (paradigm == Paradigm::seasonal_exogenous)
		layout.emplace_back("seasonal");
	for (const auto& name : exogenous_names)
		layout.push_back("exo:" + name);
	return layout;
}

int window_count(int n, const WindowSpec& spec) {
	const int span = spec.input_size + spec.output_size;
	if (n < span)
		return 0;
	return (n - span) / spec.stride + 1;
}

std::vector<TrainingWindow> make_windows(const std::string& series_id, std::span<const double> series,
										 std::span<const double> seasonal,
										 const std::vector<ExogenousChannel>& exogenous, const WindowSpec& spec) {
	spec.validate();
	const int n = static_cast<int>(series.size());
	const bool with_seasonal = spec.paradigm == Paradigm::seasonal_exogenous;
	if (with_seasonal && seasonal.size() != series.size())
		throw ShapeError("seasonal component length does not match series '" + series_id + "'");
	std::vector<std::string> names;
	for (const auto& exo : exogenous) {
		if (exo.values.size() != series.size())
			throw ShapeError("exogenous '" + exo.name + "' length does not match series '" + series_id + "'");
		names.push_back(exo.name);
	}
	const int count = window_count(n, spec);
	if (count == 0)
		throw LengthError("series '" + series_id + "' of length " + std::to_string(n) + " is shorter than " +
						  std::to_string(spec.input_size + spec.output_size) + " and yields no window");

	const auto layout = channel_layout(spec.paradigm, names);
	const int channels = static_cast<int>(layout.size());
	std::vector<TrainingWindow> windows;
	windows.reserve(static_cast<std::size_t>(count));
	for (int k = 0; k < count; ++k) {
		const int offset = k * spec.stride;
		TrainingWindow w;
		w.series_id = series_id;
		w.offset = offset;
		w.channel_layout = layout;
		w.input.resize(spec.input_size, channels);
		for (int t = 0; t < spec.input_size; ++t) {
			int c = 0;
			w.input(t, c++) = series[offset + t];
			if (with_seasonal)
				w.input(t, c++) = seasonal[offset + t];
			for (const auto& exo : exogenous)
				w.input(t, c++) = exo.values[offset + t];
		}
		w.target.resize(spec.output_size);
		for (int h = 0; h < spec.output_size; ++h)
			w.target(h) = series[offset + spec.input_size + h];
		windows.push_back(std::move(w));
	}
	return windows;
}

double local_norm_value(const Eigen::MatrixXd& input, int offset, std::span<const double> trend,
						Paradigm paradigm) {
	double level = 0.0;
	if (paradigm == Paradigm::deseasonalised) {
		const std::size_t last = static_cast<std::size_t>(offset + input.rows() - 1);
		if (last >= trend.size())
			throw ShapeError("trend does not cover the window's last input step");
		level = trend[last];
	} else {
		level = input.col(0).mean();
	}
	if (!std::isfinite(level))
		throw NumericalError("non-finite local normalisation level at offset " + std::to_string(offset));
	return level;
}

TrainingWindow local_normalize(TrainingWindow w, std::span<const double> trend, Paradigm paradigm) {
	w.norm_value = local_norm_value(w.input, w.offset, trend, paradigm);
	w.input.col(0).array() -= w.norm_value;
	w.target.array() -= w.norm_value;
	return w;
}

std::vector<double> denormalize(std::span<const double> forecast, double norm_value) {
	std::vector<double> out(forecast.begin(), forecast.end());
	for (double& v : out)
		v += norm_value;
	return out;
}

void write_windows_csv(std::ostream& out, const std::vector<TrainingWindow>& windows) {
	out << "series_id,offset,channel,step,value\n";
	const auto precision = out.precision(17);
	for (const auto& w : windows) {
		for (Eigen::Index c = 0; c < w.input.cols(); ++c)
			for (Eigen::Index t = 0; t < w.input.rows(); ++t)
				out << w.series_id << ',' << w.offset << ',' << w.channel_layout[static_cast<std::size_t>(c)] << ','
					<< t << ',' << w.input(t, c) << '\n';
		for (Eigen::Index h = 0; h < w.target.size(); ++h)
			out << w.series_id << ',' << w.offset << ",target," << h << ',' << w.target(h) << '\n';
	}
	out.precision(precision);
}

} // namespace panelcast
