#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace panelcast {

/// DS trains on the deseasonalised series and re-adds seasonality afterwards;
/// SE trains on the full series with the seasonal component as an input channel.
enum class Paradigm { deseasonalised, seasonal_exogenous };

Paradigm parse_paradigm(const std::string& text);
std::string to_string(Paradigm paradigm);

struct WindowSpec {
	int input_size = 15;
	int output_size = 12;
	int stride = 1;
	Paradigm paradigm = Paradigm::deseasonalised;

	/// ceil(1.25 * horizon), the usual input-size heuristic.
	static int default_input_size(int output_size) { return (5 * output_size + 3) / 4; }
	void validate() const;
};

/// An extra input channel, already mapped to channel space.
struct ExogenousChannel {
	std::string name;
	std::vector<double> values;
};

/// Maps raw exogenous values to channel space: raw * multiplier / mean_scale - 1.
/// The level is kept (no per-window centering) so scenario multipliers stay visible.
std::vector<double> scale_exogenous(std::span<const double> raw, double mean_scale, double multiplier = 1.0);

struct TrainingWindow {
	std::string series_id;
	int offset = 0;
	Eigen::MatrixXd input; // steps x channels; channel 0 is the primary series
	Eigen::VectorXd target;
	double norm_value = 0.0;
	std::vector<std::string> channel_layout;
};

std::vector<std::string> channel_layout(Paradigm paradigm, const std::vector<std::string>& exogenous_names);

/// Number of windows a length-n series yields (0 when too short).
int window_count(int n, const WindowSpec& spec);

/// Slices `series` into (input, target) pairs at offsets 0, stride, 2*stride, ...
/// For DS pass the deseasonalised series; `seasonal` is then ignored. For SE the
/// seasonal values at the input steps are attached as channel 1. Exogenous
/// channels follow. Throws LengthError when no window fits.
std::vector<TrainingWindow> make_windows(const std::string& series_id, std::span<const double> series,
										 std::span<const double> seasonal,
										 const std::vector<ExogenousChannel>& exogenous, const WindowSpec& spec);

/// The level subtracted from a window's primary channel: DS uses the trend at the
/// last input step, SE the mean of the primary input channel.
double local_norm_value(const Eigen::MatrixXd& input, int offset, std::span<const double> trend,
						Paradigm paradigm);

/// Subtracts the local level from the primary input channel and from the target.
/// Throws NumericalError on a non-finite level.
TrainingWindow local_normalize(TrainingWindow w, std::span<const double> trend, Paradigm paradigm);

std::vector<double> denormalize(std::span<const double> forecast, double norm_value);

/// `series_id,offset,channel,step,value`; target rows use channel `target`.
void write_windows_csv(std::ostream& out, const std::vector<TrainingWindow>& windows);

} // namespace panelcast
