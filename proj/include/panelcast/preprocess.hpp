#pragma once

#include "panelcast/calendar.hpp"
#include "panelcast/panel.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace panelcast {

/// Per-series record needed to map network-space values back to counts.
struct ScaleRecord {
	std::string id;
	double mean_scale = 1.0;
	double log_offset = 1.0;
};

struct ScaledSeries {
	std::vector<double> values;
	ScaleRecord record;
};

/// Divides by the arithmetic mean of the series. Pass the training region only.
/// Throws DegenerateSeriesError when the mean is zero.
ScaledSeries mean_scale(const TimeSeries& series);

/// ln(value + record.log_offset), elementwise. Throws ValueError on negative input.
std::vector<double> log_stabilize(std::span<const double> scaled, const ScaleRecord& record);

struct InverseResult {
	std::vector<double> values;
	/// True when at least one value was negative after removing the offset and was clamped to 0.
	bool clamped = false;
};

/// (exp(v) - log_offset) * mean_scale, clamped at zero.
InverseResult inverse_transform(std::span<const double> values, const ScaleRecord& record);

/// Convenience: mean_scale followed by log_stabilize.
std::vector<double> to_model_space(const TimeSeries& series, ScaleRecord& record);

/// Loess-based seasonal-trend decomposition settings.
///
/// `seasonal_window == 0` selects periodic mode: the seasonal component is
/// replaced by its per-phase means, so it repeats exactly every period.
struct StlConfig {
	int seasonal_window = 0;
	int seasonal_degree = 0;
	int trend_window = 0;   // 0: next odd >= ceil(1.5 * period)
	int trend_degree = 1;
	int lowpass_window = 0; // 0: next odd >= period
	int lowpass_degree = 1;
	int inner_iterations = 2;
	int robust_iterations = 2;
};

struct DecompositionResult {
	std::string id;
	int period = 12;
	YearMonth start;
	std::vector<double> seasonal;
	std::vector<double> trend;
	std::vector<double> remainder;

	std::size_t size() const { return seasonal.size(); }
};

/// Additive decomposition of `transformed` into seasonal + trend + remainder.
/// The seasonal part is centered to zero mean over the whole cycles it spans;
/// remainder is computed last so the three parts add back to the input.
/// Throws LengthError when the series is shorter than 2 * period + 1.
DecompositionResult decompose(std::span<const double> transformed, int period, const StlConfig& config = {});

/// max(0, 1 - Var(remainder) / Var(seasonal + remainder)); 0 if the denominator vanishes.
double seasonal_strength(const DecompositionResult& d);

/// Repeats the last extracted seasonal cycle forward for `horizon` months.
std::vector<double> seasonal_forecast(const DecompositionResult& d, int horizon);

/// CSV with header `month,seasonal,trend,remainder`.
void write_decomposition_csv(std::ostream& out, const DecompositionResult& d);

} // namespace panelcast
