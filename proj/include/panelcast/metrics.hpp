#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace panelcast {

/// (2/m) * sum |F - Y| / (|F| + |Y|); a term with F = Y = 0 counts as 0.
/// Throws ShapeError on length mismatch or empty input.
double smape(std::span<const double> forecast, std::span<const double> actual);

/// Mean absolute error scaled by the in-sample seasonal-naive MAE of `train`.
/// Throws LengthError when train has no more than `period` values and
/// DegenerateScaleError when the scale is zero (exactly periodic training data).
double mase(std::span<const double> forecast, std::span<const double> actual, std::span<const double> train,
			int period);

/// Step h repeats the training value one seasonal cycle earlier.
std::vector<double> seasonal_naive(std::span<const double> train, int period, int horizon);

/// Mean of the last `window` training values, repeated.
std::vector<double> window_mean(std::span<const double> train, int window, int horizon);

struct SeriesScore {
	std::string id;
	double smape = 0.0;
	double mase = 0.0;
};

struct EvalReport {
	std::string method;
	std::vector<SeriesScore> series; // sorted by id
	double mean_smape = 0.0;
	double median_smape = 0.0;
	double mean_mase = 0.0;
	double median_mase = 0.0;
};

/// Midpoint median; throws ValueError on empty input.
double median(std::vector<double> values);
double mean(std::span<const double> values);

/// Mean and median of each metric. Order of the input does not matter.
EvalReport aggregate(std::vector<SeriesScore> scores, std::string method = {});

/// `series_id,smape,mase`
void write_series_scores_csv(std::ostream& out, const EvalReport& report);
/// `method,mean_smape,median_smape,mean_mase,median_mase`, one row per report.
void write_aggregate_csv(std::ostream& out, std::span<const EvalReport> reports);

struct WilcoxonResult {
	double p_value = 1.0;
	double statistic = 0.0; // W+, sum of ranks of positive differences
	int effective_n = 0;    // pairs left after dropping zero differences
	bool exact = false;
};

/// Paired two-sided Wilcoxon signed-rank test on a - b. Zero differences are
/// dropped and tied magnitudes get mid-ranks. The null distribution is computed
/// exactly for up to 12 non-zero pairs, otherwise by the normal approximation
/// with tie correction and continuity correction. All-zero differences give p = 1.
/// Throws ShapeError unless both vectors have the same length of at least 6.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

} // namespace panelcast
