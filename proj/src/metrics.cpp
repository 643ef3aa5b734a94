#include "panelcast/metrics.hpp"

#include "panelcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace panelcast {

double smape(std::span<const double> forecast, std::span<const double> actual) {
	if (forecast.size() != actual.size() || forecast.empty())
		throw ShapeError("smape needs equal, non-empty forecast and actual vectors");
	double acc = 0.0;
	for (std::size_t t = 0; t < forecast.size(); ++t) {
		const double denom = std::abs(forecast[t]) + std::abs(actual[t]);
		if (denom > 0.0)
			acc += std::abs(forecast[t] - actual[t]) / denom;
	}
	return 2.0 * acc / static_cast<double>(forecast.size());
}

double mase(std::span<const double> forecast, std::span<const double> actual, std::span<const double> train,
			int period) {
	if (forecast.size() != actual.size() || forecast.empty())
		throw ShapeError("mase needs equal, non-empty forecast and actual vectors");
	if (period < 1 || train.size() <= static_cast<std::size_t>(period))
		throw LengthError("mase needs more training values than the seasonal period");
	double scale = 0.0;
	for (std::size_t t = static_cast<std::size_t>(period); t < train.size(); ++t)
		scale += std::abs(train[t] - train[t - static_cast<std::size_t>(period)]);
	scale /= static_cast<double>(train.size() - static_cast<std::size_t>(period));
	if (!(scale > 0.0))
		throw DegenerateScaleError("training series is exactly periodic, MASE scale is zero");
	double err = 0.0;
	for (std::size_t t = 0; t < forecast.size(); ++t)
		err += std::abs(forecast[t] - actual[t]);
	return err / static_cast<double>(forecast.size()) / scale;
}

std::vector<double> seasonal_naive(std::span<const double> train, int period, int horizon) {
	if (period < 1 || train.size() < static_cast<std::size_t>(period))
		throw LengthError("seasonal naive needs at least one full cycle");
	std::vector<double> out(static_cast<std::size_t>(std::max(horizon, 0)));
	const std::size_t base = train.size() - static_cast<std::size_t>(period);
	for (std::size_t h = 0; h < out.size(); ++h)
		out[h] = train[base + h % static_cast<std::size_t>(period)];
	return out;
}

std::vector<double> window_mean(std::span<const double> train, int window, int horizon) {
	if (window < 1 || train.size() < static_cast<std::size_t>(window))
		throw LengthError("window mean needs at least `window` values");
	const double m = std::accumulate(train.end() - window, train.end(), 0.0) / window;
	return std::vector<double>(static_cast<std::size_t>(std::max(horizon, 0)), m);
}

double median(std::vector<double> values) {
	if (values.empty())
		throw ValueError("median of an empty set");
	std::sort(values.begin(), values.end());
	const std::size_t n = values.size();
	return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean(std::span<const double> values) {
	if (values.empty())
		throw ValueError("mean of an empty set");
	return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

EvalReport aggregate(std::vector<SeriesScore> scores, std::string method) {
	if (scores.empty())
		throw ValueError("aggregate needs at least one series");
	std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	EvalReport report;
	report.method = std::move(method);
	std::vector<double> s, m;
	for (const auto& sc : scores) {
		s.push_back(sc.smape);
		m.push_back(sc.mase);
	}
	// Sum in sorted-id order so the result does not depend on input order.
	report.mean_smape = mean(s);
	report.mean_mase = mean(m);
	report.median_smape = median(s);
	report.median_mase = median(m);
	report.series = std::move(scores);
	return report;
}

void write_series_scores_csv(std::ostream& out, const EvalReport& report) {
	const auto precision = out.precision(17);
	out << "series_id,smape,mase\n";
	for (const auto& s : report.series)
		out << s.id << ',' << s.smape << ',' << s.mase << '\n';
	out.precision(precision);
}

void write_aggregate_csv(std::ostream& out, std::span<const EvalReport> reports) {
	const auto precision = out.precision(17);
	out << "method,mean_smape,median_smape,mean_mase,median_mase\n";
	for (const auto& r : reports)
		out << r.method << ',' << r.mean_smape << ',' << r.median_smape << ',' << r.mean_mase << ','
			<< r.median_mase << '\n';
	out.precision(precision);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
	if (a.size() != b.size() || a.size() < 6)
		throw ShapeError("wilcoxon needs paired vectors of equal length >= 6");
	std::vector<double> diffs;
	for (std::size_t i = 0; i < a.size(); ++i) {
		const double d = a[i] - b[i];
		if (d != 0.0)
			diffs.push_back(d);
	}
	WilcoxonResult result;
	const int n = static_cast<int>(diffs.size());
	result.effective_n = n;
	if (n == 0)
		return result;

	std::vector<int> idx(static_cast<std::size_t>(n));
	std::iota(idx.begin(), idx.end(), 0);
	std::sort(idx.begin(), idx.end(), [&](int x, int y) { return std::abs(diffs[x]) < std::abs(diffs[y]); });
	// Doubled mid-ranks keep everything integral.
	std::vector<int> rank2(static_cast<std::size_t>(n));
	double tie_term = 0.0;
	for (int i = 0; i < n;) {
		int j = i;
		while (j + 1 < n && std::abs(diffs[idx[j + 1]]) == std::abs(diffs[idx[i]]))
			++j;
		const int doubled = (i + 1) + (j + 1);
		for (int k = i; k <= j; ++k)
			rank2[idx[k]] = doubled;
		const double t = j - i + 1;
		tie_term += t * t * t - t;
		i = j + 1;
	}
	int w2 = 0;
	int total2 = 0;
	for (int i = 0; i < n; ++i) {
		total2 += rank2[i];
		if (diffs[i] > 0.0)
			w2 += rank2[i];
	}
	result.statistic = w2 / 2.0;

	if (n <= 12) {
		result.exact = true;
		std::vector<double> ways(static_cast<std::size_t>(total2 + 1), 0.0);
		ways[0] = 1.0;
		for (int i = 0; i < n; ++i)
			for (int s = total2; s >= rank2[i]; --s)
				ways[s] += ways[s - rank2[i]];
		const double all = std::ldexp(1.0, n);
		double lower = 0.0, upper = 0.0;
		for (int s = 0; s <= total2; ++s) {
			if (s <= w2)
				lower += ways[s];
			if (s >= w2)
				upper += ways[s];
		}
		result.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
		return result;
	}

	const double nn = n;
	const double mu = nn * (nn + 1.0) / 4.0;
	const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
	if (!(var > 0.0))
		return result;
	const double diff = result.statistic - mu;
	const double corrected = std::max(0.0, std::abs(diff) - 0.5);
	result.p_value = std::min(1.0, std::erfc(corrected / std::sqrt(var) / std::sqrt(2.0)));
	return result;
}

} // namespace panelcast
