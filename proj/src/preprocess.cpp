#include "panelcast/preprocess.hpp"

#include "panelcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace panelcast {

ScaledSeries mean_scale(const TimeSeries& series) {
	validate_series(series);
	const double mean =
		std::accumulate(series.values.begin(), series.values.end(), 0.0) / static_cast<double>(series.size());
	if (!(mean > 0.0))
		throw DegenerateSeriesError("series '" + series.id + "' has zero mean, cannot scale");
	ScaledSeries out;
	out.record.id = series.id;
	out.record.mean_scale = mean;
	out.values.reserve(series.size());
	for (double v : series.values)
		out.values.push_back(v / mean);
	return out;
}

std::vector<double> log_stabilize(std::span<const double> scaled, const ScaleRecord& record) {
	if (record.log_offset < 0.0)
		throw ValueError("log offset must be non-negative");
	std::vector<double> out;
	out.reserve(scaled.size());
	for (double v : scaled) {
		if (!(v >= 0.0))
			throw ValueError("log_stabilize expects non-negative values for '" + record.id + "'");
		out.push_back(std::log(v + record.log_offset));
	}
	return out;
}

InverseResult inverse_transform(std::span<const double> values, const ScaleRecord& record) {
	InverseResult out;
	out.values.reserve(values.size());
	for (double v : values) {
		double x = (std::exp(v) - record.log_offset) * record.mean_scale;
		if (x < 0.0) {
			x = 0.0;
			out.clamped = true;
		}
		out.values.push_back(x);
	}
	return out;
}

std::vector<double> to_model_space(const TimeSeries& series, ScaleRecord& record) {
	auto scaled = mean_scale(series);
	record = scaled.record;
	return log_stabilize(scaled.values, record);
}

// ---------------------------------------------------------------------------
// Loess decomposition. Positions are 1-based as in the classic Fortran
// reference; vectors are 0-based.

namespace {

using Vec = std::vector<double>;

bool loess_point(std::span<const double> y, int n, int len, int degree, double xs, int nleft, int nright,
				 Vec& w, bool use_weights, std::span<const double> rw, double& ys) {
	const double range = static_cast<double>(n) - 1.0;
	double h = std::max(xs - nleft, nright - xs);
	if (len > n)
		h += static_cast<double>((len - n) / 2);
	const double h9 = 0.999 * h;
	const double h1 = 0.001 * h;
	double total = 0.0;
	for (int j = nleft; j <= nright; ++j) {
		double& wj = w[j - 1];
		wj = 0.0;
		const double r = std::abs(j - xs);
		if (r <= h9) {
			if (r <= h1) {
				wj = 1.0;
			} else {
				const double q = r / h;
				const double t = 1.0 - q * q * q;
				wj = t * t * t;
			}
			if (use_weights)
				wj *= rw[j - 1];
			total += wj;
		}
	}
	if (total <= 0.0)
		return false;
	for (int j = nleft; j <= nright; ++j)
		w[j - 1] /= total;
	if (h > 0.0 && degree > 0) {
		double a = 0.0;
		for (int j = nleft; j <= nright; ++j)
			a += w[j - 1] * j;
		double b = xs - a;
		double c = 0.0;
		for (int j = nleft; j <= nright; ++j)
			c += w[j - 1] * (j - a) * (j - a);
		if (std::sqrt(c) > 0.001 * range) {
			b /= c;
			for (int j = nleft; j <= nright; ++j)
				w[j - 1] *= b * (j - a) + 1.0;
		}
	}
	ys = 0.0;
	for (int j = nleft; j <= nright; ++j)
		ys += w[j - 1] * y[j - 1];
	return true;
}

/// Loess smooth evaluated at every position 1..n.
Vec loess_smooth(std::span<const double> y, int len, int degree, bool use_weights, std::span<const double> rw) {
	const int n = static_cast<int>(y.size());
	Vec ys(y.begin(), y.end());
	if (n < 2)
		return ys;
	Vec w(static_cast<std::size_t>(n));
	if (len >= n) {
		for (int i = 1; i <= n; ++i)
			if (!loess_point(y, n, len, degree, i, 1, n, w, use_weights, rw, ys[i - 1]))
				ys[i - 1] = y[i - 1];
		return ys;
	}
	const int half = (len + 1) / 2;
	int nleft = 1;
	int nright = len;
	for (int i = 1; i <= n; ++i) {
		if (i > half && nright != n) {
			++nleft;
			++nright;
		}
		if (!loess_point(y, n, len, degree, i, nleft, nright, w, use_weights, rw, ys[i - 1]))
			ys[i - 1] = y[i - 1];
	}
	return ys;
}

Vec moving_average(std::span<const double> x, int len) {
	const int n = static_cast<int>(x.size());
	const int out_n = n - len + 1;
	Vec out(static_cast<std::size_t>(std::max(out_n, 0)));
	if (out_n <= 0)
		return out;
	double sum = 0.0;
	for (int i = 0; i < len; ++i)
		sum += x[i];
	out[0] = sum / len;
	for (int j = 1; j < out_n; ++j) {
		sum += x[j + len - 1] - x[j - 1];
		out[j] = sum / len;
	}
	return out;
}

/// Smooths each cycle-subseries and extends it by one cycle at both ends.
Vec cycle_subseries_smooth(std::span<const double> y, int period, int window, int degree, bool use_weights,
						   std::span<const double> rw) {
	const int n = static_cast<int>(y.size());
	Vec season(static_cast<std::size_t>(n + 2 * period), 0.0);
	Vec sub, sub_rw, smooth(static_cast<std::size_t>(n / period + 3)), w(static_cast<std::size_t>(n / period + 3));
	for (int phase = 1; phase <= period; ++phase) {
		const int k = (n - phase) / period + 1;
		sub.assign(static_cast<std::size_t>(k), 0.0);
		sub_rw.assign(static_cast<std::size_t>(k), 1.0);
		for (int i = 1; i <= k; ++i) {
			sub[i - 1] = y[(i - 1) * period + phase - 1];
			if (use_weights)
				sub_rw[i - 1] = rw[(i - 1) * period + phase - 1];
		}
		Vec inner = loess_smooth(sub, window, degree, use_weights, sub_rw);
		smooth.assign(static_cast<std::size_t>(k + 2), 0.0);
		std::copy(inner.begin(), inner.end(), smooth.begin() + 1);
		w.assign(static_cast<std::size_t>(k), 0.0);
		const int nright = std::min(window, k);
		if (!loess_point(sub, k, window, degree, 0.0, 1, nright, w, use_weights, sub_rw, smooth[0]))
			smooth[0] = smooth[1];
		const int nleft = std::max(1, k - window + 1);
		if (!loess_point(sub, k, window, degree, k + 1.0, nleft, k, w, use_weights, sub_rw, smooth[k + 1]))
			smooth[k + 1] = smooth[k];
		for (int m = 1; m <= k + 2; ++m)
			season[(m - 1) * period + phase - 1] = smooth[m - 1];
	}
	return season;
}

Vec robustness_weights(std::span<const double> y, std::span<const double> fit) {
	const std::size_t n = y.size();
	Vec r(n);
	for (std::size_t i = 0; i < n; ++i)
		r[i] = std::abs(y[i] - fit[i]);
	Vec sorted = r;
	std::sort(sorted.begin(), sorted.end());
	const std::size_t m1 = n / 2;
	const std::size_t m2 = n - m1 - 1;
	const double cmad = 3.0 * (sorted[m1] + sorted[m2]);
	const double c9 = 0.999 * cmad;
	const double c1 = 0.001 * cmad;
	Vec w(n);
	for (std::size_t i = 0; i < n; ++i) {
		if (r[i] <= c1) {
			w[i] = 1.0;
		} else if (r[i] <= c9) {
			const double q = r[i] / cmad;
			w[i] = (1.0 - q * q) * (1.0 - q * q);
		} else {
			w[i] = 0.0;
		}
	}
	return w;
}

int next_odd(int v) {
	return v % 2 == 0 ? v + 1 : v;
}

} // namespace

DecompositionResult decompose(std::span<const double> transformed, int period, const StlConfig& config) {
	const int n = static_cast<int>(transformed.size());
	if (period < 2)
		throw ConfigError("period must be at least 2");
	if (n < 2 * period + 1)
		throw LengthError("decomposition needs at least " + std::to_string(2 * period + 1) + " points, got " +
						  std::to_string(n));
	for (double v : transformed)
		if (!std::isfinite(v))
			throw NumericalError("non-finite value passed to decompose");

	const bool periodic = config.seasonal_window <= 0;
	const int seasonal_window = periodic ? 10 * n + 1 : next_odd(std::max(3, config.seasonal_window));
	const int seasonal_degree = periodic ? 0 : config.seasonal_degree;
	const int trend_window =
		next_odd(std::max(3, config.trend_window > 0 ? config.trend_window
													 : static_cast<int>(std::ceil(1.5 * period))));
	const int lowpass_window = next_odd(std::max(3, config.lowpass_window > 0 ? config.lowpass_window : period));

	std::span<const double> y = transformed;
	Vec seasonal(static_cast<std::size_t>(n), 0.0);
	Vec trend(static_cast<std::size_t>(n), 0.0);
	Vec rw(static_cast<std::size_t>(n), 1.0);
	Vec work(static_cast<std::size_t>(n));

	bool use_weights = false;
	for (int outer = 0; outer <= config.robust_iterations; ++outer) {
		for (int inner = 0; inner < std::max(1, config.inner_iterations); ++inner) {
			for (int i = 0; i < n; ++i)
				work[i] = y[i] - trend[i];
			Vec cycle = cycle_subseries_smooth(work, period, seasonal_window, seasonal_degree, use_weights, rw);
			Vec low = moving_average(cycle, period);
			low = moving_average(low, period);
			low = moving_average(low, 3);
			low = loess_smooth(low, lowpass_window, config.lowpass_degree, false, rw);
			for (int i = 0; i < n; ++i)
				seasonal[i] = cycle[period + i] - low[i];
			for (int i = 0; i < n; ++i)
				work[i] = y[i] - seasonal[i];
			trend = loess_smooth(work, trend_window, config.trend_degree, use_weights, rw);
		}
		if (outer == config.robust_iterations)
			break;
		for (int i = 0; i < n; ++i)
			work[i] = seasonal[i] + trend[i];
		rw = robustness_weights(y, work);
		use_weights = true;
	}

	if (periodic) {
		Vec phase_sum(static_cast<std::size_t>(period), 0.0);
		std::vector<int> phase_count(static_cast<std::size_t>(period), 0);
		for (int i = 0; i < n; ++i) {
			phase_sum[i % period] += seasonal[i];
			++phase_count[i % period];
		}
		for (int i = 0; i < n; ++i)
			seasonal[i] = phase_sum[i % period] / phase_count[i % period];
	}

	// Center over the whole cycles; the shift moves into the trend.
	const int whole = (n / period) * period;
	const double level = std::accumulate(seasonal.begin(), seasonal.begin() + whole, 0.0) / whole;
	for (int i = 0; i < n; ++i) {
		seasonal[i] -= level;
		trend[i] += level;
	}

	DecompositionResult out;
	out.period = period;
	out.seasonal = std::move(seasonal);
	out.trend = std::move(trend);
	out.remainder.resize(static_cast<std::size_t>(n));
	for (int i = 0; i < n; ++i)
		out.remainder[i] = y[i] - out.seasonal[i] - out.trend[i];
	return out;
}

double seasonal_strength(const DecompositionResult& d) {
	const std::size_t n = d.remainder.size();
	if (n < 2)
		return 0.0;
	auto variance = [n](auto&& value) {
		double mean = 0.0;
		for (std::size_t i = 0; i < n; ++i)
			mean += value(i);
		mean /= static_cast<double>(n);
		double acc = 0.0;
		for (std::size_t i = 0; i < n; ++i) {
			const double e = value(i) - mean;
			acc += e * e;
		}
		return acc / static_cast<double>(n);
	};
	const double var_r = variance([&](std::size_t i) { return d.remainder[i]; });
	const double var_sr = variance([&](std::size_t i) { return d.seasonal[i] + d.remainder[i]; });
	if (!(var_sr > 0.0))
		return 0.0;
	return std::clamp(1.0 - var_r / var_sr, 0.0, 1.0);
}

std::vector<double> seasonal_forecast(const DecompositionResult& d, int horizon) {
	if (horizon < 1)
		throw ConfigError("horizon must be at least 1");
	const std::size_t n = d.seasonal.size();
	const std::size_t period = static_cast<std::size_t>(d.period);
	if (n < period)
		throw LengthError("decomposition shorter than one seasonal cycle");
	std::vector<double> out(static_cast<std::size_t>(horizon));
	for (std::size_t h = 0; h < out.size(); ++h)
		out[h] = d.seasonal[n - period + h % period];
	return out;
}

void write_decomposition_csv(std::ostream& out, const DecompositionResult& d) {
	out << "month,seasonal,trend,remainder\n";
	const auto precision = out.precision(17);
	for (std::size_t i = 0; i < d.size(); ++i)
		out << d.start.plus(static_cast<int>(i)).str() << ',' << d.seasonal[i] << ',' << d.trend[i] << ','
			<< d.remainder[i] << '\n';
	out.precision(precision);
}

} // namespace panelcast
