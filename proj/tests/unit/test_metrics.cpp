#include "panelcast/errors.hpp"
#include "panelcast/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace panelcast;

namespace {

using Vec = std::vector<double>;

// Brute-force exact two-sided p-value: enumerate every sign assignment.
double enumerated_p(const Vec& a, const Vec& b) {
	Vec d;
	for (std::size_t i = 0; i < a.size(); ++i)
		if (a[i] != b[i])
			d.push_back(a[i] - b[i]);
	const int n = static_cast<int>(d.size());
	if (n == 0)
		return 1.0;
	std::vector<int> order(n);
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](int x, int y) { return std::abs(d[x]) < std::abs(d[y]); });
	Vec rank(n);
	for (int i = 0; i < n;) {
		int j = i;
		while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]]))
			++j;
		for (int k = i; k <= j; ++k)
			rank[order[k]] = (i + j) / 2.0 + 1.0;
		i = j + 1;
	}
	double w = 0.0, total = 0.0;
	for (int i = 0; i < n; ++i) {
		total += rank[i];
		if (d[i] > 0)
			w += rank[i];
	}
	const double dist = std::abs(w - total / 2);
	int extreme = 0;
	for (int mask = 0; mask < (1 << n); ++mask) {
		double s = 0.0;
		for (int i = 0; i < n; ++i)
			if (mask & (1 << i))
				s += rank[i];
		if (std::abs(s - total / 2) >= dist - 1e-9)
			++extreme;
	}
	return std::min(1.0, static_cast<double>(extreme) / (1 << n));
}

} // namespace

TEST_CASE("smape examples") {
	CHECK(smape(Vec{110}, Vec{100}) == doctest::Approx(2.0 * 10 / 210));
	CHECK(smape(Vec{0, 5}, Vec{0, 5}) == 0.0);
	CHECK(smape(Vec{0}, Vec{7}) == 2.0);
	CHECK(smape(Vec{1, 2, 3}, Vec{3, 2, 1}) == doctest::Approx(2.0 / 3 * (0.5 + 0 + 0.5)));
	CHECK_THROWS_AS(smape(Vec{1}, Vec{1, 2}), ShapeError);
	CHECK_THROWS_AS(smape(Vec{}, Vec{}), ShapeError);
}

TEST_CASE("smape properties") {
	std::mt19937_64 rng(1);
	std::uniform_real_distribution<double> u(0.0, 100.0);
	for (int trial = 0; trial < 200; ++trial) {
		Vec f(12), y(12);
		for (int i = 0; i < 12; ++i) {
			f[i] = u(rng);
			y[i] = u(rng);
		}
		const double s = smape(f, y);
		CHECK(s >= 0.0);
		CHECK(s <= 2.0);
		CHECK(s == doctest::Approx(smape(y, f)).epsilon(1e-14));
		Vec fs = f, ys = y;
		for (auto& v : fs)
			v *= 3.7;
		for (auto& v : ys)
			v *= 3.7;
		CHECK(smape(fs, ys) == doctest::Approx(s).epsilon(1e-12));
	}
}

TEST_CASE("mase examples") {
	// A linear training series has seasonal-naive MAE equal to the period.
	Vec train(36);
	std::iota(train.begin(), train.end(), 0.0);
	Vec actual(12), forecast(12);
	for (int i = 0; i < 12; ++i) {
		actual[i] = 36 + i;
		forecast[i] = actual[i] + (i % 2 ? 12.0 : -12.0);
	}
	CHECK(mase(forecast, actual, train, 12) == doctest::Approx(1.0).epsilon(1e-14));

	Vec periodic(36);
	for (int i = 0; i < 36; ++i)
		periodic[i] = i % 12;
	CHECK_THROWS_AS(mase(forecast, actual, periodic, 12), DegenerateScaleError);
	CHECK_THROWS_AS(mase(forecast, actual, Vec(12, 1.0), 12), LengthError);
}

TEST_CASE("mase is scale invariant and equals one for the naive forecast of a repeating pattern") {
	std::mt19937_64 rng(2);
	std::normal_distribution<double> z(0.0, 1.0);
	Vec train(48);
	for (auto& v : train)
		v = 50 + 10 * z(rng);
	Vec actual(12), f(12);
	for (int i = 0; i < 12; ++i) {
		actual[i] = 50 + 10 * z(rng);
		f[i] = 50 + 10 * z(rng);
	}
	const double m = mase(f, actual, train, 12);
	auto scaled = [](Vec v) {
		for (auto& x : v)
			x *= 0.01;
		return v;
	};
	CHECK(mase(scaled(f), scaled(actual), scaled(train), 12) == doctest::Approx(m).epsilon(1e-12));

	// Test values continue the in-sample seasonal-naive errors exactly.
	Vec t2(24), a2(12);
	for (int i = 0; i < 24; ++i)
		t2[i] = i < 12 ? 10.0 : 10.0 + ((i % 2) ? 3.0 : -3.0);
	const auto naive = seasonal_naive(t2, 12, 12);
	for (int i = 0; i < 12; ++i)
		a2[i] = naive[i] + ((i % 2) ? 3.0 : -3.0);
	CHECK(mase(naive, a2, t2, 12) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("seasonal naive repeats the last cycle") {
	Vec train(30);
	std::iota(train.begin(), train.end(), 1.0);
	const auto f = seasonal_naive(train, 12, 13);
	REQUIRE(f.size() == 13);
	CHECK(f[0] == train[18]);
	CHECK(f[11] == train[29]);
	CHECK(f[12] == train[18]);
	CHECK_THROWS_AS(seasonal_naive(Vec(5, 1.0), 12, 3), LengthError);
	CHECK(window_mean(Vec{1, 2, 3, 4}, 2, 3) == Vec{3.5, 3.5, 3.5});
}

TEST_CASE("aggregate") {
	std::vector<SeriesScore> s{{"b", 0.1, 1.0}, {"a", 0.3, 2.0}, {"c", 0.2, 0.6}};
	const auto r = aggregate(s, "m");
	CHECK(r.method == "m");
	CHECK(r.mean_smape == doctest::Approx(0.2));
	CHECK(r.median_smape == doctest::Approx(0.2));
	CHECK(r.mean_mase == doctest::Approx(3.6 / 3));
	CHECK(r.median_mase == 1.0);
	CHECK(r.series.front().id == "a");
	std::reverse(s.begin(), s.end());
	const auto r2 = aggregate(s, "m");
	CHECK(r2.mean_smape == r.mean_smape);
	CHECK(r2.median_mase == r.median_mase);
	CHECK(median(Vec{4, 1, 3, 2}) == 2.5);
	CHECK_THROWS_AS(median(Vec{}), ValueError);
}

TEST_CASE("score csv formats") {
	const auto r = aggregate({{"x", 0.5, 1.25}, {"w", 0.25, 0.75}}, "lstm");
	std::ostringstream a, b;
	write_series_scores_csv(a, r);
	CHECK(a.str() == "series_id,smape,mase\nw,0.25,0.75\nx,0.5,1.25\n");
	const std::vector<EvalReport> reports{r};
	write_aggregate_csv(b, reports);
	CHECK(b.str() == "method,mean_smape,median_smape,mean_mase,median_mase\nlstm,0.375,0.375,1,1\n");
}

TEST_CASE("wilcoxon edge cases") {
	const Vec a{1, 2, 3, 4, 5, 6};
	const auto same = wilcoxon_signed_rank(a, a);
	CHECK(same.p_value == 1.0);
	CHECK(same.effective_n == 0);
	CHECK_THROWS_AS(wilcoxon_signed_rank(Vec{1, 2, 3, 4, 5}, Vec{1, 2, 3, 4, 5}), ShapeError);
	CHECK_THROWS_AS(wilcoxon_signed_rank(a, Vec{1, 2, 3}), ShapeError);

	Vec hi(12), lo(12);
	for (int i = 0; i < 12; ++i) {
		hi[i] = 10 + i;
		lo[i] = i * 0.5;
	}
	const auto r = wilcoxon_signed_rank(hi, lo);
	CHECK(r.exact);
	CHECK(r.effective_n == 12);
	CHECK(r.statistic == 78.0);
	CHECK(r.p_value == doctest::Approx(std::pow(2.0, -11)).epsilon(1e-12));
}

TEST_CASE("wilcoxon exact path matches enumeration") {
	std::mt19937_64 rng(5);
	std::uniform_int_distribution<int> u(0, 6);
	for (int trial = 0; trial < 60; ++trial) {
		const int n = 6 + trial % 7;
		Vec a(n), b(n);
		for (int i = 0; i < n; ++i) {
			a[i] = u(rng);
			b[i] = u(rng);
		}
		const auto r = wilcoxon_signed_rank(a, b);
		CHECK(r.p_value == doctest::Approx(enumerated_p(a, b)).epsilon(1e-9));
	}
}

TEST_CASE("wilcoxon is invariant to a common shift") {
	std::mt19937_64 rng(6);
	std::normal_distribution<double> z(0.0, 1.0);
	for (int n : {8, 30}) {
		Vec a(n), b(n);
		for (int i = 0; i < n; ++i) {
			a[i] = z(rng) + 0.3;
			b[i] = z(rng);
		}
		const auto r = wilcoxon_signed_rank(a, b);
		Vec a2 = a, b2 = b;
		for (int i = 0; i < n; ++i) {
			a2[i] += 100.0;
			b2[i] += 100.0;
		}
		CHECK(wilcoxon_signed_rank(a2, b2).statistic == r.statistic);
	}
}

TEST_CASE("wilcoxon normal approximation for larger samples") {
	std::mt19937_64 rng(7);
	std::normal_distribution<double> z(0.0, 1.0);
	const int n = 40;
	Vec a(n), b(n);
	for (int i = 0; i < n; ++i) {
		a[i] = z(rng) + 1.0;
		b[i] = z(rng);
	}
	const auto r = wilcoxon_signed_rank(a, b);
	CHECK_FALSE(r.exact);
	// Independent normal approximation without ties.
	Vec d(n);
	for (int i = 0; i < n; ++i)
		d[i] = a[i] - b[i];
	std::vector<int> order(n);
	std::iota(order.begin(), order.end(), 0);
	std::sort(order.begin(), order.end(), [&](int x, int y) { return std::abs(d[x]) < std::abs(d[y]); });
	double w = 0.0;
	for (int k = 0; k < n; ++k)
		if (d[order[k]] > 0)
			w += k + 1;
	const double mu = n * (n + 1) / 4.0;
	const double sigma = std::sqrt(n * (n + 1) * (2.0 * n + 1) / 24.0);
	const double zz = (std::abs(w - mu) - 0.5) / sigma;
	const double p = std::erfc(zz / std::sqrt(2.0));
	CHECK(r.statistic == w);
	CHECK(r.p_value == doctest::Approx(p).epsilon(1e-9));
}
