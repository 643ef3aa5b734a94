#include "panelcast/synth.hpp"

#include "panelcast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace panelcast {

SynthPanel generate(const SynthSpec& spec) {
	if (spec.n_series < 1 || spec.n_months < 1 || spec.period < 2 || spec.categories.empty())
		throw ConfigError("synthetic panel needs series, months, a period >= 2 and a category");
	if (spec.driver && spec.driver->lag < 0)
		throw ConfigError("driver lag must be non-negative");

	std::mt19937_64 rng(spec.seed);
	auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
	std::normal_distribution<double> normal(0.0, 1.0);

	SynthPanel out;
	std::vector<TimeSeries> series, exogenous;
	const int width = spec.n_series >= 1000 ? 4 : 3;
	for (int s = 0; s < spec.n_series; ++s) {
		char id[32];
		std::snprintf(id, sizeof(id), "S%0*d", width, s);
		SynthComponents c;
		c.id = id;
		c.base = uniform(spec.base_min, spec.base_max);
		c.slope = uniform(spec.slope_min, spec.slope_max);
		c.amplitude = uniform(spec.amplitude_min, spec.amplitude_max);

		const double a1 = uniform(0.6, 1.0);
		const double a2 = uniform(0.0, 0.5);
		const double p1 = uniform(0.0, 2.0 * std::numbers::pi);
		const double p2 = uniform(0.0, 2.0 * std::numbers::pi);
		c.seasonal_pattern.resize(static_cast<std::size_t>(spec.period));
		double peak = 0.0;
		for (int k = 0; k < spec.period; ++k) {
			const double x = 2.0 * std::numbers::pi * k / spec.period;
			c.seasonal_pattern[k] = a1 * std::sin(x + p1) + a2 * std::sin(2.0 * x + p2);
			peak = std::max(peak, std::abs(c.seasonal_pattern[k]));
		}
		for (double& v : c.seasonal_pattern)
			v /= peak;

		// Driver history includes `lag` pre-sample months.
		std::vector<double> z;
		if (spec.driver) {
			const auto& d = *spec.driver;
			const double innovation = d.std * std::sqrt(1.0 - d.persistence * d.persistence);
			double dev = d.std * normal(rng);
			for (int t = 0; t < spec.n_months + d.lag; ++t) {
				if (t > 0)
					dev = d.persistence * dev + innovation * normal(rng);
				z.push_back(std::max(0.0, std::round(d.mean + dev)));
			}
			c.driver.assign(z.begin() + d.lag, z.end());
		}

		TimeSeries ts{c.id, spec.categories[static_cast<std::size_t>(s) % spec.categories.size()], spec.start, {}};
		ts.values.reserve(static_cast<std::size_t>(spec.n_months));
		for (int t = 0; t < spec.n_months; ++t) {
			double v = c.base + c.slope * t + c.amplitude * c.seasonal_pattern[t % spec.period];
			if (spec.driver)
				v += spec.driver->beta * z[static_cast<std::size_t>(t)];
			v += spec.noise_std * normal(rng);
			ts.values.push_back(std::max(0.0, std::round(v)));
		}
		if (spec.driver)
			exogenous.push_back(TimeSeries{c.id, spec.driver->name, spec.start, c.driver});
		series.push_back(std::move(ts));
		out.components.push_back(std::move(c));
	}
	out.panel = Panel(std::move(series), std::move(exogenous), spec.period);
	return out;
}

} // namespace panelcast
