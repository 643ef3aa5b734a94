#pragma once

#include "panelcast/calendar.hpp"
#include "panelcast/panel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace panelcast {

/// Planted exogenous driver: Y_t receives beta * Z_{t - lag}.
struct DriverSpec {
	std::string name = "driver";
	int lag = 1;
	double beta = 1.0;
	double mean = 50.0;
	double std = 10.0;
	/// AR(1) persistence of the driver's deviations from its mean (0 = white).
	double persistence = 0.0;
};

struct SynthSpec {
	int n_series = 40;
	int n_months = 96;
	int period = 12;
	YearMonth start{2011, 9};
	std::vector<std::string> categories{"A"};
	double base_min = 60.0;
	double base_max = 240.0;
	double slope_min = -0.2; // counts per month
	double slope_max = 0.6;
	double amplitude_min = 8.0;
	double amplitude_max = 30.0;
	double noise_std = 5.0;
	std::optional<DriverSpec> driver;
	std::uint64_t seed = 7;
};

/// Per-series ground truth, useful for tests.
struct SynthComponents {
	std::string id;
	double base = 0.0;
	double slope = 0.0;
	double amplitude = 0.0;
	std::vector<double> seasonal_pattern; // one cycle, max |value| = 1
	std::vector<double> driver;           // Z_t over the series span, empty without a driver
};

struct SynthPanel {
	Panel panel;
	std::vector<SynthComponents> components;
};

/// Each value is max(0, round(base + slope t + amplitude pattern(t mod S)
/// + beta Z_{t-lag} + noise)). The seasonal pattern of every series is its own
/// random mix of two harmonics. Deterministic given `seed`.
SynthPanel generate(const SynthSpec& spec);

} // namespace panelcast
