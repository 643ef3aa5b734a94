#pragma once

#include "panelcast/metrics.hpp"
#include "panelcast/panel.hpp"
#include "panelcast/pipeline.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace panelcast {

/// Does adding exogenous candidate Z improve held-out accuracy for Y?
/// An improvement alone is not evidence of a causal link; read it together
/// with the p-value.
struct GCReport {
	std::string candidate;
	std::vector<std::string> ids;
	std::vector<double> smape_with;
	std::vector<double> smape_without;
	std::vector<double> deltas; // with - without, negative = improvement
	double mean_with = 0.0;
	double mean_without = 0.0;
	double mean_delta = 0.0;
	double median_delta = 0.0;
	WilcoxonResult wilcoxon;
	bool improved = false;
	std::vector<std::uint64_t> seeds;

	/// The same comparison with the arms' labels exchanged.
	GCReport swapped() const;
};

/// Builds a report from paired per-series errors of the two arms.
GCReport compare_arms(const std::string& candidate, std::vector<std::string> ids, std::vector<double> smape_with,
					  std::vector<double> smape_without);

/// Per-series sMAPE of a bundle's ensemble forecasts against `actual`.
std::vector<double> bundle_smape(const ForecastBundle& bundle, const Panel& actual);

/// Builds the report from the two arms' forecasts. Throws ConfigError unless
/// both arms were trained with the same seeds.
GCReport gc_report(const std::string& candidate, const ForecastBundle& with_z, const ForecastBundle& without_z,
				   const Panel& actual);

/// Fits two pipelines that differ only in whether `candidate` is an input
/// channel (same seeds, same window layout otherwise), evaluates both on the
/// held-out months and compares them.
GCReport gc_compare(const Panel& panel, const std::string& candidate, const PipelineConfig& config,
					const SplitSpec& split_spec);

void write_gc_csv(std::ostream& out, const GCReport& report);
std::string gc_json(const GCReport& report);

struct Scenario {
	std::string exogenous;
	double multiplier = 1.0;
	std::vector<std::string> ids; // empty: every series
};

struct WhatIfSeries {
	std::string id;
	std::vector<YearMonth> months;
	std::vector<double> baseline;
	std::vector<double> scenario;
};

struct WhatIfResult {
	Scenario scenario;
	std::vector<WhatIfSeries> series;
};

/// Baseline forecast and a forecast with the named exogenous values in the
/// conditioning window scaled by the multiplier; everything else is held fixed.
/// Throws NoExogenousError when the model lacks the channel.
WhatIfResult whatif(const TrainedModel& model, const Scenario& scenario, int horizon);

/// `series_id,month,baseline,scenario`
void write_whatif_csv(std::ostream& out, const WhatIfResult& result);

} // namespace panelcast
