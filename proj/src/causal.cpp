#include "panelcast/causal.hpp"

#include "panelcast/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>

namespace panelcast {

GCReport GCReport::swapped() const {
	return compare_arms(candidate, ids, smape_without, smape_with);
}

GCReport compare_arms(const std::string& candidate, std::vector<std::string> ids, std::vector<double> smape_with,
					  std::vector<double> smape_without) {
	if (ids.size() != smape_with.size() || ids.size() != smape_without.size() || ids.empty())
		throw ShapeError("both arms need one error per series");
	GCReport r;
	r.candidate = candidate;
	r.ids = std::move(ids);
	r.smape_with = std::move(smape_with);
	r.smape_without = std::move(smape_without);
	for (std::size_t i = 0; i < r.ids.size(); ++i)
		r.deltas.push_back(r.smape_with[i] - r.smape_without[i]);
	r.mean_with = mean(r.smape_with);
	r.mean_without = mean(r.smape_without);
	r.mean_delta = mean(r.deltas);
	r.median_delta = median(r.deltas);
	if (r.ids.size() >= 6)
		r.wilcoxon = wilcoxon_signed_rank(r.smape_with, r.smape_without);
	r.improved = r.mean_with < r.mean_without;
	return r;
}

std::vector<double> bundle_smape(const ForecastBundle& bundle, const Panel& actual) {
	std::vector<double> out;
	for (const auto& s : actual.series()) {
		const auto* f = bundle.find(s.id);
		if (f == nullptr)
			throw NotFittedError("no forecast for series '" + s.id + "'");
		const std::size_t h = std::min(f->ensemble.size(), s.values.size());
		out.push_back(smape(std::span<const double>(f->ensemble).first(h), std::span<const double>(s.values).first(h)));
	}
	return out;
}

GCReport gc_report(const std::string& candidate, const ForecastBundle& with_z, const ForecastBundle& without_z,
				   const Panel& actual) {
	if (with_z.seeds != without_z.seeds)
		throw ConfigError("both arms of a causality comparison must share their seeds");
	std::vector<std::string> ids;
	for (const auto& s : actual.series())
		ids.push_back(s.id);
	auto report = compare_arms(candidate, std::move(ids), bundle_smape(with_z, actual), bundle_smape(without_z, actual));
	report.seeds = with_z.seeds;
	return report;
}

GCReport gc_compare(const Panel& panel, const std::string& candidate, const PipelineConfig& config,
					const SplitSpec& split_spec) {
	const auto parts = split(panel, split_spec);
	PipelineConfig with_z = config;
	PipelineConfig without_z = config;
	without_z.exogenous_names.erase(
		std::remove(without_z.exogenous_names.begin(), without_z.exogenous_names.end(), candidate),
		without_z.exogenous_names.end());
	with_z.exogenous_names = without_z.exogenous_names;
	with_z.exogenous_names.push_back(candidate);

	const int horizon = std::min(split_spec.test_length, config.window.output_size);
	ForecastOptions options;
	options.execution = config.execution;
	const auto model_with = fit(parts.train, with_z);
	const auto model_without = fit(parts.train, without_z);
	return gc_report(candidate, forecast(model_with, horizon, options), forecast(model_without, horizon, options),
					 parts.test);
}

void write_gc_csv(std::ostream& out, const GCReport& report) {
	const auto precision = out.precision(17);
	out << "series_id,smape_with,smape_without,delta\n";
	for (std::size_t i = 0; i < report.ids.size(); ++i)
		out << report.ids[i] << ',' << report.smape_with[i] << ',' << report.smape_without[i] << ','
			<< report.deltas[i] << '\n';
	out.precision(precision);
}

std::string gc_json(const GCReport& report) {
	nlohmann::ordered_json j;
	j["candidate"] = report.candidate;
	j["mean_smape_with"] = report.mean_with;
	j["mean_smape_without"] = report.mean_without;
	j["mean_delta"] = report.mean_delta;
	j["median_delta"] = report.median_delta;
	j["wilcoxon_p_value"] = report.wilcoxon.p_value;
	j["wilcoxon_exact"] = report.wilcoxon.exact;
	j["improvement_observed"] = report.improved;
	j["note"] = "an improvement is a candidate for further study; a causal claim needs a significant p-value "
				"and adequate reference factors";
	j["seeds"] = report.seeds;
	auto& rows = j["series"] = nlohmann::ordered_json::array();
	for (std::size_t i = 0; i < report.ids.size(); ++i)
		rows.push_back({{"id", report.ids[i]},
						{"smape_with", report.smape_with[i]},
						{"smape_without", report.smape_without[i]},
						{"delta", report.deltas[i]}});
	return j.dump(2);
}

WhatIfResult whatif(const TrainedModel& model, const Scenario& scenario, int horizon) {
	if (!model.has_exogenous(scenario.exogenous))
		throw NoExogenousError("model was fitted without exogenous channel '" + scenario.exogenous + "'");
	if (!(scenario.multiplier > 0.0))
		throw ConfigError("scenario multiplier must be positive");
	ForecastOptions base;
	base.ids = scenario.ids;
	ForecastOptions perturbed = base;
	perturbed.multipliers[scenario.exogenous] = scenario.multiplier;
	const auto baseline = forecast(model, horizon, base);
	const auto shifted = forecast(model, horizon, perturbed);

	WhatIfResult result;
	result.scenario = scenario;
	for (std::size_t i = 0; i < baseline.series.size(); ++i) {
		const auto& b = baseline.series[i];
		result.series.push_back({b.id, b.months, b.ensemble, shifted.series[i].ensemble});
	}
	return result;
}

void write_whatif_csv(std::ostream& out, const WhatIfResult& result) {
	const auto precision = out.precision(17);
	out << "series_id,month,baseline,scenario\n";
	for (const auto& s : result.series)
		for (std::size_t h = 0; h < s.months.size(); ++h)
			out << s.id << ',' << s.months[h].str() << ',' << s.baseline[h] << ',' << s.scenario[h] << '\n';
	out.precision(precision);
}

} // namespace panelcast
