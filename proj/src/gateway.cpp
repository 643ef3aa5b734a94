#include "panelcast/gateway.hpp"

#include "panelcast/causal.hpp"
#include "panelcast/errors.hpp"

#include <httplib.h>

#include <cmath>

namespace panelcast {

namespace {

Json months_json(const std::vector<YearMonth>& months) {
	Json j = Json::array();
	for (const auto& m : months)
		j.push_back(m.str());
	return j;
}

HttpResponse ok(const Json& j) {
	return {200, j.dump() + "\n"};
}

int status_for(const Error& e) {
	const auto& code = e.code();
	if (code == "NotFittedError")
		return 404;
	if (code == "NoExogenousError")
		return 422;
	return 400;
}

} // namespace

HttpResponse error_response(int status, const std::string& code, const std::string& message) {
	Json j;
	j["error"] = {{"code", code}, {"message", message}};
	return {status, j.dump() + "\n"};
}

Json reports_to_json(const std::vector<EvalReport>& reports) {
	Json j;
	auto& arr = j["reports"] = Json::array();
	for (const auto& r : reports) {
		Json jr;
		jr["method"] = r.method;
		jr["mean_smape"] = r.mean_smape;
		jr["median_smape"] = r.median_smape;
		jr["mean_mase"] = r.mean_mase;
		jr["median_mase"] = r.median_mase;
		auto& series = jr["series"] = Json::array();
		for (const auto& s : r.series)
			series.push_back({{"id", s.id}, {"smape", s.smape}, {"mase", s.mase}});
		arr.push_back(std::move(jr));
	}
	return j;
}

std::vector<EvalReport> reports_from_json(const Json& j) {
	std::vector<EvalReport> out;
	try {
		for (const auto& jr : j.at("reports")) {
			std::vector<SeriesScore> scores;
			for (const auto& s : jr.at("series"))
				scores.push_back({s.at("id").get<std::string>(), s.at("smape").get<double>(), s.at("mase").get<double>()});
			out.push_back(aggregate(std::move(scores), jr.at("method").get<std::string>()));
		}
	} catch (const nlohmann::json::exception& e) {
		throw SchemaError(std::string("malformed metrics file: ") + e.what());
	}
	return out;
}

Gateway::Gateway(TrainedModel model, int horizon, std::vector<EvalReport> metrics)
	: model_(std::move(model)), horizon_(horizon), metrics_(std::move(metrics)) {
	baseline_ = forecast(model_, horizon_);
}

HttpResponse Gateway::list_series() const {
	Json arr = Json::array();
	for (const auto& s : model_.series)
		arr.push_back({{"id", s.id},
					   {"category", s.category},
					   {"group", s.group},
					   {"start", s.start.str()},
					   {"end", s.end().str()}});
	Json j;
	j["exogenous"] = model_.config.exogenous_names;
	j["horizon"] = horizon_;
	j["series"] = std::move(arr);
	return ok(j);
}

HttpResponse Gateway::get_series(const std::string& id) const {
	const auto* state = model_.find(id);
	const auto* f = baseline_.find(id);
	if (state == nullptr || f == nullptr)
		return error_response(404, "NotFittedError", "unknown series '" + id + "'");
	std::vector<YearMonth> history_months;
	for (std::size_t i = 0; i < state->history.size(); ++i)
		history_months.push_back(state->start.plus(static_cast<int>(i)));
	Json j;
	j["id"] = state->id;
	j["category"] = state->category;
	j["history"] = {{"months", months_json(history_months)}, {"values", state->history}};
	j["forecast"] = {{"months", months_json(f->months)}, {"values", f->ensemble}};
	return ok(j);
}

HttpResponse Gateway::post_whatif(const std::string& body) const {
	Scenario scenario;
	try {
		const Json req = Json::parse(body);
		if (!req.is_object())
			return error_response(400, "SchemaError", "request body must be a JSON object");
		for (const auto& item : req.items())
			if (item.key() != "exogenous" && item.key() != "multiplier" && item.key() != "ids")
				return error_response(400, "SchemaError", "unknown field '" + item.key() + "'");
		if (!req.contains("exogenous") || !req.at("exogenous").is_string())
			return error_response(400, "SchemaError", "'exogenous' must be a string");
		if (!req.contains("multiplier") || !req.at("multiplier").is_number())
			return error_response(400, "SchemaError", "'multiplier' must be a number");
		scenario.exogenous = req.at("exogenous").get<std::string>();
		scenario.multiplier = req.at("multiplier").get<double>();
		if (req.contains("ids"))
			scenario.ids = req.at("ids").get<std::vector<std::string>>();
	} catch (const nlohmann::json::exception& e) {
		return error_response(400, "SchemaError", std::string("malformed request body: ") + e.what());
	}
	if (!std::isfinite(scenario.multiplier) || scenario.multiplier <= 0.0)
		return error_response(400, "ConfigError", "'multiplier' must be a positive number");

	try {
		const auto result = whatif(model_, scenario, horizon_);
		Json j;
		j["exogenous"] = scenario.exogenous;
		j["multiplier"] = scenario.multiplier;
		auto& arr = j["series"] = Json::array();
		for (const auto& s : result.series)
			arr.push_back({{"id", s.id},
						   {"months", months_json(s.months)},
						   {"baseline", s.baseline},
						   {"scenario", s.scenario}});
		return ok(j);
	} catch (const Error& e) {
		return error_response(status_for(e), e.code(), e.what());
	}
}

HttpResponse Gateway::metrics() const {
	return ok(reports_to_json(metrics_));
}

HttpResponse Gateway::handle(const std::string& method, const std::string& path, const std::string& body) const {
	static const std::string series_prefix = "/api/series/";
	if (path == "/api/series") {
		if (method != "GET")
			return error_response(405, "MethodNotAllowed", method + " " + path);
		return list_series();
	}
	if (path.rfind(series_prefix, 0) == 0 && path.size() > series_prefix.size()) {
		if (method != "GET")
			return error_response(405, "MethodNotAllowed", method + " " + path);
		return get_series(path.substr(series_prefix.size()));
	}
	if (path == "/api/whatif") {
		if (method != "POST")
			return error_response(405, "MethodNotAllowed", method + " " + path);
		return post_whatif(body);
	}
	if (path == "/api/metrics") {
		if (method != "GET")
			return error_response(405, "MethodNotAllowed", method + " " + path);
		return metrics();
	}
	return error_response(404, "NotFound", "no route for " + method + " " + path);
}

void install_routes(httplib::Server& server, const Gateway& gateway) {
	auto bridge = [&gateway](const httplib::Request& req, httplib::Response& res) {
		const auto r = gateway.handle(req.method, req.path, req.body);
		res.status = r.status;
		res.set_content(r.body, r.content_type);
	};
	server.Get(R"(/api/.*)", bridge);
	server.Post(R"(/api/.*)", bridge);
	server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
		if (!res.body.empty())
			return;
		const auto r = error_response(res.status, "NotFound", "no route for " + req.method + " " + req.path);
		res.set_content(r.body, r.content_type);
	});
}

void serve(const Gateway& gateway, const std::string& host, int port) {
	httplib::Server server;
	install_routes(server, gateway);
	if (!server.listen(host, port))
		throw Error("BindError", "cannot listen on " + host + ":" + std::to_string(port));
}

} // namespace panelcast
