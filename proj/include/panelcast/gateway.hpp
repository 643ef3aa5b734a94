#pragma once

#include "panelcast/metrics.hpp"
#include "panelcast/model_io.hpp"
#include "panelcast/pipeline.hpp"

#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace panelcast {

struct HttpResponse {
	int status = 200;
	std::string body;
	std::string content_type = "application/json";
};

/// Read-only JSON service over one trained model. All routes are pure
/// functions of the model, the stored metrics and the request, so identical
/// requests give byte-identical bodies and handlers are safe to call
/// concurrently.
///
///   GET  /api/series        [{id, category, group, start, end}]
///   GET  /api/series/{id}   {id, category, history{months, values}, forecast{months, values}}
///   POST /api/whatif        body {exogenous, multiplier, ids?}
///                           -> {exogenous, multiplier, series[{id, months, baseline, scenario}]}
///   GET  /api/metrics       {reports[{method, mean_smape, median_smape, mean_mase, median_mase}]}
///
/// Errors answer 4xx with {"error": {"code", "message"}}.
class Gateway {
public:
	Gateway(TrainedModel model, int horizon, std::vector<EvalReport> metrics = {});

	HttpResponse list_series() const;
	HttpResponse get_series(const std::string& id) const;
	HttpResponse post_whatif(const std::string& body) const;
	HttpResponse metrics() const;

	/// Routes a request to the handlers above.
	HttpResponse handle(const std::string& method, const std::string& path, const std::string& body = {}) const;

	const TrainedModel& model() const { return model_; }
	int horizon() const { return horizon_; }

private:
	TrainedModel model_;
	int horizon_;
	std::vector<EvalReport> metrics_;
	ForecastBundle baseline_;
};

HttpResponse error_response(int status, const std::string& code, const std::string& message);

/// `{"reports": [...]}` as served by /api/metrics, and its inverse.
Json reports_to_json(const std::vector<EvalReport>& reports);
std::vector<EvalReport> reports_from_json(const Json& j);

/// Registers the /api routes of `gateway` on `server`.
void install_routes(httplib::Server& server, const Gateway& gateway);

/// Blocks serving `gateway` on host:port until the process stops.
void serve(const Gateway& gateway, const std::string& host, int port);

} // namespace panelcast
