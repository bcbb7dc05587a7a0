#include "graphcr/http_api.h"

#include <functional>

#include "httplib.h"

namespace graphcr {

using nlohmann::json;

namespace {

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

using Handler = std::function<json(const httplib::Request&)>;

// Wraps a handler so failures turn into JSON error bodies.
httplib::Server::Handler Guard(Handler handler, int ok_status = 200) {
  return [handler = std::move(handler), ok_status](
             const httplib::Request& req, httplib::Response& res) {
    try {
      Reply(res, ok_status, handler(req));
    } catch (const ApiError& e) {
      json body = e.detail().is_object() ? e.detail() : json::object();
      body["schema_version"] = kSchemaVersion;
      body["error"] = e.what();
      Reply(res, e.status(), body);
    } catch (const json::exception& e) {
      Reply(res, 400, {{"schema_version", kSchemaVersion},
                       {"error", std::string("invalid JSON: ") + e.what()}});
    } catch (const std::exception& e) {
      Reply(res, 500, {{"schema_version", kSchemaVersion},
                       {"error", e.what()}});
    }
  };
}

json Body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  return json::parse(req.body);
}

}  // namespace

void RegisterRoutes(httplib::Server& server, SessionManager& manager) {
  SessionManager* m = &manager;
  server.Post("/sessions", Guard(
                               [m](const httplib::Request& req) {
                                 const std::string id = m->Create(Body(req));
                                 json out = m->Get(id)->Status();
                                 return out;
                               },
                               201));
  server.Get(R"(/sessions/([^/]+)/next)",
             Guard([m](const httplib::Request& req) {
               return m->Get(req.matches[1])->Next();
             }));
  server.Post(R"(/sessions/([^/]+)/labels)",
              Guard([m](const httplib::Request& req) {
                auto session = m->Get(req.matches[1]);
                return session->SubmitLabels(Body(req));
              }));
  server.Post(R"(/sessions/([^/]+)/repair)",
              Guard([m](const httplib::Request& req) {
                return m->Get(req.matches[1])->Repair();
              }));
  server.Get(R"(/sessions/([^/]+)/clusters)",
             Guard([m](const httplib::Request& req) {
               return m->Get(req.matches[1])->Clusters();
             }));
  server.Get(R"(/sessions/([^/]+)/status)",
             Guard([m](const httplib::Request& req) {
               return m->Get(req.matches[1])->Status();
             }));
}

}  // namespace graphcr
