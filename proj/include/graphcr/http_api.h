#ifndef GRAPHCR_HTTP_API_H_
#define GRAPHCR_HTTP_API_H_

#include "graphcr/session.h"

namespace httplib {
class Server;
}

namespace graphcr {

// Registers the session routes on `server`:
//   POST /sessions                  create from {dataset, config}
//   GET  /sessions/{id}/next        pending questions
//   POST /sessions/{id}/labels      {answers: [{question_id, label}]}
//   POST /sessions/{id}/repair      train on current labels and repair
//   GET  /sessions/{id}/clusters    repaired clusters and E_NM edges
//   GET  /sessions/{id}/status
// Errors answer {schema_version, error} with 400, 404 or 409.
void RegisterRoutes(httplib::Server& server, SessionManager& manager);

}  // namespace graphcr

#endif  // GRAPHCR_HTTP_API_H_
