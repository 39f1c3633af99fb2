// HTTP+JSON routes for a SessionManager.
//
//   POST /sessions              {spec, engine, engine_plays} -> session view
//   GET  /sessions/{id}                                      -> session view
//   POST /sessions/{id}/moves   {row, col, letter}           -> session view
//   GET  /sessions/{id}/hint                                 -> hint
//   GET  /policies                                           -> registry
//   GET  /health                                             -> {"status":"ok"}

#pragma once

#include <functional>
#include <string>

#include "httplib.h"
#include "sos/service.hpp"

namespace sos {

inline void register_routes(httplib::Server& server, SessionManager& manager) {
  auto reply = [](httplib::Response& res, const std::function<json()>& f) {
    try {
      res.set_content(f().dump(), "application/json");
    } catch (const ServiceError& e) {
      res.status = e.status();
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", std::string("bad JSON: ") + e.what()}}.dump(), "application/json");
    } catch (const Error& e) {
      res.status = e.kind() == Error::Kind::IllegalMove || e.kind() == Error::Kind::Terminal ? 409 : 400;
      res.set_content(json{{"error", e.what()}}.dump(), "application/json");
    }
  };

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
  server.Get("/policies", [reply](const httplib::Request&, httplib::Response& res) {
    reply(res, [] { return SessionManager::policies(); });
  });
  server.Post("/sessions", [&manager, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, [&] { return manager.create(json::parse(req.body)); });
    if (res.status < 400) res.status = 201;  // unset (-1) on success
  });
  server.Get(R"(/sessions/([0-9a-f]+))", [&manager, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, [&] { return manager.get(req.matches[1]); });
  });
  server.Post(R"(/sessions/([0-9a-f]+)/moves)", [&manager, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, [&] { return manager.submit(req.matches[1], json::parse(req.body)); });
  });
  server.Get(R"(/sessions/([0-9a-f]+)/hint)", [&manager, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, [&] { return manager.hint(req.matches[1]); });
  });
}

}  // namespace sos
