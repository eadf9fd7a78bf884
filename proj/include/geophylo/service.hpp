#pragma once

#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "geophylo/io.hpp"
#include "geophylo/optimize.hpp"
#include "geophylo/svg.hpp"

namespace geophylo {

struct ServiceConfig {
  double exact_time_limit_seconds = 30;
  int k_cap = 20;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline int default_port() {
  if (const char* p = std::getenv("GEOPHYLO_PORT")) {
    char* end = nullptr;
    const long v = std::strtol(p, &end, 10);
    if (end != p && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return 8080;
}

namespace detail {

using Json = nlohmann::json;

[[noreturn]] inline void schema(const std::string& msg) { fail(ErrorKind::kInvalidInput, "request: " + msg); }

inline void only_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) schema("unknown field '" + key + "' in " + where);
}

inline const Json& field(const Json& obj, const char* key, Json::value_t type, const char* type_name) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(std::string("missing field '") + key + "'");
  const bool ok = it->type() == type || (type == Json::value_t::number_integer && it->is_number_unsigned()) ||
                  (type == Json::value_t::number_float && it->is_number());
  if (!ok) schema(std::string("field '") + key + "' must be " + type_name);
  return *it;
}

inline std::string opt_string(const Json& obj, const char* key, std::string fallback) {
  return obj.contains(key) ? field(obj, key, Json::value_t::string, "a string").get<std::string>() : fallback;
}

inline int integer(const Json& obj, const char* key) {
  return field(obj, key, Json::value_t::number_integer, "an integer").get<int>();
}

inline Geophylogeny instance_of(const Json& body) {
  return read_instance(field(body, "instance", Json::value_t::string, "an instance document").get<std::string>());
}

inline LeafId leaf_named(const Geophylogeny& g, const Json& obj) {
  const std::string label = field(obj, "leaf", Json::value_t::string, "a leaf label").get<std::string>();
  auto l = g.tree().find_leaf(label);
  if (!l) schema("unknown leaf '" + label + "'");
  return *l;
}

inline Constraints constraints_of(const Geophylogeny& g, const Json& body) {
  Constraints c;
  if (!body.contains("constraints")) return c;
  const Json& cs = field(body, "constraints", Json::value_t::object, "an object");
  only_keys(cs, {"pins", "ranges", "fixed_rotations"}, "constraints");
  const PhyloTree& t = g.tree();
  auto list = [&](const char* key) -> const Json& {
    static const Json empty = Json::array();
    return cs.contains(key) ? field(cs, key, Json::value_t::array, "an array") : empty;
  };
  for (const Json& p : list("pins")) {
    if (!p.is_object()) schema("pins entries must be objects");
    only_keys(p, {"leaf", "position"}, "pin");
    c.pin(t, leaf_named(g, p), integer(p, "position"));
  }
  for (const Json& r : list("ranges")) {
    if (!r.is_object()) schema("ranges entries must be objects");
    only_keys(r, {"leaf", "lo", "hi"}, "range");
    c.restrict(t, leaf_named(g, r), integer(r, "lo"), integer(r, "hi"));
  }
  for (const Json& f : list("fixed_rotations")) {
    if (!f.is_object()) schema("fixed_rotations entries must be objects");
    only_keys(f, {"leaves", "rotated"}, "fixed rotation");
    const Json& ls = field(f, "leaves", Json::value_t::array, "an array of two leaf labels");
    if (ls.size() != 2 || !ls[0].is_string() || !ls[1].is_string()) schema("'leaves' must list two leaf labels");
    auto a = t.find_leaf(ls[0].get<std::string>()), b = t.find_leaf(ls[1].get<std::string>());
    if (!a || !b) schema("unknown leaf in fixed rotation");
    if (*a == *b) schema("fixed rotation needs two distinct leaves");
    c.fix_rotation(t, t.lca(*a, *b), field(f, "rotated", Json::value_t::boolean, "a boolean").get<bool>());
  }
  return c;
}

inline Json labels_of(const Geophylogeny& g, const LeafOrder& order) {
  Json out = Json::array();
  for (LeafId l : order.sequence()) out.push_back(g.tree().label(l));
  return out;
}

inline ServiceResponse optimize_endpoint(const Json& body, const ServiceConfig& cfg) {
  only_keys(body, {"instance", "mode", "solver", "constraints", "leader_type", "measure", "time_limit"}, "request");
  const Geophylogeny g = instance_of(body);
  OptimizeRequest req;
  const std::string leader = opt_string(body, "leader_type", "s");
  req.count_type = parse_leader_type(leader);
  req.mode = parse_mode(opt_string(body, "mode", leader));
  if (req.mode != Mode::kInternal && body.contains("leader_type") && leader != opt_string(body, "mode", leader))
    schema("mode and leader_type disagree");
  req.solver = opt_string(body, "solver", "");
  req.measure = opt_string(body, "measure", "xhop");
  req.constraints = constraints_of(g, body);
  req.time_limit_seconds = cfg.exact_time_limit_seconds;
  if (body.contains("time_limit")) {
    req.time_limit_seconds = field(body, "time_limit", Json::value_t::number_float, "a number").get<double>();
    if (req.time_limit_seconds <= 0 || req.time_limit_seconds > cfg.exact_time_limit_seconds)
      req.time_limit_seconds = cfg.exact_time_limit_seconds;
  }
  req.k_cap = cfg.k_cap;
  const OptimizeOutcome r = optimize(g, req);
  Json out = {{"order", labels_of(g, r.order)}, {"objective", r.objective}, {"crossings", r.crossings},
              {"runtime_ms", r.runtime_ms},   {"optimal", r.optimal},     {"solver", r.solver}};
  if (r.k >= 0) out["k"] = r.k;
  return {200, out.dump(), "application/json"};
}

inline ServiceResponse render_endpoint(const Json& body) {
  only_keys(body, {"instance", "order", "style"}, "request");
  const Geophylogeny g = instance_of(body);
  LeafOrder order = LeafOrder::neutral(g.tree());
  if (body.contains("order")) {
    const Json& o = field(body, "order", Json::value_t::array, "an array of leaf labels");
    std::vector<std::string> labels;
    for (const Json& l : o) {
      if (!l.is_string()) schema("order entries must be leaf labels");
      labels.push_back(l.get<std::string>());
    }
    order = LeafOrder::from_labels(g.tree(), labels);
  }
  RenderOptions opt;
  if (body.contains("style")) {
    const Json& st = field(body, "style", Json::value_t::object, "an object");
    only_keys(st, {"leaders", "highlight", "labels"}, "style");
    const std::string leaders = opt_string(st, "leaders", "s");
    opt.leaders = leaders == "internal" ? std::nullopt : std::optional<LeaderType>(parse_leader_type(leaders));
    if (st.contains("highlight")) opt.highlight_crossings = field(st, "highlight", Json::value_t::boolean, "a boolean").get<bool>();
    if (st.contains("labels")) opt.labels = field(st, "labels", Json::value_t::boolean, "a boolean").get<bool>();
  }
  return {200, render_svg(g, order, opt), "image/svg+xml"};
}

inline ServiceResponse classify_endpoint(const Json& body) {
  only_keys(body, {"instance", "leader_type"}, "request");
  const Geophylogeny g = instance_of(body);
  const PairClasses pc = classify_pairs(g, parse_leader_type(opt_string(body, "leader_type", "s")));
  Json pairs = Json::array();
  for (auto [i, j] : pc.undecided_pairs()) pairs.push_back({g.tree().label(i), g.tree().label(j)});
  Json out = {{"k", pc.k()}, {"n", g.n()}, {"undecided_pairs", pairs}};
  return {200, out.dump(), "application/json"};
}

inline ServiceResponse error_response(int status, const std::string& kind, const std::string& msg) {
  return {status, Json{{"error", msg}, {"kind", kind}}.dump(), "application/json"};
}

}  // namespace detail

/// Stateless request dispatch; every request carries its own instance.
inline ServiceResponse handle_request(const std::string& method, const std::string& path, const std::string& body,
                                      const ServiceConfig& cfg = {}) {
  using detail::Json;
  if (path == "/health") {
    if (method != "GET") return detail::error_response(405, "method", "use GET");
    return {200, Json{{"status", "ok"}}.dump(), "application/json"};
  }
  if (path != "/optimize" && path != "/render" && path != "/classify")
    return detail::error_response(404, "not_found", "no endpoint " + path);
  if (method != "POST") return detail::error_response(405, "method", "use POST");
  try {
    Json req;
    try {
      req = Json::parse(body);
    } catch (const Json::parse_error& e) {
      return detail::error_response(400, "schema", std::string("malformed JSON: ") + e.what());
    }
    if (!req.is_object()) return detail::error_response(400, "schema", "request body must be a JSON object");
    if (path == "/optimize") return detail::optimize_endpoint(req, cfg);
    if (path == "/render") return detail::render_endpoint(req);
    return detail::classify_endpoint(req);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kInfeasible: return detail::error_response(422, "infeasible", e.what());
      case ErrorKind::kCapExceeded: return detail::error_response(422, "cap_exceeded", e.what());
      case ErrorKind::kPrecondition: return detail::error_response(400, "precondition", e.what());
      default: return detail::error_response(400, "schema", e.what());
    }
  } catch (const Json::exception& e) {
    return detail::error_response(400, "schema", e.what());
  }
}

/// Registers the endpoints on an httplib server.
inline void install_routes(httplib::Server& server, const ServiceConfig& cfg) {
  auto bridge = [cfg](const httplib::Request& rq, httplib::Response& rs) {
    const ServiceResponse r = handle_request(rq.method, rq.path, rq.body, cfg);
    rs.status = r.status;
    rs.set_content(r.body, r.content_type);
  };
  server.Get("/health", bridge);
  for (const char* p : {"/optimize", "/render", "/classify"}) server.Post(p, bridge);
}

/// Blocks until the server stops. Returns false if the port cannot be bound.
inline bool serve(const std::string& host, int port, const ServiceConfig& cfg = {}) {
  httplib::Server server;
  install_routes(server, cfg);
  return server.listen(host, port);
}

}  // namespace geophylo
