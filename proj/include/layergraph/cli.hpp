#pragma once

// JSON job layer behind the command-line tool: one request per line in, one
// result per line out.  Numeric payload fields are serialized with 12
// significant digits; width inputs may be exact rationals ("3/5"), decimal
// strings, or plain numbers.

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "layergraph/analysis.hpp"
#include "layergraph/core.hpp"
#include "layergraph/gadgets.hpp"
#include "layergraph/hop.hpp"
#include "layergraph/rational.hpp"
#include "layergraph/svg.hpp"

namespace layergraph::cli {

using nlohmann::json;

struct JobRequest {
  std::string command;
  json params = json::object();
  std::uint64_t seed = 0x1a2b3c4d5e6full;
  Tolerance tol;
};

struct JobResult {
  bool ok = false;
  json payload;
  std::vector<std::string> diagnostics;
  int exit_code = 0;

  [[nodiscard]] json to_json() const {
    json out;
    out["status"] = ok ? "ok" : "error";
    if (ok) out["payload"] = payload;
    out["diagnostics"] = diagnostics;
    return out;
  }
};

namespace detail {

inline double round_sig(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline json jnum(double v) { return json(round_sig(v)); }

inline json jpoint(const LayerPoint& pt) {
  json arr = json::array();
  for (double c : pt.h) arr.push_back(jnum(c));
  for (double c : pt.v) arr.push_back(jnum(c));
  return arr;
}

inline json jpath(const std::vector<LayerPoint>& pts) {
  json arr = json::array();
  for (const auto& q : pts) arr.push_back(jpoint(q));
  return arr;
}

struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline double need_number(const json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number())
    throw ParamError(std::string("missing or non-numeric parameter: ") + key);
  return params[key].get<double>();
}

inline int need_int(const json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number_integer())
    throw ParamError(std::string("missing or non-integer parameter: ") + key);
  return params[key].get<int>();
}

inline double parse_p(const json& params) {
  if (!params.contains("p")) throw ParamError("missing parameter: p");
  const auto& v = params["p"];
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ParamError("p: expected a number or \"inf\"");
  }
  if (!v.is_number()) throw ParamError("p: expected a number or \"inf\"");
  return v.get<double>();
}

inline LayerSpec parse_spec(const json& params) {
  return LayerSpec(need_int(params, "n"), need_int(params, "m"), parse_p(params),
                   need_number(params, "eps"));
}

inline LayerPoint parse_point(const json& params, const char* key, const LayerSpec& spec) {
  if (!params.contains(key) || !params[key].is_array())
    throw ParamError(std::string("missing point array: ") + key);
  std::vector<double> flat;
  for (const auto& v : params[key]) {
    if (!v.is_number()) throw ParamError(std::string(key) + ": coordinates must be numbers");
    flat.push_back(v.get<double>());
  }
  if (static_cast<int>(flat.size()) != spec.dim())
    throw ParamError(std::string(key) + ": expected " + std::to_string(spec.dim()) +
                     " coordinates");
  return unflatten(flat, spec);
}

// Width value as an exact rational; floats are taken at their exact dyadic
// value and flagged with a tolerance caveat.
inline Rational parse_width(const json& params, const char* key,
                            std::vector<std::string>& diagnostics) {
  if (!params.contains(key)) throw ParamError(std::string("missing width parameter: ") + key);
  const auto& v = params[key];
  if (v.is_string()) {
    auto r = Rational::parse(v.get<std::string>());
    if (!r || !(*r > Rational(0))) throw ParamError(std::string(key) + ": not a positive rational");
    return *r;
  }
  if (v.is_number()) {
    diagnostics.push_back(std::string("note: ") + key +
                          " given as a float; comparisons use its exact binary value");
    return Rational::from_double(v.get<double>());
  }
  throw ParamError(std::string(key) + ": expected a number or rational string");
}

inline HopConfig parse_hop_config(const json& params, std::uint64_t seed) {
  HopConfig cfg;
  cfg.seed = seed;
  if (params.contains("far_threshold")) cfg.far_threshold = need_number(params, "far_threshold");
  if (params.contains("near_budget")) cfg.near_budget = need_int(params, "near_budget");
  if (params.contains("restarts")) cfg.restarts = need_int(params, "restarts");
  return cfg;
}

inline json comb_to_json(const Comb& comb) {
  json out;
  out["N"] = comb.N;
  out["M"] = comb.M;
  out["a"] = jpath(comb.a);
  out["b"] = jpath(comb.b);
  out["c"] = jpath(comb.c);
  return out;
}

}  // namespace detail

inline json schemas() {
  json req;
  req["request"] = {
      {"command",
       {"dist", "path", "midpoints", "comb", "modified-comb", "sandwich", "signature",
        "distinguish", "width-witness", "verify-gamma-omega", "verify-gamma-hat", "cycle",
        "isometry", "render"}},
      {"params", "object; see per-command entries"},
      {"seed", "optional unsigned integer"},
      {"tol", "optional {abs, rel}"}};
  req["response"] = {{"status", "ok | error"},
                     {"payload", "present when status == ok"},
                     {"diagnostics", "array of strings; nonempty on error"}};
  req["commands"] = {
      {"dist", "layer spec {n,m,p,eps} + points a, b (flat arrays); optional far_threshold, "
               "near_budget, restarts -> {dist, lower, upper|null, exact, witness?}"},
      {"path", "same as dist; optional hops forces a near search of that length"},
      {"midpoints", "layer spec + points x, y -> {kind: two|unique-midpoint|none, ...}"},
      {"comb", "{N, M, eps} -> threshold, existence, extreme comb, validation"},
      {"modified-comb", "{N, M, eps, mirror?} -> modified comb + delta-region check"},
      {"sandwich", "{rows, eps, shift:[x,y], half_width?} -> window points + border points"},
      {"signature", "{eps} -> {integer_part, fractional_part}"},
      {"distinguish", "{eps1, eps2} (rationals or numbers) -> separating gadget"},
      {"width-witness", "{n,m,p,eps} -> {x, y, z, k, delta}"},
      {"verify-gamma-omega", "{eps, x1, x2, y} -> {omega, gamma}"},
      {"verify-gamma-hat", "{n,m,p,eps, xs:[...], y} -> {omega, gamma, samples, max_radius}"},
      {"cycle", "{k, eps?} -> embedding when eps given, else {min_width}"},
      {"isometry", "{n,m,p,eps, transform:{...}, samples?} -> {isometry}"},
      {"render", "{object: path|comb|modified-comb|sandwich|cycle, out, ...params} -> SVG file"}};
  return req;
}

inline JobResult run(const JobRequest& request) {
  using detail::jnum;
  JobResult result;
  try {
    const auto& params = request.params;
    json payload;

    if (request.command == "dist" || request.command == "path") {
      const auto spec = detail::parse_spec(params);
      const auto a = detail::parse_point(params, "a", spec);
      const auto b = detail::parse_point(params, "b", spec);
      const auto cfg = detail::parse_hop_config(params, request.seed);
      if (request.command == "path") {
        std::optional<WitnessPath> path;
        if (params.contains("hops")) {
          path = near_search(a, b, detail::need_int(params, "hops"), spec, cfg, request.tol);
          if (!path) {
            payload["found"] = false;
            result.ok = true;
            result.payload = payload;
            return result;
          }
        } else {
          path = far_witness_path(a, b, spec, cfg, request.tol);
        }
        payload["found"] = true;
        payload["edges"] = path->edges();
        payload["vertices"] = detail::jpath(path->vertices);
      } else {
        const auto res = hop_distance(a, b, spec, cfg, request.tol);
        payload["dist"] = jnum(lp_dist(a, b, spec));
        payload["lower"] = res.interval.lower;
        payload["upper"] = res.interval.upper ? json(*res.interval.upper) : json(nullptr);
        payload["exact"] = res.interval.exact;
        if (res.witness) payload["witness"] = detail::jpath(res.witness->vertices);
      }
    } else if (request.command == "midpoints") {
      const auto spec = detail::parse_spec(params);
      const auto x = detail::parse_point(params, "x", spec);
      const auto y = detail::parse_point(params, "y", spec);
      const auto res = unit_equidistant_pair(x, y, spec, request.tol);
      if (res.kind == EquidistantKind::UniqueMidpoint) {
        payload["kind"] = "unique-midpoint";
        payload["z"] = detail::jpoint(res.z1);
      } else if (res.kind == EquidistantKind::TwoPoints) {
        payload["kind"] = "two";
        payload["z1"] = detail::jpoint(res.z1);
        payload["z2"] = detail::jpoint(res.z2);
        payload["residuals"] = {jnum(std::abs(lp_dist(res.z1, x, spec) - 1.0)),
                                jnum(std::abs(lp_dist(res.z1, y, spec) - 1.0)),
                                jnum(std::abs(lp_dist(res.z2, x, spec) - 1.0)),
                                jnum(std::abs(lp_dist(res.z2, y, spec) - 1.0))};
      } else {
        payload["kind"] = "none";
      }
    } else if (request.command == "comb" || request.command == "modified-comb") {
      const int N = detail::need_int(params, "N");
      const int M = detail::need_int(params, "M");
      const auto eps_rat = detail::parse_width(params, "eps", result.diagnostics);
      const double eps = eps_rat.to_double();
      payload["threshold"] = jnum(comb_min_width(N, M));
      payload["threshold_exact"] = comb_threshold_string(N, M);
      if (request.command == "comb") {
        const bool exists = comb_exists(N, M, eps_rat);
        payload["exists"] = exists;
        if (exists) {
          const auto comb = build_extreme_comb(N, M, eps);
          const auto report = validate_comb(comb, strip_spec(eps), request.tol);
          payload["comb"] = detail::comb_to_json(comb);
          payload["valid"] = report.valid;
          payload["violations"] = report.violations;
          payload["within_stated_regime"] = report.within_stated_regime;
        }
      } else {
        const bool exists = modified_comb_exists(N, M, eps_rat);
        payload["exists"] = exists;
        if (exists) {
          const bool mirror = params.value("mirror", false);
          const auto comb = build_modified_comb(N, M, eps, mirror);
          const auto report = validate_comb(comb, strip_spec(eps), request.tol);
          const auto sig = width_signature(eps);
          json delta = json::array();
          for (const auto* fam : {&comb.a, &comb.b, &comb.c})
            for (const auto& q : *fam) delta.push_back(delta_region_contains(q, sig));
          payload["comb"] = detail::comb_to_json(comb);
          payload["valid"] = report.valid;
          payload["violations"] = report.violations;
          payload["delta_region"] = delta;
          payload["mirror"] = mirror;
        }
      }
    } else if (request.command == "sandwich") {
      const int rows = detail::need_int(params, "rows");
      const double eps = detail::need_number(params, "eps");
      const bool fits = sandwich_fits(rows, eps, request.tol);
      payload["fits"] = fits;
      if (fits && params.contains("shift")) {
        LayerSpec spec = strip_spec(eps);
        const auto shift = detail::parse_point(params, "shift", spec);
        const int half_width = params.value("half_width", 8);
        const auto s = build_sandwich(rows, eps, shift, half_width, request.tol);
        payload["points"] = detail::jpath(sandwich_points(s));
        payload["border"] = detail::jpath(border_points(s));
      }
    } else if (request.command == "signature") {
      const auto eps = detail::parse_width(params, "eps", result.diagnostics);
      const auto sig = width_signature(eps);
      payload["integer_part"] = sig.integer_part;
      payload["fractional_part"] = jnum(sig.fractional_part);
    } else if (request.command == "distinguish") {
      const auto e1 = detail::parse_width(params, "eps1", result.diagnostics);
      const auto e2 = detail::parse_width(params, "eps2", result.diagnostics);
      const auto witness = distinguish(e1, e2);
      switch (witness.kind) {
        case WitnessKind::Equal:
          payload["kind"] = "equal";
          break;
        case WitnessKind::Sandwich:
          payload["kind"] = "sandwich";
          payload["m_s"] = witness.m_s;
          payload["present_in"] = witness.present_in;
          break;
        case WitnessKind::Comb:
        case WitnessKind::ModifiedComb:
          payload["kind"] = witness.kind == WitnessKind::Comb ? "comb" : "modified-comb";
          payload["N"] = witness.N;
          payload["M"] = witness.M;
          payload["threshold"] = witness.threshold_exact;
          payload["threshold_value"] = jnum(witness.threshold);
          payload["present_in"] = witness.present_in;
          break;
      }
    } else if (request.command == "width-witness") {
      const auto spec = detail::parse_spec(params);
      const auto w = width_witness(spec, request.tol);
      payload["x"] = detail::jpoint(w.x);
      payload["y"] = detail::jpoint(w.y);
      payload["z"] = detail::jpoint(w.z);
      payload["k"] = w.k;
      payload["delta"] = jnum(w.delta);
      payload["dist_yz"] = jnum(lp_dist(w.y, w.z, spec));
    } else if (request.command == "verify-gamma-omega") {
      const double eps = detail::need_number(params, "eps");
      const LayerSpec spec = strip_spec(eps);
      const auto x1 = detail::parse_point(params, "x1", spec);
      const auto x2 = detail::parse_point(params, "x2", spec);
      const auto y = detail::parse_point(params, "y", spec);
      const auto cfg = detail::parse_hop_config(params, request.seed);
      payload["omega"] = omega_check(x1, x2, y, spec);
      payload["gamma"] = gamma_check(x1, x2, y, spec, cfg);
    } else if (request.command == "verify-gamma-hat") {
      const auto spec = detail::parse_spec(params);
      if (!params.contains("xs") || !params["xs"].is_array())
        throw detail::ParamError("missing point list: xs");
      std::vector<LayerPoint> xs;
      for (const auto& item : params["xs"]) {
        json wrap;
        wrap["q"] = item;
        xs.push_back(detail::parse_point(wrap, "q", spec));
      }
      const auto y = detail::parse_point(params, "y", spec);
      const auto cfg = detail::parse_hop_config(params, request.seed);
      const auto verdict = gamma_hat_check(xs, y, spec, cfg);
      payload["omega"] = verdict.omega;
      payload["gamma"] = verdict.gamma;
      payload["samples"] = verdict.samples;
      payload["max_radius"] = jnum(verdict.max_radius);
    } else if (request.command == "cycle") {
      const int k = detail::need_int(params, "k");
      HopConfig cfg = detail::parse_hop_config(params, request.seed);
      if (params.contains("eps")) {
        const double eps = detail::need_number(params, "eps");
        const auto emb = cycle_embeds(k, eps, cfg, request.tol);
        payload["found"] = emb.has_value();
        if (emb) payload["vertices"] = detail::jpath(emb->vertices);
      } else {
        payload["min_width"] = jnum(odd_cycle_min_width(k, cfg, request.tol));
      }
    } else if (request.command == "isometry") {
      const auto spec = detail::parse_spec(params);
      if (!params.contains("transform") || !params["transform"].is_object())
        throw detail::ParamError("missing transform object");
      const auto& t = params["transform"];
      RigidMotion motion;
      if (t.contains("h_translate"))
        for (const auto& v : t["h_translate"]) motion.h_translate.push_back(v.get<double>());
      motion.rotation_angle = t.value("rotation_angle", 0.0);
      motion.h_reflect = t.value("h_reflect", false);
      if (t.contains("v_permutation"))
        for (const auto& v : t["v_permutation"]) motion.v_permutation.push_back(v.get<int>());
      if (t.contains("v_flip"))
        for (const auto& v : t["v_flip"])
          motion.v_flip.push_back(static_cast<std::uint8_t>(v.get<bool>() ? 1 : 0));
      motion.v_shift = t.value("v_shift", 0.0);
      motion.tilt_angle = t.value("tilt_angle", 0.0);
      const int samples = params.value("samples", 100);
      payload["isometry"] = isometry_sanity(spec, motion, samples, request.seed, request.tol);
    } else if (request.command == "render") {
      if (!params.contains("object") || !params["object"].is_string())
        throw detail::ParamError("render: missing object kind");
      if (!params.contains("out") || !params["out"].is_string())
        throw detail::ParamError("render: missing output path");
      const auto object = params["object"].get<std::string>();
      const auto out_path = params["out"].get<std::string>();
      std::string svg;
      if (object == "path") {
        const auto spec = detail::parse_spec(params);
        if (spec.n != 1 || spec.m != 1)
          throw detail::ParamError("render: only planar objects can be rendered");
        const auto a = detail::parse_point(params, "a", spec);
        const auto b = detail::parse_point(params, "b", spec);
        const auto cfg = detail::parse_hop_config(params, request.seed);
        const auto res = hop_distance(a, b, spec, cfg, request.tol);
        if (!res.witness) throw detail::ParamError("render: no witness path available");
        svg = svg_witness_path(*res.witness, spec.eps);
      } else if (object == "comb" || object == "modified-comb") {
        const int N = detail::need_int(params, "N");
        const int M = detail::need_int(params, "M");
        const double eps = detail::need_number(params, "eps");
        const auto comb = object == "comb" ? build_extreme_comb(N, M, eps)
                                           : build_modified_comb(N, M, eps,
                                                                 params.value("mirror", false));
        svg = svg_comb(comb, eps);
      } else if (object == "sandwich") {
        const int rows = detail::need_int(params, "rows");
        const double eps = detail::need_number(params, "eps");
        LayerSpec spec = strip_spec(eps);
        const auto shift = detail::parse_point(params, "shift", spec);
        svg = svg_sandwich(build_sandwich(rows, eps, shift, params.value("half_width", 8),
                                          request.tol),
                           eps);
      } else if (object == "cycle") {
        const int k = detail::need_int(params, "k");
        const double eps = detail::need_number(params, "eps");
        const auto cfg = detail::parse_hop_config(params, request.seed);
        const auto emb = cycle_embeds(k, eps, cfg, request.tol);
        if (!emb) throw detail::ParamError("render: no cycle embedding found");
        svg = svg_cycle(*emb, eps);
      } else {
        throw detail::ParamError("render: unknown object kind: " + object);
      }
      write_svg_file(svg, out_path);
      payload["file"] = out_path;
      payload["bytes"] = svg.size();
    } else {
      result.diagnostics.push_back("E_COMMAND: unknown command: " + request.command);
      result.exit_code = 2;
      return result;
    }

    result.ok = true;
    result.payload = payload;
    return result;
  } catch (const detail::ParamError& err) {
    result.diagnostics.push_back(std::string("E_PARAMS: ") + err.what());
    result.exit_code = 2;
  } catch (const std::invalid_argument& err) {
    result.diagnostics.push_back(std::string("E_PARAMS: ") + err.what());
    result.exit_code = 2;
  } catch (const std::exception& err) {
    result.diagnostics.push_back(std::string("E_INTERNAL: ") + err.what());
    result.exit_code = 3;
  }
  result.ok = false;
  return result;
}

// Parses a single request line and runs it; malformed JSON yields E_PARSE.
inline JobResult run_line(const std::string& line, std::optional<std::uint64_t> default_seed,
                          std::optional<Tolerance> default_tol) {
  JobResult bad;
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("command") ||
      !doc["command"].is_string()) {
    bad.diagnostics.push_back("E_PARSE: request must be a JSON object with a command string");
    bad.exit_code = 2;
    return bad;
  }
  JobRequest req;
  req.command = doc["command"].get<std::string>();
  if (doc.contains("params")) req.params = doc["params"];
  if (default_seed) req.seed = *default_seed;
  if (doc.contains("seed")) req.seed = doc["seed"].get<std::uint64_t>();
  if (default_tol) req.tol = *default_tol;
  if (doc.contains("tol") && doc["tol"].is_object()) {
    req.tol.abs_tol = doc["tol"].value("abs", req.tol.abs_tol);
    req.tol.rel_tol = doc["tol"].value("rel", req.tol.rel_tol);
  }
  return run(req);
}

}  // namespace layergraph::cli
