#include "gcint/report.hpp"

#include <cmath>
#include <cstdio>

namespace gcint {

namespace {

Json params_json(const std::vector<std::pair<std::string, double>>& params) {
  Json j = Json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

Json partials_json(const std::vector<std::pair<std::string, Multivector>>& parts) {
  Json j = Json::object();
  for (const auto& [k, v] : parts) j[k] = to_json(v);
  return j;
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(key).dump();
        out += ": ";
        write(out, value, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(out, j[i], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

Json to_json(const Multivector& m) {
  Json j = Json::object();
  const auto c = m.coefficients();
  for (std::size_t b = 0; b < c.size(); ++b) {
    if (c[b] != 0.0) j[blade_name(static_cast<BladeIndex>(b))] = c[b];
  }
  return j;
}

Json to_json(const DirectedIntegralResult& r) {
  return Json{{"value", to_json(r.value)},
              {"cells", r.cells},
              {"subdivision", r.subdivision},
              {"estimated_error", r.estimated_error},
              {"converged", r.converged}};
}

Json to_json(const DerivativeCheck& c) {
  return Json{{"max_residual", c.max_residual}, {"points", c.points}, {"skipped", c.skipped}, {"passed", c.passed}};
}

Json to_json(const IntegrationReport& r) {
  Json incisions = Json::array();
  for (const IncisionSummary& e : r.incisions) {
    incisions.push_back(Json{{"name", e.name},
                             {"level", e.level},
                             {"volume", e.volume},
                             {"sup", e.sup},
                             {"bound", e.bound},
                             {"sup_is_estimate", e.sup_is_estimate}});
  }
  Json j{{"scenario", r.scenario},
         {"params", params_json(r.params)},
         {"epsilon", r.epsilon},
         {"result", to_json(r.result)},
         {"error_bound", r.error_bound},
         {"incisions", incisions},
         {"partials", partials_json(r.partials)}};
  if (r.oracle) {
    j["oracle"] = to_json(*r.oracle);
    j["oracle_delta"] = *r.oracle_delta;
  }
  j["bound_satisfied"] = r.bound_satisfied;
  j["diagnostics"] = Json{{"max_derivative_residual", r.diagnostics.max_derivative_residual},
                          {"max_orientation_residual", r.diagnostics.max_orientation_residual},
                          {"max_continuity_ratio", r.diagnostics.max_continuity_ratio},
                          {"derivative_samples", r.diagnostics.derivative_samples}};
  return j;
}

Json to_json(const SweepReport& r) {
  Json sweep = Json::array();
  for (const SweepEntry& e : r.sweep) {
    Json s{{"epsilon", e.epsilon}, {"result", to_json(e.result)}, {"error_bound", e.error_bound}};
    if (e.delta) s["delta"] = *e.delta;
    s["bound_satisfied"] = e.bound_satisfied;
    sweep.push_back(std::move(s));
  }
  Json j{{"scenario", r.scenario},
         {"params", params_json(r.params)},
         {"result", to_json(r.extrapolated)},
         {"partials", partials_json(r.extrapolated_partials)},
         {"convergence_order", r.convergence_order},
         {"error_bound", r.finest.error_bound},
         {"incisions", to_json(r.finest)["incisions"]}};
  if (r.oracle) j["oracle"] = to_json(*r.oracle);
  j["sweep"] = std::move(sweep);
  j["all_bounds_satisfied"] = r.all_bounds_satisfied;
  return j;
}

Json to_json(const BranchCutReport& r) {
  Json jumps = Json::array();
  for (const auto& [eps, v] : r.jumps) jumps.push_back(Json{{"epsilon", eps}, {"jump", to_json(v)}});
  return Json{{"jump", to_json(r.jump)},
              {"integral", to_json(r.integral)},
              {"mismatch", r.mismatch},
              {"max_continuity_ratio", r.max_continuity_ratio},
              {"nonzero", r.nonzero},
              {"sweep", jumps}};
}

std::string dump_json(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

}  // namespace gcint
