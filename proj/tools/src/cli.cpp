#include "gcint_tools/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcint/antiderivatives.hpp"
#include "gcint/axioms.hpp"
#include "gcint/boundary_method.hpp"
#include "gcint/errors.hpp"
#include "gcint/quadrature.hpp"
#include "gcint/report.hpp"

namespace gcint::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
  std::string command;
  std::optional<int> dim;
  std::uint64_t seed = 42;
  std::size_t trials = 1000;
  bool trials_set = false;
  double radius = 1.0;
  double height = 1.0;
  std::optional<double> chamfer;
  std::vector<double> eps_sweep{1e-1, 1e-2, 1e-3, 1e-4};
  std::optional<int> cells;
  std::optional<double> tol;
  std::string out;
  std::string scenario;  // run-scenario
  std::string patch;     // oracle, check-ftc
  std::string field;     // oracle, check-ftc
};

std::string num(double v, const char* f = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Json config_json(const RunConfig& c) {
  Json j = Json::object();
  j["command"] = c.command;
  if (c.dim) j["dim"] = *c.dim;
  j["seed"] = c.seed;
  return j;
}

void write_json(const RunConfig& c, Json body) {
  if (c.out.empty()) return;
  Json doc = Json::object();
  doc["schema"] = kJsonSchema;
  doc["config"] = config_json(c);
  for (auto& [k, v] : body.items()) doc[k] = v;
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + c.out + "'");
  f << dump_json(doc);
  if (!f) throw std::runtime_error("failed writing '" + c.out + "'");
}

// ------------------------------------------------------------ commands

int verify_algebra(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const double tol = c.tol.value_or(1e-10);
  std::vector<int> dims;
  if (c.dim) {
    dims.push_back(*c.dim);
  } else {
    dims = {2, 3, 4, 5, 6};
  }
  if (c.trials == 0) err << "warning: --trials 0 runs no checks; the pass is vacuous\n";
  bool ok = true;
  Json rows = Json::array();
  out << "dim  trials  associativity  reverse       norm          projection    violations\n";
  for (int d : dims) {
    const AxiomResiduals r = check_algebra_axioms(d, c.seed + static_cast<std::uint64_t>(d), c.trials, tol);
    ok = ok && r.passed();
    out << d << "    " << r.trials << "    " << num(r.associativity, "%-13.3e") << "  " << num(r.reverse, "%-12.3e")
        << "  " << num(r.norm_positivity, "%-12.3e") << "  " << num(r.projection, "%-12.3e") << "  " << r.violations
        << "\n";
    rows.push_back(Json{{"dim", d},
                        {"trials", r.trials},
                        {"associativity", r.associativity},
                        {"reverse", r.reverse},
                        {"norm_positivity", r.norm_positivity},
                        {"projection", r.projection},
                        {"violations", r.violations}});
  }
  out << (ok ? "PASS" : "FAIL") << "\n";
  write_json(c, Json{{"tolerance", tol}, {"vacuous", c.trials == 0}, {"dims", rows}, {"passed", ok}});
  return ok ? kPass : kFail;
}

int verify_table(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const double tol = c.tol.value_or(1e-6);
  const std::size_t points = c.trials_set ? c.trials : 100;
  if (points == 0) err << "warning: --trials 0 runs no checks; the pass is vacuous\n";
  std::vector<int> dims;
  if (c.dim) {
    dims.push_back(*c.dim);
  } else {
    dims = {2, 3, 4};
  }
  bool ok = true;
  Json rows = Json::array();
  out << "entry            dim  points  max residual  result\n";
  auto record = [&](const AntiderivativeEntry& e, int d) {
    CheckOptions opts;
    opts.points = points;
    opts.tolerance = tol;
    opts.seed = c.seed;
    const DerivativeCheck chk = check_entry(e, opts);
    const bool pass = points == 0 || chk.passed;
    ok = ok && pass;
    char line[128];
    std::snprintf(line, sizeof line, "%-16s %-4d %-7zu %-13.3e %s\n", e.name.c_str(), d, chk.points, chk.max_residual,
                  pass ? "ok" : "FAIL");
    out << line;
    Json row{{"entry", e.name}, {"formula", e.formula}, {"dim", d}};
    const Json check_json = to_json(chk);
    for (const auto& [k, v] : check_json.items()) row[k] = v;
    row["passed"] = pass;
    rows.push_back(std::move(row));
  };
  for (int d : dims) {
    for (const std::string& name : table_names()) record(table_entry(name, d), d);
    const Algebra alg(d);
    record(scenario_entry("circle", alg), d);
    if (d >= 3) {
      record(scenario_entry("cylinder-side", alg), d);
      ScenarioParams cap;
      cap.cap_height = 1.0;
      record(scenario_entry("cylinder-cap", alg, cap), d);
    }
  }
  out << (ok ? "PASS" : "FAIL") << "\n";
  write_json(c, Json{{"tolerance", tol}, {"entries", rows}, {"passed", ok}});
  return ok ? kPass : kFail;
}

int run_scenario(const RunConfig& c, std::ostream& out, std::ostream& /*err*/) {
  const bool disk = c.scenario == "disk";
  const int dim = c.dim.value_or(disk ? 2 : 3);
  const Algebra alg(dim);
  const VectorField one = VectorField::constant(Multivector::scalar(alg, 1.0));
  ChainFactory factory;
  DirectedIntegralResult oracle;
  Multivector reference(alg);
  if (disk) {
    DiskParams p;
    p.dim = dim;
    p.radius = c.radius;
    factory = [p](double e) {
      DiskParams q = p;
      q.cut_halfwidth = e;
      return disk_scenario(q);
    };
    oracle = directed_integral(disk_patch(p, c.cells.value_or(512)), one);
    reference = Multivector::basis_blade(alg, 0b11, kPi * c.radius * c.radius);
  } else {
    CylinderParams p;
    p.dim = dim;
    p.radius = c.radius;
    p.height = c.height;
    factory = [p](double e) {
      CylinderParams q = p;
      q.chamfer = e;
      return cylinder_scenario(q);
    };
    oracle = directed_integral(cylinder_patch(p, c.cells.value_or(50)), one);
    reference = Multivector::basis_blade(alg, 0b111, kPi * c.radius * c.radius * c.height);
  }

  if (c.chamfer) {
    ChainOptions opts;
    opts.oracle = oracle;
    const IntegrationReport rep = run_chain(factory(*c.chamfer), opts);
    out << c.scenario << " at epsilon " << num(*c.chamfer) << ": result " << num(rep.result.norm(), "%.15g")
        << ", oracle delta " << num(*rep.oracle_delta, "%.3e") << ", bound " << num(rep.error_bound, "%.3e")
        << "\n"
        << (rep.bound_satisfied ? "PASS" : "FAIL") << "\n";
    Json body = to_json(rep);
    body["passed"] = rep.bound_satisfied;
    write_json(c, std::move(body));
    return rep.bound_satisfied ? kPass : kFail;
  }

  std::vector<double> eps = c.eps_sweep;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const SweepReport sw = run_sweep(factory, eps, oracle);
  const double tol = c.tol.value_or(disk ? 1e-6 : 1e-4);
  const double ref_delta = distance(sw.extrapolated, reference);
  const bool ok = sw.all_bounds_satisfied && ref_delta <= tol;

  out << "epsilon      result         oracle delta   error bound    bound\n";
  for (const SweepEntry& e : sw.sweep) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12.3g %-14.10g %-14.3e %-14.3e %s\n", e.epsilon, e.result.norm(),
                  e.delta.value_or(0.0), e.error_bound, e.bound_satisfied ? "ok" : "VIOLATED");
    out << line;
  }
  out << "extrapolated " << num(sw.extrapolated.norm(), "%.15g") << " (reference " << num(reference.norm(), "%.15g")
      << ", delta " << num(ref_delta, "%.3e") << "), convergence order " << num(sw.convergence_order, "%.3f")
      << "\n"
      << (ok ? "PASS" : "FAIL") << "\n";
  Json body = to_json(sw);
  body["reference"] = to_json(reference);
  body["reference_delta"] = ref_delta;
  body["tolerance"] = tol;
  body["passed"] = ok;
  write_json(c, std::move(body));
  return ok ? kPass : kFail;
}

struct PatchSetup {
  std::optional<ManifoldPatch> patch;
  std::optional<ImplicitManifold> manifold;
  Algebra alg{2};
  std::optional<Multivector> measure;  // exact directed volume, when known
};

PatchSetup make_patch(const RunConfig& c, int cells) {
  PatchSetup s;
  if (c.patch == "unit-square" || c.patch == "unit-cube") {
    const int m = c.patch == "unit-square" ? 2 : 3;
    s.alg = Algebra(m);
    const Algebra alg = s.alg;
    s.patch.emplace(alg, m, [alg](std::span<const double> u) { return Multivector::vector(alg, u); }, +1, cells,
                    c.patch);
    s.manifold.emplace(ImplicitManifold::flat(Blade(Multivector::pseudoscalar(alg))));
    s.measure = Multivector::pseudoscalar(alg);
  } else if (c.patch == "disk") {
    DiskParams p;
    p.dim = c.dim.value_or(2);
    p.radius = c.radius;
    s.alg = Algebra(p.dim);
    s.patch.emplace(disk_patch(p, cells));
    s.manifold.emplace(ImplicitManifold::flat(Blade(Multivector::basis_blade(s.alg, 0b11))));
    s.measure = Multivector::basis_blade(s.alg, 0b11, kPi * c.radius * c.radius);
  } else {
    CylinderParams p;
    p.dim = c.dim.value_or(3);
    p.radius = c.radius;
    p.height = c.height;
    s.alg = Algebra(p.dim);
    s.patch.emplace(cylinder_patch(p, cells));
    s.manifold.emplace(ImplicitManifold::flat(Blade(Multivector::basis_blade(s.alg, 0b111))));
    s.measure = Multivector::basis_blade(s.alg, 0b111, kPi * c.radius * c.radius * c.height);
  }
  return s;
}

VectorField make_field(const std::string& name, Algebra alg) {
  if (name == "one") return VectorField::constant(Multivector::scalar(alg, 1.0));
  if (name == "x") return VectorField(alg, [](const Multivector& x) { return x; });
  if (name == "half-x-squared") return table_entry("x", alg.dim()).antiderivative;
  return table_entry("ax", alg.dim()).antiderivative;
}

int oracle_cmd(const RunConfig& c, std::ostream& out, std::ostream& /*err*/) {
  const PatchSetup s = make_patch(c, c.cells.value_or(64));
  const VectorField f = make_field(c.field, s.alg);
  QuadratureOptions q;
  q.tolerance = c.tol.value_or(0.0);
  if (q.tolerance > 0.0) q.max_subdivision = std::max(1024, s.patch->subdivision);
  const DirectedIntegralResult r = directed_integral(*s.patch, f, q);
  const bool ok = r.converged;
  out << c.patch << " x " << c.field << ": " << r.cells << " cells, |value| " << num(r.value.norm(), "%.15g")
      << ", estimated error " << num(r.estimated_error, "%.3e") << "\n";
  Json body = Json::object();
  body["patch"] = c.patch;
  body["field"] = c.field;
  const Json result_json = to_json(r);
  for (const auto& [k, v] : result_json.items()) body[k] = v;
  if (c.field == "one" && s.measure) {
    const double delta = distance(r.value, *s.measure);
    body["exact"] = to_json(*s.measure);
    body["exact_delta"] = delta;
    out << "exact delta " << num(delta, "%.3e") << "\n";
  }
  body["passed"] = ok;
  out << (ok ? "PASS" : "FAIL") << "\n";
  write_json(c, std::move(body));
  return ok ? kPass : kFail;
}

int check_ftc(const RunConfig& c, std::ostream& out, std::ostream& /*err*/) {
  const PatchSetup s = make_patch(c, c.cells.value_or(c.patch == "unit-cube" ? 64 : 256));
  const VectorField f = make_field(c.field, s.alg);
  const FundamentalTheoremCheck chk = verify_fundamental_theorem(*s.patch, f, *s.manifold);
  const double tol = c.tol.value_or(1e-6);
  const bool ok = chk.residual <= tol;
  out << "interior " << num(chk.interior.norm(), "%.15g") << ", boundary " << num(chk.boundary.norm(), "%.15g")
      << ", residual " << num(chk.residual, "%.3e") << " at " << chk.cells << " cells\n"
      << (ok ? "PASS" : "FAIL") << "\n";
  write_json(c,
             Json{{"patch", c.patch},
                  {"field", c.field},
                  {"cells", chk.cells},
                  {"interior", to_json(chk.interior)},
                  {"boundary", to_json(chk.boundary)},
                  {"residual", chk.residual},
                  {"tolerance", tol},
                  {"passed", ok}});
  return ok ? kPass : kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Directed integration by repeated antiderivatives", "gcint"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--tol", c.tol, "Tolerance override");
    sub->add_option("--out", c.out, "Write the JSON report to this path");
  };
  auto dim_option = [&](CLI::App* sub, int lo) {
    sub->add_option("--dim", c.dim, "Ambient dimension")->check(CLI::Range(lo, 8));
  };

  CLI::App* alg = app.add_subcommand("verify-algebra", "Randomized algebra axiom checks");
  dim_option(alg, 2);
  alg->add_option("--trials", c.trials, "Random trials per dimension");
  common(alg);

  CLI::App* table = app.add_subcommand("verify-table", "Derivative checks of the antiderivative catalog");
  dim_option(table, 2);
  table->add_option("--trials", c.trials, "Sample points per entry")->each([&](const std::string&) { c.trials_set = true; });
  common(table);

  CLI::App* scen = app.add_subcommand("run-scenario", "Run the disk or cylinder integration chain");
  scen->add_option("scenario", c.scenario, "disk or cylinder")->required()->check(CLI::IsMember({"disk", "cylinder"}));
  dim_option(scen, 2);
  scen->add_option("--radius", c.radius, "Radius")->check(CLI::PositiveNumber);
  scen->add_option("--height", c.height, "Cylinder height")->check(CLI::PositiveNumber);
  scen->add_option("--chamfer", c.chamfer, "Run a single incision size instead of a sweep")->check(CLI::PositiveNumber);
  scen->add_option("--eps-sweep", c.eps_sweep, "Comma-separated incision sizes")->delimiter(',')->expected(1, -1);
  scen->add_option("--cells", c.cells, "Oracle cells per axis")->check(CLI::Range(2, 4096));
  common(scen);

  CLI::App* orc = app.add_subcommand("oracle", "Brute-force directed integral over a patch");
  c.patch = "unit-square";
  c.field = "one";
  orc->add_option("--field", c.field, "one, x, half-x-squared or ax")
      ->check(CLI::IsMember({"one", "x", "half-x-squared", "ax"}));
  orc->add_option("patch,--patch", c.patch, "unit-square, unit-cube, disk or cylinder")
      ->check(CLI::IsMember({"unit-square", "unit-cube", "disk", "cylinder"}));
  dim_option(orc, 2);
  orc->add_option("--radius", c.radius, "Radius")->check(CLI::PositiveNumber);
  orc->add_option("--height", c.height, "Cylinder height")->check(CLI::PositiveNumber);
  orc->add_option("--cells", c.cells, "Cells per axis")->check(CLI::Range(1, 4096));
  common(orc);

  CLI::App* ftc = app.add_subcommand("check-ftc", "Both sides of the fundamental theorem on a box");
  ftc->add_option("--field", c.field, "half-x-squared or ax")->check(CLI::IsMember({"half-x-squared", "ax"}));
  ftc->add_option("--patch", c.patch, "unit-square or unit-cube")->check(CLI::IsMember({"unit-square", "unit-cube"}));
  ftc->add_option("--cells", c.cells, "Cells per axis")->check(CLI::Range(1, 512));
  common(ftc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  if (ftc->parsed() && c.field == "one") c.field = "half-x-squared";
  for (CLI::App* sub : app.get_subcommands()) c.command = sub->get_name();
  if (c.command == "run-scenario" && c.scenario == "cylinder" && c.dim && *c.dim < 3) {
    err << "usage error: the cylinder needs --dim >= 3\n";
    return kUsage;
  }
  if (c.command == "oracle" && c.patch == "cylinder" && c.dim && *c.dim < 3) {
    err << "usage error: the cylinder needs --dim >= 3\n";
    return kUsage;
  }

  try {
    if (c.command == "verify-algebra") return verify_algebra(c, out, err);
    if (c.command == "verify-table") return verify_table(c, out, err);
    if (c.command == "run-scenario") return run_scenario(c, out, err);
    if (c.command == "oracle") return oracle_cmd(c, out, err);
    return check_ftc(c, out, err);
  } catch (const std::invalid_argument& e) {
    err << c.command << ": invalid parameters: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << c.command << ": " << e.what() << "\n";
    return kFail;
  }
}

}  // namespace gcint::cli
