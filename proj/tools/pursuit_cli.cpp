// pursuit: dominance-region geometry, simulation, verification suites and the
// live-session service.
//
// Exit status: 0 success, 1 failed check or --strict monitor violation,
// 2 invalid input (missing or malformed scenario, unknown suite, bad flags).

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "pursuit/io.hpp"
#include "pursuit/scenario.hpp"
#include "pursuit/service.hpp"
#include "pursuit/theorem_lab.hpp"

using namespace pursuit;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string point_text(Point2 p) { return "(" + fixed(p.x) + ", " + fixed(p.y) + ")"; }

int cmd_dominance(const std::string& scenario_path, const std::string& out) {
  const Scenario sc = load_scenario(scenario_path);
  const SimConfig& c = sc.config;
  const DominanceRegion region(c.world, c.initial.x_p, c.initial.x_e, c.alpha, c.capture_radius);
  const BoundaryResult b = boundary_arcs(region, sc.boundary_samples);

  std::cout << "scenario: " << (sc.name.empty() ? scenario_path : sc.name) << "\n";
  std::cout << "world: " << c.world.kind_name() << "\n";
  std::cout << "separation d_L(x_p, x_e): " << fixed(region.separation()) << "\n";
  if (c.world.is_corner()) {
    std::cout << "phi(vertex): " << fixed(region.phi({0.0, 0.0}), 9) << "\n";
    std::cout << "vertex outside closure: " << (region.vertex_outside_closure() ? "yes" : "no") << "\n";
  }
  std::cout << "boundary (" << b.method << "): " << b.arcs.size() << " arc" << (b.arcs.size() == 1 ? "" : "s") << ":";
  for (const auto& a : b.arcs) std::cout << " " << arc_type_name(a.curve);
  std::cout << "\n";
  for (std::size_t i = 0; i < b.arcs.size(); ++i) {
    const auto& a = b.arcs[i];
    std::cout << "  arc " << i + 1 << ": " << arc_type_name(a.curve) << " " << point_text(a.start) << " -> "
              << point_text(a.end) << ", " << a.points.size() << " points\n";
  }

  nlohmann::ordered_json doc;
  doc["scenario"] = sc.name;
  doc["world"] = world_to_json(c.world);
  doc["x_p"] = {c.initial.x_p.x, c.initial.x_p.y};
  doc["x_e"] = {c.initial.x_e.x, c.initial.x_e.y};
  doc["alpha"] = c.alpha;
  doc["capture_radius"] = c.capture_radius;
  doc["boundary"] = boundary_to_json(b);
  if (sc.target) {
    const DefenseResult d = defense_decision(c.world, c.initial.x_p, c.initial.x_e, c.alpha, *sc.target);
    std::cout << "defense: " << verdict_name(d.verdict) << " (max phi over target " << fixed(d.max_phi) << "; "
              << d.reason << ")\n";
    doc["defense"] = defense_to_json(d);
  }
  if (!out.empty()) {
    write_text_file(out, doc.dump() + "\n");
    std::cout << "wrote " << out << "\n";
  }
  return kOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out, double dt, bool strict,
                 const std::string& summary_out) {
  Scenario sc = load_scenario(scenario_path);
  if (dt > 0.0) sc.config.dt = dt;
  const SimResult r = run(sc.config);

  std::cout << "scenario: " << (sc.name.empty() ? scenario_path : sc.name) << "\n";
  std::cout << "pursuer: " << strategy_name(sc.config.pursuer) << ", evader: " << policy_name(sc.config.evader)
            << ", dt " << format_number(sc.config.dt) << "\n";
  std::cout << "outcome: " << outcome_name(r.outcome) << "\n";
  if (const auto* c = std::get_if<Captured>(&r.outcome)) std::cout << "t_f: " << fixed(c->t_f) << "\n";
  if (const auto* v = std::get_if<MonitorViolation>(&r.outcome))
    std::cout << "violation: " << v->which << " at t " << fixed(v->t) << ": " << v->detail << "\n";
  std::cout << "bound (d0 - l)/(alpha - 1): " << fixed(r.capture_bound) << "\n";
  std::cout << "rows: " << r.trajectory.rows.size() << "\n";
  for (const MonitorReport* m : {&r.containment, &r.closing_rate})
    std::cout << "monitor " << m->name << ": " << (m->pass ? "pass" : "FAIL") << " worst " << format_number(m->worst)
              << " tol " << format_number(m->tolerance) << " at t " << fixed(m->t_worst) << "\n";
  for (const auto& e : r.events) std::cerr << "event: " << e.what << "\n";

  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error("cannot write '" + out + "'");
    write_trajectory_csv(f, r.trajectory);
    std::cout << "wrote " << out << "\n";
  }
  if (!summary_out.empty()) write_text_file(summary_out, sim_summary_to_json(r).dump(1) + "\n");

  const bool violated = !r.containment.pass || !r.closing_rate.pass || std::holds_alternative<MonitorViolation>(r.outcome);
  if (strict && violated) {
    std::cerr << "strict: monitor violation\n";
    return kFailed;
  }
  return kOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "unknown suite '" << suite << "' (choose from:";
    for (const auto& n : names) std::cerr << " " << n;
    std::cerr << ")\n";
    return kInvalid;
  }
  const auto reports = run_suite(suite, seed);
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << check_report_line(r) << "\n";
    ok = ok && r.pass;
  }
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << " (suite " << suite << ", seed " << seed << ")\n";
  if (!out.empty()) write_text_file(out, check_reports_to_json(suite, seed, reports).dump(1) + "\n");
  return ok ? kOk : kFailed;
}

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) std::thread([] { g_service->stop(); }).detach();
}

int cmd_serve(const std::string& bind, bool unpaced) {
  const BindAddress addr = parse_bind(bind);
  Service service(!unpaced);
  const int port = service.bind(addr);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on " << addr.host << ":" << port << std::endl;
  service.run();
  g_service = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dominance regions, pursuit simulation and verification suites"};
  app.require_subcommand(1);

  std::string scenario, out, summary_out, suite = "all", bind = "127.0.0.1:8080";
  double dt = 0.0;
  bool strict = false, unpaced = false;
  std::uint64_t seed = 7;

  auto* dom = app.add_subcommand("dominance", "Boundary arcs of the initial dominance region");
  dom->add_option("--scenario", scenario, "Scenario JSON file")->required()->envname("PURSUIT_SCENARIO");
  dom->add_option("--out", out, "Boundary records (JSON)")->envname("PURSUIT_OUT");

  auto* sim = app.add_subcommand("simulate", "Run one episode");
  sim->add_option("--scenario", scenario, "Scenario JSON file")->required()->envname("PURSUIT_SCENARIO");
  sim->add_option("--out", out, "Trajectory rows (CSV)")->envname("PURSUIT_OUT");
  sim->add_option("--dt", dt, "Override the scenario time step")->envname("PURSUIT_DT")->check(CLI::PositiveNumber);
  sim->add_flag("--strict", strict, "Exit 1 on any monitor violation")->envname("PURSUIT_STRICT");
  sim->add_option("--summary", summary_out, "Outcome and monitor summary (JSON)");

  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("--suite", suite, "free-plane, corner, counterexample, metric or all")->envname("PURSUIT_SUITE");
  ver->add_option("--seed", seed, "Random seed")->envname("PURSUIT_SEED");
  ver->add_option("--out", out, "Check reports (JSON)")->envname("PURSUIT_OUT");

  auto* srv = app.add_subcommand("serve", "Serve live sessions over HTTP");
  srv->add_option("--bind", bind, "host:port")->envname("PURSUIT_BIND");
  srv->add_flag("--unpaced", unpaced, "Advance sessions only on step requests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*dom) return cmd_dominance(scenario, out);
    if (*sim) return cmd_simulate(scenario, out, dt, strict, summary_out);
    if (*ver) return cmd_verify(suite, seed, out);
    if (*srv) return cmd_serve(bind, unpaced);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kInvalid;
}
