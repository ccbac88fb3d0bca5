// Batch front end: one subcommand per workflow, JSON config in, CSV/JSON out.
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "billiards/billiard.hpp"
#include "billiards/errors.hpp"
#include "billiards/geometry.hpp"
#include "billiards/quasi.hpp"
#include "billiards/radon.hpp"
#include "billiards/rigidity.hpp"
#include "billiards/spectra.hpp"
#include "billiards/tori.hpp"
#include "billiards/wiener.hpp"

using namespace billiards;
using nlohmann::json;

namespace {

struct Run {
  json cfg;
  std::string format;  // "csv" | "json"
  int nodes = 0;       // 0: command default
  double tol = 0.0;    // 0: command default
  std::ostream* out = &std::cout;
};

void allow_keys(const json& obj, std::set<std::string> allowed, const std::string& where) {
  require(obj.is_object(), ErrorCode::ConfigError, where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    require(allowed.count(key) > 0, ErrorCode::ConfigError, fmt::format("unknown key \"{}\" in {}", key, where));
  }
}

template <class T>
T get(const json& obj, const char* key) {
  require(obj.contains(key), ErrorCode::ConfigError, fmt::format("missing key \"{}\"", key));
  return obj.at(key).get<T>();
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

void emit_json(const Run& run, const json& j) { *run.out << j.dump(2) << '\n'; }

BoundaryCurve curve_of(const json& cfg) {
  const auto dom = parse_domain(get<json>(cfg, "domain"));
  return *dom.curve;
}

LiouvilleTable table_of(const json& cfg) {
  const auto dom = parse_domain(get<json>(cfg, "domain"));
  require(dom.table.has_value(), ErrorCode::ConfigError, "this command needs a liouville domain");
  return *dom.table;
}

CircleOptions circle_options(const Run& run, const json& cfg, double length) {
  CircleOptions opt;
  opt.period = get_or(cfg, "period", 1);
  if (cfg.contains("center")) {
    const auto c = cfg.at("center").get<std::vector<double>>();
    require(c.size() == 2, ErrorCode::ConfigError, "center is [s, xi]");
    opt.center = PhasePoint{c[0] * length, c[1]};
  }
  if (run.tol > 0.0) opt.tol = run.tol;
  return opt;
}

// {"terms":[{"px":i,"py":j,"amp":a}]} for Σ a x^i y^j
std::function<double(Vec2)> parse_potential(const json& spec) {
  allow_keys(spec, {"terms"}, "V");
  struct Mono {
    int px, py;
    double amp;
  };
  std::vector<Mono> terms;
  for (const auto& t : get<json>(spec, "terms")) {
    allow_keys(t, {"px", "py", "amp"}, "V term");
    terms.push_back({get_or(t, "px", 0), get_or(t, "py", 0), get<double>(t, "amp")});
    require(terms.back().px >= 0 && terms.back().py >= 0, ErrorCode::ConfigError, "negative exponent");
  }
  return [terms](Vec2 p) {
    double acc = 0.0;
    for (const auto& m : terms) acc += m.amp * std::pow(p.x, m.px) * std::pow(p.y, m.py);
    return acc;
  };
}

std::vector<double> grid_of(const json& spec) {
  if (spec.is_array()) return spec.get<std::vector<double>>();
  allow_keys(spec, {"from", "to", "count"}, "grid");
  const double a = get<double>(spec, "from"), b = get<double>(spec, "to");
  const int n = get<int>(spec, "count");
  require(n >= 1, ErrorCode::ConfigError, "grid count must be positive");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return g;
}

int cmd_map(const Run& run) {
  allow_keys(run.cfg, {"domain", "s", "xi", "m"}, "map config");
  const auto curve = curve_of(run.cfg);
  const auto orb = orbit(curve, {get<double>(run.cfg, "s"), get<double>(run.cfg, "xi")}, get<int>(run.cfg, "m"));
  if (run.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < orb.chords.size(); ++i) {
      rows.push_back({{"s", orb.states[i].s}, {"xi", orb.states[i].xi}, {"chord_length", orb.chords[i].length}});
    }
    emit_json(run, {{"bounces", rows}, {"total_length", orb.total_length()}});
  } else {
    write_orbit_csv(*run.out, curve, orb);
  }
  return 0;
}

int cmd_circle(const Run& run) {
  allow_keys(run.cfg, {"domain", "s", "xi", "modes", "period", "center", "tau", "k_max"}, "circle config");
  const auto curve = curve_of(run.cfg);
  const double L = curve.total_length();
  const auto opt = circle_options(run, run.cfg, L);
  const PhasePoint seed{get<double>(run.cfg, "s") * L, get<double>(run.cfg, "xi")};
  const auto circle = circle_conjugacy(curve, seed, get_or(run.cfg, "modes", 64), opt);
  if (run.format == "csv") {
    write_circle_csv(*run.out, curve, circle, run.nodes > 0 ? run.nodes : 256);
    return 0;
  }
  const auto act = action_data(curve, circle, nullptr, run.nodes > 0 ? run.nodes : 1024);
  const double omega = std::abs(circle.advance()) - std::floor(std::abs(circle.advance()));
  const auto wit = diophantine_kappa({omega}, get_or(run.cfg, "tau", 1.0), get_or(run.cfg, "k_max", 100));
  emit_json(run, {{"rotation", to_json(circle.omega)},
                  {"period", circle.period},
                  {"rotational", circle.rotational},
                  {"conjugacy_residual", circle.residual},
                  {"orbit_samples", circle.orbit_samples},
                  {"action", to_json(act)},
                  {"diophantine", {{"kappa_hat", wit.kappa_hat},
                                   {"tau", wit.tau},
                                   {"k_max", wit.k_max},
                                   {"argmin_k", wit.argmin_k},
                                   {"argmin_kn", wit.argmin_kn}}}});
  return 0;
}

int cmd_radon(const Run& run) {
  allow_keys(run.cfg, {"domain", "K", "xi_values", "h_values", "modes", "period", "center"}, "radon config");
  const auto dom = parse_domain(get<json>(run.cfg, "domain"));
  const auto& curve = *dom.curve;
  const auto K = parse_boundary_function(curve, get<json>(run.cfg, "K"));
  if (run.cfg.contains("h_values")) {
    require(dom.table.has_value(), ErrorCode::ConfigError, "h_values need a liouville domain");
    require(K.of_x != nullptr, ErrorCode::ConfigError, "h_values need K in the x variable");
    json rows = json::array();
    if (run.format == "csv") *run.out << "h,R_plus,R_minus,leray_mass\n";
    for (double h : run.cfg.at("h_values").get<std::vector<double>>()) {
      const auto r = liouville_radon(*dom.table, K.of_x, h);
      if (run.format == "csv") {
        *run.out << fmt::format("{},{},{},{}\n", num(h), num(r.R_plus), num(r.R_minus), num(r.leray_mass));
      } else {
        rows.push_back({{"h", h}, {"R_plus", r.R_plus}, {"R_minus", r.R_minus}, {"leray_mass", r.leray_mass}});
      }
    }
    if (run.format == "json") emit_json(run, rows);
    return 0;
  }
  const double L = curve.total_length();
  const auto opt = circle_options(run, run.cfg, L);
  QuadratureOptions qopt;
  if (run.nodes > 0) qopt.initial_nodes = run.nodes;
  if (run.tol > 0.0) qopt.tol = run.tol;
  json rows = json::array();
  if (run.format == "csv") write_invariant_csv_header(*run.out);
  for (double xi : get<std::vector<double>>(run.cfg, "xi_values")) {
    const auto circle = circle_conjugacy(curve, {0.0, xi}, get_or(run.cfg, "modes", 64), opt);
    const auto v = torus_invariant({circle}, K, qopt);
    const double omega = circle.advance();
    if (run.format == "csv") {
      write_invariant_csv_row(*run.out, omega, v);
    } else {
      rows.push_back({{"xi", xi}, {"omega", omega}, {"value", v.value}, {"nodes", v.nodes}, {"est_error", v.est_error}});
    }
  }
  if (run.format == "json") emit_json(run, rows);
  return 0;
}

int cmd_potential(const Run& run) {
  allow_keys(run.cfg, {"domain", "s", "xi", "V", "modes", "period", "center", "exact_disk"}, "potential config");
  const auto curve = curve_of(run.cfg);
  const double L = curve.total_length();
  const PhasePoint seed{get<double>(run.cfg, "s") * L, get<double>(run.cfg, "xi")};
  const auto circle = get_or(run.cfg, "exact_disk", false)
                          ? exact_disk_circle(curve, seed.xi, seed.s)
                          : circle_conjugacy(curve, seed, get_or(run.cfg, "modes", 64), circle_options(run, run.cfg, L));
  const auto r = flowout_integral(curve, circle, parse_potential(get<json>(run.cfg, "V")),
                                  run.nodes > 0 ? run.nodes : 1024);
  if (run.format == "json") {
    emit_json(run, {{"value", r.value}, {"volume", r.volume}, {"nodes", r.nodes}});
  } else {
    *run.out << "value,volume,nodes\n" << fmt::format("{},{},{}\n", num(r.value), num(r.volume), r.nodes);
  }
  return 0;
}

int cmd_homological(const Run& run) {
  allow_keys(run.cfg, {"omega", "coefficients", "tau", "kappa", "s"}, "homological config");
  const auto omega = get<std::vector<double>>(run.cfg, "omega");
  const double tau = get_or(run.cfg, "tau", 1.0);
  const double s = get_or(run.cfg, "s", 2.0);
  std::ifstream in(get<std::string>(run.cfg, "coefficients"));
  require(in.good(), ErrorCode::ConfigError, "cannot open coefficient file");
  const auto f = read_coefficients(in, static_cast<int>(omega.size()));
  const int kmax = std::max(1, f.max_order());
  double kappa = 0.0;
  json witness;
  if (run.cfg.contains("kappa")) {
    kappa = run.cfg.at("kappa").get<double>();
  } else {
    const auto w = diophantine_kappa(omega, tau, kmax);
    kappa = w.kappa_hat;
    witness = {{"kappa_hat", w.kappa_hat}, {"argmin_k", w.argmin_k}, {"argmin_kn", w.argmin_kn}};
  }
  const auto u = solve_homological(f, omega, kappa, tau);
  if (run.format == "csv") {
    write_coefficients(*run.out, u);
    return 0;
  }
  const double lhs = wiener_norm(u, s - tau), rhs = wiener_norm(f, s) / (4.0 * kappa);
  const auto back = apply_Lomega(u, omega);
  emit_json(run, {{"kappa", kappa},
                  {"witness", witness},
                  {"k_max", kmax},
                  {"norm_u_s_minus_tau", lhs},
                  {"bound", rhs},
                  {"bound_holds", lhs <= rhs},
                  {"roundtrip_error", wiener_norm(back - f, 0.0)}});
  return 0;
}

int cmd_quasimode(const Run& run) {
  allow_keys(run.cfg, {"theta", "jet_order", "d_n", "k_min", "k_max", "M", "maslov"}, "quasimode config");
  auto data = disk_birkhoff_data(get<double>(run.cfg, "theta"), get_or(run.cfg, "jet_order", 3));
  const auto maslov = get_or(run.cfg, "maslov", std::vector<int>{kDiskMaslov.first, kDiskMaslov.second});
  require(maslov.size() == 2, ErrorCode::ConfigError, "maslov is [theta0, theta]");
  data.maslov_theta0 = maslov[0];
  data.maslov_theta = maslov[1];
  const int M = get_or(run.cfg, "M", 2);
  const auto found = find_indices(data, get<double>(run.cfg, "d_n"), get<long>(run.cfg, "k_min"),
                                  get<long>(run.cfg, "k_max"));
  json rows = json::array();
  if (run.format == "csv") write_quasi_csv_header(*run.out);
  for (const auto& q : found.indices) {
    const auto qe = solve_recursion(data, q, M);
    if (run.format == "csv") {
      write_quasi_csv_row(*run.out, qe);
    } else {
      const auto [mu, mu2] = evaluate_mu(qe);
      rows.push_back({{"k", q.k}, {"k_n", q.kn}, {"mu0", q.mu0}, {"c", qe.c}, {"b", qe.b}, {"mu", mu},
                      {"mu_squared", mu2}});
    }
  }
  if (run.format == "json") {
    emit_json(run, {{"D", data.D()}, {"min_mu0_over_q", found.min_mu0_over_q}, {"rows", rows}});
  }
  return 0;
}

json to_json(const H1Report& r) {
  json j = {{"pass", r.pass},
            {"min_gap_margin", r.min_gap_margin},
            {"disjoint_increasing", r.disjoint_increasing},
            {"max_length", r.max_length},
            {"tail_medians", r.tail_medians},
            {"tail_decreasing", r.tail_decreasing},
            {"s_in_guaranteed_range", r.s_in_guaranteed_range}};
  j["first_gap_violation"] = r.first_gap_violation ? json(*r.first_gap_violation) : json(nullptr);
  return j;
}

int cmd_cluster(const Run& run) {
  allow_keys(run.cfg, {"spectrum", "n", "c", "d", "alpha", "s", "h2_spectra", "h2_cutoff", "trap"}, "cluster config");
  const int n = get_or(run.cfg, "n", 2);
  const auto spec = read_spectrum_file(get<std::string>(run.cfg, "spectrum"), n);
  const auto set = build_clusters(spec, get_or(run.cfg, "c", 1.0), get<double>(run.cfg, "d"),
                                  get<double>(run.cfg, "alpha"));
  if (run.format == "csv") {
    write_cluster_csv(*run.out, set);
    return 0;
  }
  const int s = get_or(run.cfg, "s", 0);
  json report = {{"intervals", set.intervals.size()}, {"H1", to_json(verify_H1(set, s))}};
  if (run.cfg.contains("h2_spectra")) {
    std::vector<Spectrum> family;
    for (const auto& p : run.cfg.at("h2_spectra").get<std::vector<std::string>>()) {
      family.push_back(read_spectrum_file(p, n));
    }
    const auto h2 = verify_H2(family, set, get_or(run.cfg, "h2_cutoff", set.alpha + 1.0));
    report["H2"] = {{"pass", h2.pass}, {"checked", h2.checked}};
    if (h2.first_violation) {
      report["H2"]["first_violation"] = {{"t", h2.first_violation->t}, {"lambda", h2.first_violation->lambda}};
    }
  }
  if (run.cfg.contains("trap")) {
    const auto& tc = run.cfg.at("trap");
    allow_keys(tc, {"t", "paths", "M", "lipschitz"}, "trap config");
    std::vector<TrapPath> paths;
    for (const auto& p : get<json>(tc, "paths")) {
      allow_keys(p, {"mu0", "mu"}, "trap path");
      paths.push_back({get<double>(p, "mu0"), get<std::vector<double>>(p, "mu")});
    }
    TrapOptions topt;
    topt.lipschitz = get_or(tc, "lipschitz", 0.0);
    const auto tr = trap_constancy(get<std::vector<double>>(tc, "t"), paths, set, s, get<int>(tc, "M"), topt);
    json rows = json::array();
    for (const auto& r : tr.rows) {
      rows.push_back({{"mu0", r.mu0}, {"interval", r.interval}, {"epsilon", r.epsilon}, {"drift", r.drift},
                      {"bound_ok", r.bound_ok}});
    }
    report["trap"] = {{"beta", tr.beta}, {"C", tr.C}, {"epsilon_decreasing", tr.epsilon_decreasing},
                      {"consistent", tr.consistent}, {"rows", rows}};
    report["trap"]["empirical_q0"] = tr.empirical_q0 ? json(*tr.empirical_q0) : json(nullptr);
  }
  emit_json(run, report);
  return 0;
}

int cmd_rigidity(const Run& run) {
  allow_keys(run.cfg, {"domain", "h_grid", "J", "reg", "K", "rotation_grid", "bounces"}, "rigidity config");
  const auto table = table_of(run.cfg);
  const auto h = grid_of(get<json>(run.cfg, "h_grid"));
  const int J = get_or(run.cfg, "J", static_cast<int>(h.size()));
  const auto m = radon_matrix(table, h, J);
  if (run.format == "csv") {
    write_matrix_csv(*run.out, m);
    return 0;
  }
  json report = {{"singular_values", std::vector<double>(m.singular_values.begin(), m.singular_values.end())},
                 {"sigma_min", m.singular_values[m.singular_values.size() - 1]}};
  if (run.cfg.contains("K")) {
    const auto curve = table.boundary_curve();
    const auto K = parse_boundary_function(curve, run.cfg.at("K"));
    require(K.of_x != nullptr, ErrorCode::ConfigError, "K must use the x variable");
    const auto data = radon_profile(table, h, K.of_x);
    report["reconstruction"] = to_json(invert_radon(m, data, get_or(run.cfg, "reg", 1e-10)));
  }
  if (run.cfg.contains("rotation_grid")) {
    const auto prof = rotation_profile(table, grid_of(run.cfg.at("rotation_grid")), get_or(run.cfg, "bounces", 4000));
    json pts = json::array();
    for (const auto& [hh, w] : prof.points) pts.push_back({hh, w});
    report["rotation_profile"] = {{"points", pts}, {"strictly_increasing", prof.strictly_increasing}};
  }
  emit_json(run, report);
  return 0;
}

int cmd_validate(const Run& run) {
  allow_keys(run.cfg, {"domain", "k_check"}, "validate-liouville config");
  const auto rep = liouville_validate(table_of(run.cfg), get_or(run.cfg, "k_check", 4));
  json conds = json::array();
  for (const auto& c : rep.conditions) {
    json j = {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
    if (c.first_violated_order) j["first_violated_order"] = *c.first_violated_order;
    conds.push_back(j);
  }
  if (run.format == "csv") {
    *run.out << "condition,pass,detail\n";
    for (const auto& c : rep.conditions) *run.out << fmt::format("{},{},\"{}\"\n", c.name, c.pass ? 1 : 0, c.detail);
  } else {
    emit_json(run, {{"classical_type", rep.classical_type}, {"conditions", conds}});
  }
  return 0;
}

int fail(ErrorCode code, const std::string& message, std::optional<long> index = std::nullopt) {
  json rec = {{"error", std::string(to_string(code))}, {"message", message}};
  if (index) rec["index"] = *index;
  std::cerr << rec.dump() << '\n';
  return is_numerical(code) ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Billiard spectral-invariant toolkit"};
  app.require_subcommand(1);
  std::string config, out_path, format;
  int nodes = 0;
  double tol = 0.0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"map", "billiard orbit"},
      {"circle", "invariant circle, action data and Diophantine witness"},
      {"radon", "Radon invariants over a family of circles"},
      {"potential", "flow-out integral of a potential"},
      {"homological", "solve L_omega u = f with the bound report"},
      {"quasimode", "quantum indices and quasi-eigenvalue series"},
      {"cluster", "cluster intervals, (H1)/(H2) checks and trapping"},
      {"rigidity", "Radon matrix, inversion and rotation profile"},
      {"validate-liouville", "classical-type checks for a Liouville table"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON config file, or an inline JSON object")->required();
    sub->add_option("--out", out_path, "output path (stdout when omitted)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--nodes", nodes, "quadrature / sampling nodes")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "tolerance")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    Run run;
    try {
      if (!config.empty() && config.front() == '{') {
        run.cfg = json::parse(config);
      } else {
        std::ifstream in(config);
        require(in.good(), ErrorCode::ConfigError, "cannot open config " + config);
        run.cfg = json::parse(in);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    const bool report_cmd = cmd == "circle" || cmd == "homological" || cmd == "cluster" || cmd == "rigidity" ||
                            cmd == "validate-liouville";
    run.format = format.empty() ? (report_cmd ? "json" : "csv") : format;
    run.nodes = nodes;
    run.tol = tol;
    std::ostringstream buffer;
    run.out = &buffer;

    int rc = 0;
    try {
      if (cmd == "map") rc = cmd_map(run);
      else if (cmd == "circle") rc = cmd_circle(run);
      else if (cmd == "radon") rc = cmd_radon(run);
      else if (cmd == "potential") rc = cmd_potential(run);
      else if (cmd == "homological") rc = cmd_homological(run);
      else if (cmd == "quasimode") rc = cmd_quasimode(run);
      else if (cmd == "cluster") rc = cmd_cluster(run);
      else if (cmd == "rigidity") rc = cmd_rigidity(run);
      else rc = cmd_validate(run);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("bad config value: ") + e.what());
    }
    // nothing is written unless the command succeeded
    if (out_path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream f(out_path);
      require(f.good(), ErrorCode::ConfigError, "cannot write " + out_path);
      f << buffer.str();
    }
    return rc;
  } catch (const Error& e) {
    return fail(e.code(), e.detail(), e.index());
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
}
