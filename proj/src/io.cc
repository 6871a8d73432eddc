#include "torus/io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmt/format.h"
#include "json.hpp"
#include "torus/errors.h"

namespace torus {

namespace {

using nlohmann::json;

json SeriesJson(const PeriodicSeries& s) {
  json j;
  j["half_a0"] = s.half_a0();
  j["cos"] = std::vector<double>(s.cos_coeffs().begin(), s.cos_coeffs().end());
  j["sin"] = std::vector<double>(s.sin_coeffs().begin(), s.sin_coeffs().end());
  return j;
}

PeriodicSeries SeriesOf(const json& j) {
  return PeriodicSeries(j.at("half_a0").get<double>(),
                        j.at("cos").get<std::vector<double>>(),
                        j.at("sin").get<std::vector<double>>());
}

template <typename F>
auto Guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw TorusError(ErrorCode::kIo, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string SeriesToJson(const PeriodicSeries& series) {
  return SeriesJson(series).dump();
}

PeriodicSeries SeriesFromJson(const std::string& text) {
  return Guarded([&] { return SeriesOf(json::parse(text)); });
}

std::string SolutionToJson(const EquilibriumSolution& sol) {
  json j;
  j["schema_version"] = kSolutionSchemaVersion;
  j["config"] = {{"r0", sol.config.r0},
                 {"omega0", sol.config.omega0},
                 {"mu_g", sol.config.mu_g},
                 {"epsilon", sol.config.epsilon}};
  const SolverConfig& sc = sol.solver;
  j["solver"] = {{"modes", sc.modes},
                 {"tol", sc.tol},
                 {"max_iter", sc.max_iter},
                 {"ball_radius", sc.ball_radius},
                 {"enforce_ball", sc.enforce_ball},
                 {"theta_nodes", sc.theta_nodes},
                 {"alpha_nodes", sc.quad.alpha_nodes},
                 {"eta_nodes", sc.quad.eta_nodes},
                 {"refine_depth", sc.quad.refine_depth},
                 {"alpha_panels", sc.quad.alpha_panels}};
  j["rho"] = SeriesJson(sol.state.rho);
  j["w"] = SeriesJson(sol.state.w);
  j["s"] = SeriesJson(sol.s);
  j["Omega"] = SeriesJson(sol.omega_rate);
  j["J_sq"] = sol.j_sq;
  j["C_flux"] = sol.c_flux;
  j["c_eps"] = sol.c_eps;
  j["f_mean"] = sol.f_mean;
  j["h_mean"] = sol.h_mean;
  const SolverDiagnostics& d = sol.diagnostics;
  j["diagnostics"] = {{"iterations", d.iterations},
                      {"converged", d.converged},
                      {"final_step", d.final_step},
                      {"ball_radius", d.ball_radius},
                      {"max_iterate_norm", d.max_iterate_norm},
                      {"inside_ball", d.inside_ball},
                      {"contraction_ratio", d.contraction_ratio},
                      {"steps", d.steps},
                      {"norms", d.norms},
                      {"c_history", d.c_history},
                      {"residual_max", d.residual_max},
                      {"quadrature_error", d.quadrature_error},
                      {"theta_nodes", d.theta_nodes}};
  return j.dump(2) + "\n";
}

EquilibriumSolution SolutionFromJson(const std::string& text) {
  return Guarded([&] {
    const json j = json::parse(text);
    const int version = j.at("schema_version").get<int>();
    if (version != kSolutionSchemaVersion) {
      throw TorusError(ErrorCode::kIo, fmt::format("unsupported schema_version {}",
                                                   version));
    }
    EquilibriumSolution sol;
    const json& c = j.at("config");
    sol.config.r0 = c.at("r0").get<double>();
    sol.config.omega0 = c.at("omega0").get<double>();
    sol.config.mu_g = c.at("mu_g").get<double>();
    sol.config.epsilon = c.at("epsilon").get<double>();
    const json& s = j.at("solver");
    sol.solver.modes = s.at("modes").get<int>();
    sol.solver.tol = s.at("tol").get<double>();
    sol.solver.max_iter = s.at("max_iter").get<int>();
    sol.solver.ball_radius = s.at("ball_radius").get<double>();
    sol.solver.enforce_ball = s.value("enforce_ball", false);
    sol.solver.theta_nodes = s.at("theta_nodes").get<int>();
    sol.solver.quad.alpha_nodes = s.at("alpha_nodes").get<int>();
    sol.solver.quad.eta_nodes = s.at("eta_nodes").get<int>();
    sol.solver.quad.refine_depth = s.at("refine_depth").get<int>();
    sol.solver.quad.alpha_panels = s.at("alpha_panels").get<int>();
    sol.state.rho = SeriesOf(j.at("rho"));
    sol.state.w = SeriesOf(j.at("w"));
    if (sol.state.rho.truncation() != sol.state.w.truncation()) {
      throw TorusError(ErrorCode::kIo, "rho and w truncations differ");
    }
    sol.s = SeriesOf(j.at("s"));
    sol.omega_rate = SeriesOf(j.at("Omega"));
    sol.j_sq = j.at("J_sq").get<double>();
    sol.c_flux = j.at("C_flux").get<double>();
    sol.c_eps = j.at("c_eps").get<double>();
    sol.f_mean = j.at("f_mean").get<double>();
    sol.h_mean = j.at("h_mean").get<double>();
    if (j.contains("diagnostics")) {
      const json& d = j.at("diagnostics");
      SolverDiagnostics& diag = sol.diagnostics;
      diag.iterations = d.value("iterations", 0);
      diag.converged = d.value("converged", false);
      diag.final_step = d.value("final_step", 0.0);
      diag.ball_radius = d.value("ball_radius", 0.0);
      diag.max_iterate_norm = d.value("max_iterate_norm", 0.0);
      diag.inside_ball = d.value("inside_ball", true);
      diag.contraction_ratio = d.value("contraction_ratio", 0.0);
      diag.steps = d.value("steps", std::vector<double>{});
      diag.norms = d.value("norms", std::vector<double>{});
      diag.c_history = d.value("c_history", std::vector<double>{});
      diag.residual_max = d.value("residual_max", 0.0);
      diag.quadrature_error = d.value("quadrature_error", -1.0);
      diag.theta_nodes = d.value("theta_nodes", 0);
    }
    return sol;
  });
}

std::string ProfilesCsv(const EquilibriumSolution& sol, int points) {
  const TorusConfig& cfg = sol.config;
  if (points <= 0) points = 4 * std::max(1, sol.state.truncation());
  const std::vector<double> grid = ThetaGrid(points);
  std::string out = fmt::format("# torus-profiles v{}\n", kProfilesCsvVersion);
  out += "theta,r,omega,s,Omega\n";
  for (double t : grid) {
    const double r = cfg.r0 * (1.0 + cfg.epsilon * sol.state.rho(t));
    const double om = cfg.omega0 * (1.0 + cfg.epsilon * sol.state.w(t));
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", t, r, om,
                       sol.s(t), sol.omega_rate(t));
  }
  return out;
}

std::string ReportToJson(const ValidationReport& report) {
  json j;
  j["schema_version"] = kSolutionSchemaVersion;
  json checks = json::array();
  for (const ValidationCheck& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  j["checks"] = checks;
  j["metadata"] = report.metadata;
  j["all_pass"] = report.AllPass();
  return j.dump(2) + "\n";
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw TorusError(ErrorCode::kIo, "cannot open " + tmp);
    f << content;
    f.flush();
    if (!f) throw TorusError(ErrorCode::kIo, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw TorusError(ErrorCode::kIo, "cannot rename to " + path + ": " + ec.message());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw TorusError(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace torus
