#include "mqrm_cli/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "mqrm/analytic.hpp"
#include "mqrm/hamiltonian.hpp"
#include "mqrm/parallel.hpp"
#include "mqrm/se_oracle.hpp"
#include "mqrm/tn/dense_check.hpp"
#include "mqrm/tn/mpo.hpp"
#include "mqrm/tn/tdvp.hpp"

namespace mqrm::cli {

namespace {

// Reference system shared by the MPO and dense checks.
ModelParams small_model() { return ModelParams::resonant(0.1, 2); }
SqueezeThermal small_state() { return {0.3, kPi / 2.0, InverseTemperature::finite(0.5)}; }

std::vector<double> uniform_times(double t_final, int n) {
  std::vector<double> t;
  for (int k = 1; k <= n; ++k) t.push_back(t_final * k / n);
  return t;
}

double max_abs(const SparseMatrix& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
  }
  return v;
}

CheckResult bound(std::string name, double measured, double tol, std::string detail = {}) {
  const bool ok = std::isfinite(measured) && measured < tol;
  return {std::move(name), measured, tol, ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

struct Check {
  std::string name;
  std::function<std::vector<CheckResult>()> run;
};

std::vector<Check> battery(const RunConfig& cfg) {
  const auto conv = cfg.numerics.convention;
  std::vector<Check> checks;

  checks.push_back({"MPO assembly and Hermiticity", [conv] {
    const auto p = small_model();
    const auto st = small_state();
    const int n_max = 3;
    const auto layout = tn::ChainLayout::doubled(p.num_modes(), n_max);
    tn::NumericsConfig nc;
    nc.n_max = n_max;
    nc.convention = conv;
    nc.check_hermiticity = false;
    const auto mpo = tn::build_mpo(p, st, layout, nc);
    const SparseMatrix h_mpo = mpo.to_sparse();
    const SparseMatrix h_ref = assemble_sparse(hamiltonian_terms(p, st, conv), layout);
    const SparseMatrix diff = h_mpo - h_ref;
    const SparseMatrix adj = SparseMatrix(h_mpo.adjoint());
    const SparseMatrix herm = h_mpo - adj;
    return std::vector<CheckResult>{
        bound("MPO contraction equals term-list assembly", max_abs(diff), 1e-12, "M=2, N_max=3, doubled chain"),
        bound("Hamiltonian Hermiticity max|H - H^dag|", max_abs(herm), 1e-12,
              conv.appendix_c_sign ? "fictitious quadratic sign as printed" : "")};
  }});

  checks.push_back({"T=0 fictitious-mode drop", [conv] {
    const auto p = small_model();
    const SqueezeThermal st(0.3, kPi / 2.0, InverseTemperature::infinite());
    const auto times = uniform_times(1.0 / p.g(), 20);
    const auto eq = tn::drop_equivalence(p, st, 3, times, conv);
    return std::vector<CheckResult>{bound("T=0 fictitious-mode drop (P_sur, n)",
                                          std::max(eq.max_p_sur_deviation, eq.max_number_deviation), 1e-10,
                                          "dense, M=2, N_max=3, g t <= 1")};
  }});

  checks.push_back({"TDVP vs dense", [conv, cfg] {
    const auto p = small_model();
    const auto st = small_state();
    tn::NumericsConfig nc;
    nc.n_max = 3;
    nc.d_max = 16;
    nc.convention = conv;
    nc.check_hermiticity = cfg.numerics.check_hermiticity;
    const auto times = uniform_times(1.0 / p.g(), 20);
    const auto rep = tn::dense_check(p, st, nc, times);
    return std::vector<CheckResult>{
        bound("TDVP vs dense P_sur", rep.max_p_sur_deviation, 1e-6, "M=2, N_max=3, r=0.3, phi=pi/2, beta=0.5"),
        bound("TDVP vs dense mode numbers", rep.max_number_deviation, 1e-6),
        bound("TDVP norm conservation |1 - norm|", rep.tdvp.max_norm_drift, 1e-8),
        bound("TDVP relative energy drift", rep.tdvp.max_relative_energy_drift, 1e-6)};
  }});

  checks.push_back({"TDVP step-halving", [conv] {
    const auto p = ModelParams::resonant(0.2, 3);
    const SqueezeThermal st(0.3, 0.0, InverseTemperature::infinite());
    tn::NumericsConfig nc;
    nc.n_max = 8;
    nc.d_max = 6;
    nc.convention = conv;
    nc.dt = 0.02;
    const auto times = uniform_times(2.0, 10);
    const auto coarse = tn::run_tdvp(p, st, nc, times);
    nc.dt = 0.01;
    const auto fine = tn::run_tdvp(p, st, nc, times);
    double dev = 0.0;
    for (std::size_t i = 0; i < coarse.snapshots.size(); ++i) {
      dev = std::max(dev, std::abs(coarse.snapshots[i].p_sur - fine.snapshots[i].p_sur));
    }
    return std::vector<CheckResult>{bound("TDVP step-halving P_sur", dev, 1e-6, "M=3, g=0.2, r=0.3, D=6, dt 0.02 vs 0.01")};
  }});

  checks.push_back({"SE integrator", [] {
    const auto p = ModelParams::resonant(0.1, 15);
    const auto st = SqueezeThermal::thermal(InverseTemperature::finite(0.5));
    const auto times = uniform_times(1.0, 20);
    const auto traj = se::se_sample(p, st, times, se::default_step(p), true);
    return std::vector<CheckResult>{
        bound("SE step-halving P_sur", traj.halving_deviation, 1e-9, "M=15, g=0.1, beta=0.5, t <= 1"),
        bound("SE norm conservation", traj.max_norm_drift, 1e-9),
        bound("SE energy conservation", traj.max_energy_drift, 1e-9)};
  }});

  checks.push_back({"analytic vs SE", [] {
    const auto p = ModelParams::resonant(0.01, 15);
    const auto st = SqueezeThermal::thermal(InverseTemperature::finite(0.5));
    std::vector<double> taus;
    for (int k = 5; k <= 100; ++k) taus.push_back(0.01 * k);
    const auto traj = se::se_sample(p, st, taus, se::default_step(p), false);
    double worst = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double g_se = -std::log(se::survival_from_se(traj.samples[i])) / taus[i];
      const double g_an = analytic::gamma_th(analytic::RateQuery(p, st, taus[i]));
      worst = std::max(worst, std::abs(g_an - g_se) / g_se);
    }
    return std::vector<CheckResult>{
        bound("analytic vs SE gamma (relative)", worst, 0.02, "M=15, g=0.01, beta=0.5, tau in [0.05, 1]")};
  }});

  checks.push_back({"thermal occupancy", [] {
    const auto p = ModelParams::resonant(0.0, 3);
    const auto beta = InverseTemperature::finite(0.5);
    const SqueezeThermal st = SqueezeThermal::thermal(beta);
    tn::NumericsConfig nc;
    nc.n_max = 20;
    nc.d_max = 4;
    const double times[] = {0.01};
    const auto traj = tn::run_tdvp(p, st, nc, times);
    double worst = 0.0;
    const auto modes = build_mode_table(p);
    for (const auto& s : traj.snapshots) {
      for (std::size_t m = 0; m < modes.size(); ++m) {
        worst = std::max(worst, std::abs(s.number_physical[m] - bose_occupation(beta, modes[m].omega)));
      }
    }
    return std::vector<CheckResult>{bound("thermal occupancy at g=0", worst, 1e-8, "M=3, beta=0.5")};
  }});

  checks.push_back({"Fock tail occupation", [cfg] {
    const auto p = ModelParams::resonant(0.2, 1);
    const auto st = SqueezeThermal::vacuum();
    tn::NumericsConfig nc;
    nc.n_max = std::min(cfg.numerics.n_max, 24);
    nc.d_max = 2 * (nc.n_max + 1);
    nc.tail_warning = cfg.numerics.tail_warning;
    const auto times = uniform_times(1.0 / p.g(), 10);
    const auto traj = tn::run_tdvp(p, st, nc, times);
    CheckResult r{"Fock tail occupation", traj.report.max_tail, nc.tail_warning, CheckStatus::Pass,
                  "M=1, g=0.2, T=0, g t <= 1, N_max=" + std::to_string(nc.n_max)};
    if (traj.report.tail_warning) {
      r.status = CheckStatus::Warn;
      r.detail += "; convergence warning: increase n_max";
    }
    return std::vector<CheckResult>{r};
  }});

  return checks;
}

const char* status_text(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Warn:
      return "WARN";
    case CheckStatus::Fail:
      return "FAIL";
  }
  return "?";
}

}  // namespace

bool ValidateReport::ok() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

ValidateReport run_validate(const RunConfig& cfg, unsigned jobs, std::ostream* progress) {
  const auto checks = battery(cfg);
  auto results = parallel_map(checks.size(), jobs, [&](std::size_t i) {
    try {
      return checks[i].run();
    } catch (const std::exception& e) {
      return std::vector<CheckResult>{{checks[i].name, std::nan(""), 0.0, CheckStatus::Fail,
                                       std::string("error: ") + e.what()}};
    }
  });
  ValidateReport rep;
  for (auto& group : results) {
    for (auto& c : group) {
      if (progress) *progress << status_text(c.status) << "  " << c.name << "\n";
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

std::string format_report(const ValidateReport& report) {
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  std::string out;
  char line[512];
  std::snprintf(line, sizeof(line), "%-6s %-*s %12s %12s  %s\n", "status", static_cast<int>(width), "check", "measured",
                "tolerance", "detail");
  out += line;
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof(line), "%-6s %-*s %12.3e %12.3e  %s\n", status_text(c.status), static_cast<int>(width),
                  c.name.c_str(), c.measured, c.tolerance, c.detail.c_str());
    out += line;
  }
  int failed = 0;
  for (const auto& c : report.checks) failed += c.status == CheckStatus::Fail;
  std::snprintf(line, sizeof(line), "%zu checks, %d failed\n", report.checks.size(), failed);
  out += line;
  return out;
}

}  // namespace mqrm::cli
