#include "mqrm/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mqrm/analytic.hpp"
#include "mqrm/parallel.hpp"

namespace mqrm::zeno {

namespace {

void check_grid(std::span<const double> x, const char* what) {
  double prev = 0.0;
  for (double v : x) {
    if (!(v > prev) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + " must be positive and strictly increasing");
    }
    prev = v;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Vertex of the parabola through (x0,y0), (x1,y1), (x2,y2).
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double c = (d12 - d01) / (x2 - x0);
  if (c == 0.0) return x1;
  const double b = d01 - c * (x0 + x1);
  return -b / (2.0 * c);
}

double analytic_rate(const ModelParams& p, const SqueezeThermal& st, double tau, bool squeezed) {
  const analytic::RateQuery q(p, st, tau);
  if (st.squeezed()) {
    if (!squeezed) {
      throw std::invalid_argument("analytic engine with r != 0 requires the squeezed-analytic variant");
    }
    return analytic::gamma_th_squeezed(q);
  }
  return analytic::gamma_th(q);
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Analytic:
      return "analytic";
    case Engine::Se:
      return "se";
    case Engine::Tdvp:
      return "tdvp";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  if (name == "analytic") return Engine::Analytic;
  if (name == "se") return Engine::Se;
  if (name == "tdvp") return Engine::Tdvp;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "' (expected analytic, se or tdvp)");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::PureQze:
      return "pure QZE";
    case Regime::PureQaze:
      return "pure QAZE";
    case Regime::Crossover:
      return "crossover";
  }
  return "?";
}

double effective_decay_rate(double p_sur, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(p_sur > 0.0)) throw std::invalid_argument("survival probability must be > 0");
  if (p_sur > 1.0 + 1e-10) throw std::invalid_argument("survival probability exceeds 1");
  return std::max(0.0, -std::log(std::min(p_sur, 1.0)) / tau);
}

double survival_n_measurements(double p_sur_single, int n) {
  if (n < 1) throw std::invalid_argument("number of measurements must be >= 1");
  return std::pow(p_sur_single, n);
}

DecayCurve make_curve(std::vector<double> tau, std::vector<double> p_sur, Engine engine, const ModelParams& params,
                      const SqueezeThermal& st) {
  if (tau.size() != p_sur.size()) throw std::invalid_argument("tau and p_sur differ in length");
  check_grid(tau, "tau grid");
  DecayCurve c{std::move(tau), std::move(p_sur), {}, engine, params, st, {}, {}, {}, 0};
  c.gamma.reserve(c.tau.size());
  for (std::size_t i = 0; i < c.tau.size(); ++i) c.gamma.push_back(effective_decay_rate(c.p_sur[i], c.tau[i]));
  if (!c.tau.empty() && params.g() * c.tau.back() >= 1.0) {
    c.warnings.push_back("g tau reaches " + fmt(params.g() * c.tau.back()) +
                         " >= 1, outside the validity range of the measurement protocol");
  }
  return c;
}

DecayCurve decay_curve(Engine engine, const ModelParams& params, const SqueezeThermal& st,
                       std::span<const double> tau_grid, const DecayOptions& opts) {
  check_grid(tau_grid, "tau grid");
  if (tau_grid.empty()) throw std::invalid_argument("empty tau grid");
  std::vector<double> tau(tau_grid.begin(), tau_grid.end());
  std::vector<double> p(tau.size());
  switch (engine) {
    case Engine::Analytic: {
      for (std::size_t i = 0; i < tau.size(); ++i) {
        p[i] = std::exp(-analytic_rate(params, st, tau[i], opts.squeezed_analytic) * tau[i]);
      }
      auto c = make_curve(std::move(tau), std::move(p), engine, params, st);
      // Recompute gamma directly so the analytic curve equals the formula.
      for (std::size_t i = 0; i < c.tau.size(); ++i) c.gamma[i] = analytic_rate(params, st, c.tau[i], opts.squeezed_analytic);
      return c;
    }
    case Engine::Se: {
      const double dt = opts.se_dt > 0.0 ? opts.se_dt : se::default_step(params);
      const auto traj = se::se_sample(params, st, tau, dt, opts.se_halving_check);
      for (std::size_t i = 0; i < tau.size(); ++i) p[i] = se::survival_from_se(traj.samples[i]);
      auto c = make_curve(std::move(tau), std::move(p), engine, params, st);
      c.se = SeDiagnostics{traj.step, traj.halving_deviation, traj.max_norm_drift, traj.max_energy_drift};
      return c;
    }
    case Engine::Tdvp: {
      tn::NumericsConfig cfg = opts.numerics;
      if (opts.auto_n_max) cfg.n_max = tn::suggest_n_max(params, st, cfg, tau.back());
      tn::TdvpOptions topts;
      topts.measure_modes = false;
      const auto traj = tn::run_tdvp(params, st, cfg, tau, topts);
      for (std::size_t i = 0; i < tau.size(); ++i) p[i] = traj.snapshots[i + 1].p_sur;
      auto c = make_curve(std::move(tau), std::move(p), engine, params, st);
      c.tdvp = traj.report;
      c.n_max_used = cfg.n_max;
      for (const auto& w : traj.report.warnings) c.warnings.push_back(w);
      return c;
    }
  }
  throw std::invalid_argument("unhandled engine");
}

std::vector<double> finite_difference(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("finite_difference: size mismatch");
  if (n < 3) throw std::invalid_argument("finite_difference needs at least 3 points");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    d[i] = (-h1 / (h0 * (h0 + h1))) * y[i - 1] + ((h1 - h0) / (h0 * h1)) * y[i] + (h0 / (h1 * (h0 + h1))) * y[i + 1];
  }
  {
    const double h0 = x[1] - x[0];
    const double h1 = x[2] - x[1];
    d[0] = (-(2.0 * h0 + h1) / (h0 * (h0 + h1))) * y[0] + ((h0 + h1) / (h0 * h1)) * y[1] - (h0 / (h1 * (h0 + h1))) * y[2];
  }
  {
    const double h0 = x[n - 2] - x[n - 3];
    const double h1 = x[n - 1] - x[n - 2];
    d[n - 1] = (h1 / (h0 * (h0 + h1))) * y[n - 3] - ((h0 + h1) / (h0 * h1)) * y[n - 2] +
               ((2.0 * h1 + h0) / (h1 * (h0 + h1))) * y[n - 1];
  }
  return d;
}

CrossoverReport classify_and_crossover(std::span<const double> tau, std::span<const double> gamma) {
  if (tau.size() != gamma.size()) throw std::invalid_argument("tau and gamma differ in length");
  if (tau.size() < 5) throw std::invalid_argument("crossover analysis needs at least 5 grid points");
  check_grid(tau, "tau grid");
  CrossoverReport rep;
  rep.slope = finite_difference(tau, gamma);
  const auto& s = rep.slope;
  const std::size_t n = s.size();
  bool any_pos = false;
  bool any_neg = false;
  for (double v : s) {
    any_pos |= v > 0.0;
    any_neg |= v < 0.0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((s[i] > 0.0 && s[i + 1] < 0.0) || (s[i] < 0.0 && s[i + 1] > 0.0)) {
      const bool maximum = s[i] > 0.0;
      // Centre the three-point fit on the grid point nearest the extremum.
      std::size_t k = maximum ? (gamma[i] >= gamma[i + 1] ? i : i + 1) : (gamma[i] <= gamma[i + 1] ? i : i + 1);
      k = std::clamp<std::size_t>(k, 1, n - 2);
      double tc = parabola_vertex(tau[k - 1], gamma[k - 1], tau[k], gamma[k], tau[k + 1], gamma[k + 1]);
      tc = std::clamp(tc, tau[k - 1], tau[k + 1]);
      rep.sign_changes.push_back(tc);
      if (!rep.tau_c) {
        rep.tau_c = tc;
        rep.qze_to_qaze = maximum;
      }
    }
  }
  if (rep.tau_c) {
    rep.regime = Regime::Crossover;
  } else if (any_neg && !any_pos) {
    rep.regime = Regime::PureQaze;
  } else {
    rep.regime = Regime::PureQze;
  }
  return rep;
}

CrossoverReport classify_and_crossover(const DecayCurve& curve) { return classify_and_crossover(curve.tau, curve.gamma); }

EnergyFlowInput energy_flow_input(const tn::Trajectory& traj) {
  EnergyFlowInput in;
  for (const auto& s : traj.snapshots) {
    if (s.number_physical.empty()) throw std::invalid_argument("trajectory was recorded without mode numbers");
    in.time.push_back(s.time);
    in.sigma_z.push_back(s.sigma_z);
    in.mode_number.push_back(s.number_physical);
  }
  return in;
}

EnergyFlowInput energy_flow_input(const se::SeTrajectory& traj, const ModelParams& params, const SqueezeThermal& st) {
  EnergyFlowInput in;
  in.time.push_back(0.0);
  in.sigma_z.push_back(1.0);
  in.mode_number.emplace_back(static_cast<std::size_t>(params.num_modes()), 0.0);
  for (const auto& a : traj.samples) {
    in.time.push_back(a.time);
    in.sigma_z.push_back(2.0 * std::norm(a.chi) - a.norm());
    in.mode_number.push_back(se::se_mode_excitation(params, st, a));
  }
  return in;
}

EnergyFlow energy_flow_analysis(const EnergyFlowInput& in, const ModelParams& params, const EnergyFlowOptions& opts) {
  const std::size_t nt = in.time.size();
  if (nt < 3 || in.sigma_z.size() != nt || in.mode_number.size() != nt) {
    throw std::invalid_argument("energy flow input needs >= 3 consistent samples");
  }
  if (in.time.front() != 0.0) throw std::invalid_argument("energy flow input must start at t = 0");
  check_grid(std::span<const double>(in.time).subspan(1), "time grid");
  const auto modes = build_mode_table(params);
  const std::size_t nm = modes.size();
  const double delta = params.delta();
  const double g = params.g();

  EnergyFlow out;
  out.time = in.time;
  for (double sz : in.sigma_z) out.e_tls.push_back(0.5 * delta * sz);
  out.e_modes.assign(nm, std::vector<double>(nt));
  for (std::size_t m = 0; m < nm; ++m) {
    if (in.mode_number.front().size() != nm) throw std::invalid_argument("mode count mismatch in energy flow input");
    for (std::size_t k = 0; k < nt; ++k) {
      out.e_modes[m][k] = modes[m].omega * (in.mode_number[k][m] - in.mode_number[0][m]);
    }
  }

  if (delta != 0.0) {
    double worst = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double p_sur = 0.5 * (in.sigma_z[k] + 1.0);
      worst = std::max(worst, std::abs(p_sur - (out.e_tls[k] / delta + 0.5)));
    }
    out.identity_residual = worst;
  } else {
    out.identity_residual = std::numeric_limits<double>::quiet_NaN();
  }

  if (g > 0.0 && delta != 0.0) {
    // y = 1/2 - E_TLS / Delta = a1 x + a2 x^2, x = g t.
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    int count = 0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double x = g * in.time[k];
      if (!(x > 0.0) || x > opts.fit_window * (1.0 + 1e-12)) continue;
      const double y = 0.5 - out.e_tls[k] / delta;
      s11 += x * x;
      s12 += x * x * x;
      s22 += x * x * x * x;
      b1 += x * y;
      b2 += x * x * y;
      ++count;
    }
    if (count < 5) throw std::invalid_argument("energy-flow fit window holds fewer than 5 samples");
    const double det = s11 * s22 - s12 * s12;
    out.a1 = (b1 * s22 - b2 * s12) / det;
    out.a2 = (s11 * b2 - s12 * b1) / det;
    out.fit_samples = count;
    out.qaze_enabling = out.a2 < 0.0;
  }

  const double threshold = opts.backflow_threshold * params.omega0() * g * g;
  out.backflow.assign(nm, {});
  for (std::size_t m = 0; m < nm; ++m) {
    const auto& e = out.e_modes[m];
    const auto de = finite_difference(out.time, e);
    double peak = 0.0;
    std::optional<double> open;
    for (std::size_t k = 0; k < nt; ++k) {
      const bool flowing_back = de[k] < -threshold && peak > 0.0;
      if (flowing_back && !open) open = out.time[k];
      if (!flowing_back && open) {
        out.backflow[m].push_back({*open, out.time[k - 1]});
        open.reset();
      }
      peak = std::max(peak, e[k]);
    }
    if (open) out.backflow[m].push_back({*open, out.time.back()});
  }
  return out;
}

bool has_backflow_in(const std::vector<Interval>& intervals, double t0, double t1) {
  return std::any_of(intervals.begin(), intervals.end(),
                     [&](const Interval& iv) { return iv.end >= t0 && iv.begin <= t1; });
}

double wrap_signed(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

std::vector<double> uniform_phi_grid(int n) {
  if (n < 3) throw std::invalid_argument("phi grid needs at least 3 points");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = kTwoPi * k / n;
  return g;
}

AngleScan critical_angle_scan(Engine engine, const ModelParams& params, const SqueezeThermal& st_template, double tau,
                              std::span<const double> phi_grid, const DecayOptions& opts) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  const std::size_t n = phi_grid.size();
  if (n < 3) throw std::invalid_argument("phi grid needs at least 3 points");
  const double h = kTwoPi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(phi_grid[k] - h * static_cast<double>(k)) > 1e-9) {
      throw std::invalid_argument("phi grid must be uniform over [0, 2 pi) starting at 0");
    }
  }
  if (engine == Engine::Se) throw std::invalid_argument("the SE engine cannot treat squeezed states");

  AngleScan scan;
  scan.tau = tau;
  scan.resolution = h;
  scan.phi.assign(phi_grid.begin(), phi_grid.end());
  if (h > kPi / 64.0 + 1e-12) {
    scan.warnings.push_back("phi resolution " + fmt(h) + " is coarser than pi/64; extrema are less certain");
  }
  DecayOptions o = opts;
  o.squeezed_analytic = true;
  const double taus[] = {tau};
  scan.gamma = parallel_map(n, opts.jobs, [&](std::size_t k) {
    const auto c = decay_curve(engine, params, st_template.with_phi(phi_grid[k]), taus, o);
    return c.gamma.front();
  });

  const auto [lo, hi] = std::minmax_element(scan.gamma.begin(), scan.gamma.end());
  const double mean = std::accumulate(scan.gamma.begin(), scan.gamma.end(), 0.0) / static_cast<double>(n);
  const double spread = *hi - *lo;
  scan.relative_depth = mean != 0.0 ? spread / std::abs(mean) : 0.0;
  if (spread <= 1e-12 * std::max(std::abs(mean), 1e-300)) {
    scan.degenerate = true;
    scan.phi_max = scan.phi_min = std::numeric_limits<double>::quiet_NaN();
    scan.shift_max = scan.shift_min = scan.separation = std::numeric_limits<double>::quiet_NaN();
    scan.warnings.push_back("gamma does not depend on phi; extrema undefined");
    return scan;
  }
  auto refine = [&](std::size_t k) {
    const double ym = scan.gamma[(k + n - 1) % n];
    const double y0 = scan.gamma[k];
    const double yp = scan.gamma[(k + 1) % n];
    const double denom = ym - 2.0 * y0 + yp;
    double off = denom != 0.0 ? 0.5 * h * (ym - yp) / denom : 0.0;
    off = std::clamp(off, -h, h);
    double phi = std::fmod(scan.phi[k] + off, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
  };
  scan.phi_max = refine(static_cast<std::size_t>(hi - scan.gamma.begin()));
  scan.phi_min = refine(static_cast<std::size_t>(lo - scan.gamma.begin()));
  scan.shift_max = wrap_signed(scan.phi_max);
  scan.shift_min = wrap_signed(scan.phi_min - kPi);
  scan.separation = std::fmod(scan.phi_min - scan.phi_max + 2.0 * kTwoPi, kTwoPi);
  return scan;
}

}  // namespace mqrm::zeno
