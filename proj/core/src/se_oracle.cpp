#include "mqrm/se_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace mqrm::se {

namespace {

struct Coefficients {
  double delta;
  std::vector<double> omega;
  std::vector<double> gc;  // g_m cosh theta_m
  std::vector<double> gs;  // g_m sinh theta_m
};

Coefficients make_coefficients(const ModelParams& p, const SqueezeThermal& st) {
  if (st.squeezed()) throw std::invalid_argument("single-excitation oracle requires r = 0");
  const auto modes = build_mode_table(p);
  const auto theta = thermal_angles(st, modes);
  Coefficients c{p.delta(), {}, {}, {}};
  for (std::size_t m = 0; m < modes.size(); ++m) {
    c.omega.push_back(modes[m].omega);
    c.gc.push_back(modes[m].coupling * std::cosh(theta[m]));
    c.gs.push_back(modes[m].coupling * std::sinh(theta[m]));
  }
  return c;
}

// Rotating-frame state (chi~, p~_0.., q~_0..).
using State = Eigen::VectorXcd;

class Integrator {
 public:
  explicit Integrator(const Coefficients& c) : c_(c), m_(static_cast<int>(c.omega.size())) {}

  State initial() const {
    State y = State::Zero(1 + 2 * m_);
    y(0) = 1.0;
    return y;
  }

  void rhs(double t, const State& y, State& out) const {
    const cplx mi(0.0, -1.0);
    cplx dchi = 0.0;
    for (int m = 0; m < m_; ++m) {
      const auto k = static_cast<std::size_t>(m);
      const cplx ep = std::polar(1.0, (c_.omega[k] - c_.delta) * t);   // e^{i(w-D)t}
      const cplx eq = std::polar(1.0, -(c_.omega[k] + c_.delta) * t);  // e^{i(-w-D)t}
      dchi += c_.gc[k] * y(1 + m) * std::conj(ep) + c_.gs[k] * y(1 + m_ + m) * std::conj(eq);
      out(1 + m) = mi * c_.gc[k] * y(0) * ep;
      out(1 + m_ + m) = mi * c_.gs[k] * y(0) * eq;
    }
    out(0) = mi * dchi;
  }

  void step(double t, double h, State& y) {
    k1_.resize(y.size());
    k2_.resize(y.size());
    k3_.resize(y.size());
    k4_.resize(y.size());
    rhs(t, y, k1_);
    rhs(t + 0.5 * h, y + 0.5 * h * k1_, k2_);
    rhs(t + 0.5 * h, y + 0.5 * h * k2_, k3_);
    rhs(t + h, y + h * k3_, k4_);
    y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

  SEAmplitudes to_lab(double t, const State& y) const {
    SEAmplitudes a;
    a.time = t;
    a.chi = y(0) * std::polar(1.0, -0.5 * c_.delta * t);
    a.p.resize(static_cast<std::size_t>(m_));
    a.q.resize(static_cast<std::size_t>(m_));
    for (int m = 0; m < m_; ++m) {
      const auto k = static_cast<std::size_t>(m);
      a.p[k] = y(1 + m) * std::polar(1.0, -(c_.omega[k] - 0.5 * c_.delta) * t);
      a.q[k] = y(1 + m_ + m) * std::polar(1.0, (c_.omega[k] + 0.5 * c_.delta) * t);
    }
    return a;
  }

 private:
  const Coefficients& c_;
  int m_;
  State k1_, k2_, k3_, k4_;
};

struct RunResult {
  std::vector<SEAmplitudes> samples;
  double step = 0.0;
  long long steps = 0;
};

RunResult run(const Coefficients& c, std::span<const double> times, double dt) {
  Integrator integ(c);
  State y = integ.initial();
  RunResult r;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    const auto n = static_cast<long long>(std::ceil(span / dt - 1e-9));
    if (n > 0) {
      const double h = span / static_cast<double>(n);
      r.step = std::max(r.step, h);
      for (long long i = 0; i < n; ++i) {
        integ.step(t + static_cast<double>(i) * h, h, y);
      }
      r.steps += n;
    }
    t = target;
    r.samples.push_back(integ.to_lab(t, y));
  }
  return r;
}

double energy(const Coefficients& c, const SEAmplitudes& a) {
  double e = 0.5 * c.delta * std::norm(a.chi);
  for (std::size_t m = 0; m < c.omega.size(); ++m) {
    e += (c.omega[m] - 0.5 * c.delta) * std::norm(a.p[m]);
    e += (-c.omega[m] - 0.5 * c.delta) * std::norm(a.q[m]);
    e += 2.0 * std::real(std::conj(a.chi) * (c.gc[m] * a.p[m] + c.gs[m] * a.q[m]));
  }
  return e;
}

void validate_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw std::invalid_argument("sample times must be positive and strictly increasing");
    prev = t;
  }
}

}  // namespace

double SEAmplitudes::norm() const {
  double n = std::norm(chi);
  for (const auto& x : p) n += std::norm(x);
  for (const auto& x : q) n += std::norm(x);
  return n;
}

double default_step(const ModelParams& p) {
  const double omega = p.max_frequency() + std::abs(p.delta());
  double dt = 0.01 / omega;
  if (p.g() > 0.0) dt = std::min(dt, 1e-3 / p.g());
  return dt;
}

SeTrajectory se_sample(const ModelParams& p, const SqueezeThermal& st, std::span<const double> times,
                       double dt, bool halving_check) {
  if (!(dt > 0.0)) throw std::invalid_argument("integration step must be > 0");
  validate_times(times);
  if (times.empty()) throw std::invalid_argument("no sample times");
  if (times.back() / dt < 10.0) throw std::invalid_argument("step too coarse: fewer than 10 steps to t_final");
  const auto c = make_coefficients(p, st);

  auto coarse = run(c, times, dt);
  SeTrajectory traj;
  traj.step = coarse.step;
  traj.steps = coarse.steps;
  const double e0 = 0.5 * c.delta;
  for (const auto& s : coarse.samples) {
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(1.0 - s.norm()));
    traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(energy(c, s) - e0));
  }
  if (halving_check) {
    const auto fine = run(c, times, 0.5 * dt);
    for (std::size_t i = 0; i < fine.samples.size(); ++i) {
      traj.halving_deviation = std::max(
          traj.halving_deviation,
          std::abs(survival_from_se(fine.samples[i]) - survival_from_se(coarse.samples[i])));
    }
  }
  traj.samples = std::move(coarse.samples);
  return traj;
}

SeTrajectory se_evolve(const ModelParams& p, const SqueezeThermal& st, double t_final, double dt) {
  if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("integration step must be > 0");
  if (t_final / dt < 10.0) throw std::invalid_argument("step too coarse: fewer than 10 steps to t_final");
  const auto n = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(n));
  for (long long i = 1; i <= n; ++i) times.push_back(t_final * static_cast<double>(i) / static_cast<double>(n));
  return se_sample(p, st, times, dt, true);
}

double survival_from_se(const SEAmplitudes& amps) { return std::norm(amps.chi); }

double se_energy(const ModelParams& p, const SqueezeThermal& st, const SEAmplitudes& amps) {
  return energy(make_coefficients(p, st), amps);
}

std::vector<double> se_mode_excitation(const ModelParams& p, const SqueezeThermal& st,
                                       const SEAmplitudes& amps) {
  const auto modes = build_mode_table(p);
  const auto theta = thermal_angles(st, modes);
  std::vector<double> out(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double ch = std::cosh(theta[m]);
    const double sh = std::sinh(theta[m]);
    out[m] = ch * ch * std::norm(amps.p[m]) + sh * sh * std::norm(amps.q[m]);
  }
  return out;
}

}  // namespace mqrm::se
