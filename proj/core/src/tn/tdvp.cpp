#include "mqrm/tn/tdvp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mqrm/tn/krylov.hpp"
#include "mqrm/tn/observables.hpp"

namespace mqrm::tn {

namespace {

bool orthonormal_columns(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd g = m.adjoint() * m;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() < 1e-10;
}

// BDCSVD occasionally returns an inaccurate factorization when many singular
// values vanish, which is the normal case for padded bonds. Such results are
// detected and recomputed with the Jacobi SVD.
void thin_svd(const Eigen::MatrixXcd& a, Eigen::VectorXd& s, Eigen::MatrixXcd& u, Eigen::MatrixXcd& v) {
  Eigen::BDCSVD<Eigen::MatrixXcd> bdc(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double resid =
      (bdc.matrixU() * bdc.singularValues().cast<cplx>().asDiagonal() * bdc.matrixV().adjoint() - a).cwiseAbs().maxCoeff();
  if (resid < 1e-10 && orthonormal_columns(bdc.matrixU()) && orthonormal_columns(bdc.matrixV())) {
    s = bdc.singularValues();
    u = bdc.matrixU();
    v = bdc.matrixV();
    return;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> jac(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  s = jac.singularValues();
  u = jac.matrixU();
  v = jac.matrixV();
}

class Engine {
 public:
  Engine(TfdMps& psi, const TfdMpo& mpo, const NumericsConfig& cfg, TdvpReport& report)
      : psi_(psi),
        w_(prepare_local(mpo)),
        cfg_(cfg),
        report_(report),
        n_(psi.size()),
        target_(psi.layout().max_bond_dims(cfg.d_max)) {
    if (!(mpo.layout() == psi.layout())) throw std::invalid_argument("state and MPO layouts differ");
  }

  const std::vector<LocalMpo>& local_mpo() const { return w_; }

  void two_site_step(double dt) {
    prepare(0);
    const double h = 0.5 * dt;
    for (int i = 0; i + 1 < n_; ++i) {
      Eigen::MatrixXcd theta = merge(i);
      evolve_two(i, theta, h);
      Eigen::MatrixXcd u, sv;
      split(i, theta, true, u, sv);
      psi_.tensor(i) = std::move(u);
      psi_.tensor(i + 1) = std::move(sv);
      left_[idx(i + 1)] = update_left(left_[idx(i)], psi_.tensor(i), w(i));
      if (i + 2 < n_) evolve_one(i + 1, -h);
    }
    for (int i = n_ - 2; i >= 0; --i) {
      Eigen::MatrixXcd theta = merge(i);
      evolve_two(i, theta, h);
      Eigen::MatrixXcd us, v;
      split(i, theta, false, us, v);
      psi_.tensor(i) = std::move(us);
      psi_.tensor(i + 1) = std::move(v);
      right_[idx(i + 1)] = update_right(right_[idx(i + 2)], psi_.tensor(i + 1), w(i + 1));
      if (i > 0) evolve_one(i, -h);
    }
    psi_.set_center(0);
  }

  void one_site_step(double dt) {
    prepare(0);
    const double h = 0.5 * dt;
    for (int i = 0; i < n_; ++i) {
      evolve_one(i, h);
      if (i + 1 == n_) break;
      const int d = psi_.dim(i);
      Eigen::MatrixXcd m = to_left_grouped(psi_.tensor(i), d);
      const Eigen::Index k = std::min(m.rows(), m.cols());
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
      Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), k);
      Eigen::MatrixXcd c = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
      psi_.tensor(i) = to_right_grouped(q, d);
      left_[idx(i + 1)] = update_left(left_[idx(i)], psi_.tensor(i), w(i));
      evolve_bond(i + 1, c, -h);
      psi_.tensor(i + 1) = c * psi_.tensor(i + 1);
    }
    for (int i = n_ - 1; i >= 0; --i) {
      evolve_one(i, h);
      if (i == 0) break;
      const Eigen::MatrixXcd th = psi_.tensor(i).adjoint();
      const Eigen::Index k = std::min(th.rows(), th.cols());
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(th);
      Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(th.rows(), k);
      Eigen::MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
      psi_.tensor(i) = q.adjoint();
      right_[idx(i)] = update_right(right_[idx(i + 1)], psi_.tensor(i), w(i));
      Eigen::MatrixXcd c = r.adjoint();
      evolve_bond(i, c, -h);
      const int dp = psi_.dim(i - 1);
      psi_.tensor(i - 1) = to_right_grouped(to_left_grouped(psi_.tensor(i - 1), dp) * c, dp);
    }
    psi_.set_center(0);
  }

  void invalidate() { ready_ = false; }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  const LocalMpo& w(int i) const { return w_[idx(i)]; }

  // Center at c = 0 with right environments for every site.
  void prepare(int c) {
    if (ready_ && psi_.center() == c) return;
    psi_.canonicalize(c);
    left_.assign(idx(n_ + 1), {});
    right_.assign(idx(n_ + 1), {});
    left_[0] = boundary_environment();
    right_[idx(n_)] = boundary_environment();
    for (int i = n_ - 1; i > c; --i) right_[idx(i)] = update_right(right_[idx(i + 1)], psi_.tensor(i), w(i));
    ready_ = true;
  }

  void record(const KrylovStats& ks) {
    report_.krylov_matvecs += ks.matvecs;
    report_.krylov_splits += ks.splits;
    report_.max_krylov_error = std::max(report_.max_krylov_error, ks.max_error);
    if (!ks.converged) report_.krylov_converged = false;
  }

  void evolve_one(int i, double t) {
    const auto& l = left_[idx(i)];
    const auto& r = right_[idx(i + 1)];
    const auto& wi = w(i);
    LinearMap h = [&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { apply_one_site(l, wi, r, in, out); };
    record(expm_krylov(h, psi_.tensor(i), t, cfg_.krylov_dim, cfg_.krylov_tol));
  }

  void evolve_bond(int i, Eigen::MatrixXcd& c, double t) {
    const auto& l = left_[idx(i)];
    const auto& r = right_[idx(i)];
    LinearMap h = [&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { apply_bond(l, r, in, out); };
    record(expm_krylov(h, c, t, cfg_.krylov_dim, cfg_.krylov_tol));
  }

  void evolve_two(int i, Eigen::MatrixXcd& theta, double t) {
    const auto& l = left_[idx(i)];
    const auto& r = right_[idx(i + 2)];
    const auto& w1 = w(i);
    const auto& w2 = w(i + 1);
    LinearMap h = [&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { apply_two_site(l, w1, w2, r, in, out); };
    record(expm_krylov(h, theta, t, cfg_.krylov_dim, cfg_.krylov_tol));
  }

  Eigen::MatrixXcd merge(int i) const {
    return to_left_grouped(psi_.tensor(i), psi_.dim(i)) * psi_.tensor(i + 1);
  }

  // theta = U S V^+ kept at the padded bond dimension. Singular values below
  // svd_cutoff are zeroed but their vectors stay as padding.
  // left_canonical: (U, S V^+); otherwise (U S, V^+).
  void split(int i, const Eigen::MatrixXcd& theta, bool left_canonical, Eigen::MatrixXcd& first,
             Eigen::MatrixXcd& second) {
    Eigen::VectorXd s;
    Eigen::MatrixXcd u_full, v_full;
    thin_svd(theta, s, u_full, v_full);
    const Eigen::Index keep = std::min<Eigen::Index>(s.size(), target_[idx(i)]);
    Eigen::VectorXd sk = s.head(keep);
    for (Eigen::Index k = 0; k < keep; ++k) {
      if (sk(k) <= cfg_.svd_cutoff) sk(k) = 0.0;
    }
    const double total = s.squaredNorm();
    const double kept = sk.squaredNorm();
    report_.discarded_weight += std::max(0.0, total - kept);
    if (kept > 0.0) sk *= std::sqrt(total / kept);
    const Eigen::VectorXcd skc = sk.cast<cplx>();
    const Eigen::MatrixXcd u = u_full.leftCols(keep);
    const Eigen::MatrixXcd vh = v_full.leftCols(keep).adjoint();
    const int d = psi_.dim(i);
    if (left_canonical) {
      first = to_right_grouped(u, d);
      second = skc.asDiagonal() * vh;
    } else {
      first = to_right_grouped(u * skc.asDiagonal(), d);
      second = vh;
    }
  }

  TfdMps& psi_;
  std::vector<LocalMpo> w_;
  const NumericsConfig& cfg_;
  TdvpReport& report_;
  int n_;
  std::vector<int> target_;
  bool ready_ = false;
  std::vector<Environment> left_;
  std::vector<Environment> right_;
};

Snapshot take_snapshot(double t, const TfdMps& psi, const std::vector<LocalMpo>& w, const ModelParams& p,
                       const SqueezeThermal& st, const TdvpOptions& opts) {
  Measurer m(psi, p, st);
  Snapshot s;
  s.time = t;
  s.norm = std::sqrt(m.norm_squared());
  s.sigma_z = m.sigma_z();
  s.p_sur = 0.5 * (s.sigma_z + 1.0);
  s.energy = m.measure({ObservableKind::Energy, -1}, &w);
  if (opts.measure_modes) {
    for (int k = 0; k < p.num_modes(); ++k) {
      s.number_frame.push_back(m.frame_number(k));
      s.number_physical.push_back(m.physical_number(k));
    }
  }
  s.tail = m.max_tail();
  if (opts.keep_states) s.state = psi;
  return s;
}

void validate_times(std::span<const double> times) {
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev) || !std::isfinite(t)) throw std::invalid_argument("sample times must be positive and strictly increasing");
    prev = t;
  }
}

}  // namespace

Trajectory tdvp_evolve(TfdMps state, const TfdMpo& mpo, const NumericsConfig& cfg, std::span<const double> times,
                       const ModelParams& p, const SqueezeThermal& st, const TdvpOptions& opts) {
  cfg.validate();
  validate_times(times);
  Trajectory traj;
  TdvpReport& rep = traj.report;
  Engine engine(state, mpo, cfg, rep);
  const double dt = cfg.resolved_step(p, st);

  state.pad_bonds(cfg.d_max);
  engine.invalidate();
  traj.snapshots.push_back(take_snapshot(0.0, state, engine.local_mpo(), p, st, opts));
  const double e0 = traj.snapshots.front().energy;

  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    const auto n = std::max<long long>(1, static_cast<long long>(std::ceil(span / dt - 1e-9)));
    const double h = span / static_cast<double>(n);
    rep.step = std::max(rep.step, h);
    for (long long k = 0; k < n; ++k) {
      if (rep.warmup_steps_done < cfg.warmup_steps) {
        engine.two_site_step(h);
        ++rep.warmup_steps_done;
      } else {
        engine.one_site_step(h);
      }
      ++rep.steps;
    }
    t = target;
    traj.snapshots.push_back(take_snapshot(t, state, engine.local_mpo(), p, st, opts));
  }

  for (const auto& s : traj.snapshots) {
    rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(1.0 - s.norm * s.norm));
    const double de = std::abs(s.energy - e0);
    rep.max_relative_energy_drift =
        std::max(rep.max_relative_energy_drift, std::abs(e0) > 0.0 ? de / std::abs(e0) : de);
    rep.max_tail = std::max(rep.max_tail, s.tail);
  }
  rep.bond_dims = state.bond_dims();
  rep.truncation_exceeded = rep.discarded_weight > cfg.truncation_budget;
  rep.tail_warning = rep.max_tail > cfg.tail_warning;
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
  };
  if (rep.truncation_exceeded) {
    rep.warnings.push_back("discarded weight " + fmt(rep.discarded_weight) + " exceeds budget " +
                           fmt(cfg.truncation_budget) + "; run not converged");
  }
  if (!rep.krylov_converged) {
    rep.warnings.push_back("Krylov propagator did not reach tolerance (max error " + fmt(rep.max_krylov_error) + ")");
  }
  if (rep.tail_warning) {
    rep.warnings.push_back("top Fock levels hold " + fmt(rep.max_tail) + " > " + fmt(cfg.tail_warning) +
                           "; increase n_max");
  }
  return traj;
}

Trajectory run_tdvp(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg,
                    std::span<const double> times, const TdvpOptions& opts) {
  cfg.validate();
  const ChainLayout layout = make_layout(p, st, cfg);
  const TfdMpo mpo = build_mpo(p, st, layout, cfg);
  return tdvp_evolve(initial_mps(layout), mpo, cfg, times, p, st, opts);
}

int suggest_n_max(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg, double horizon,
                  double tail_target) {
  if (!(horizon > 0.0)) throw std::invalid_argument("pre-run horizon must be > 0");
  NumericsConfig pre = cfg;
  pre.d_max = std::min(cfg.d_max, 6);
  pre.truncation_budget = 1.0;
  TdvpOptions opts;
  opts.measure_modes = false;
  const double times[] = {0.5 * horizon, horizon};
  int n = std::min(4, cfg.n_max);
  for (;;) {
    pre.n_max = n;
    const auto traj = run_tdvp(p, st, pre, times, opts);
    if (traj.report.max_tail < tail_target || n >= cfg.n_max) return n;
    n = std::min(cfg.n_max, 2 * n);
  }
}

}  // namespace mqrm::tn
