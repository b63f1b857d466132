#include "mqrm/tn/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mqrm::tn {

double NumericsConfig::base_step(const ModelParams& p) const {
  if (dt > 0.0) return dt;
  return p.g() > 0.0 ? 1e-3 / p.g() : 1e-3;
}

double NumericsConfig::resolved_step(const ModelParams& p, const SqueezeThermal& st) const {
  const double omega = squeeze_coeffs(st).A * p.max_frequency() + std::abs(p.delta());
  return std::min(base_step(p), max_phase_step / omega);
}

void NumericsConfig::validate() const {
  if (n_max < 1) throw std::invalid_argument("numerics.n_max must be >= 1");
  if (d_max < 1) throw std::invalid_argument("numerics.d_max must be >= 1");
  if (dt < 0.0 || !std::isfinite(dt)) throw std::invalid_argument("numerics.dt must be >= 0 (0 selects g dt = 1e-3)");
  if (krylov_dim < 2) throw std::invalid_argument("numerics.krylov_dim must be >= 2");
  if (!(krylov_tol > 0.0)) throw std::invalid_argument("numerics.krylov_tol must be > 0");
  if (svd_cutoff < 0.0) throw std::invalid_argument("numerics.svd_cutoff must be >= 0");
  if (!(max_phase_step > 0.0)) throw std::invalid_argument("numerics.max_phase_step must be > 0");
  if (warmup_steps < 0) throw std::invalid_argument("numerics.warmup_steps must be >= 0");
}

ChainLayout make_layout(const ModelParams& p, const SqueezeThermal& st, const NumericsConfig& cfg) {
  if (cfg.drop_fictitious_at_T0 && st.beta().is_infinite()) {
    return ChainLayout::physical_only(p.num_modes(), cfg.n_max);
  }
  return ChainLayout::doubled(p.num_modes(), cfg.n_max);
}

}  // namespace mqrm::tn
