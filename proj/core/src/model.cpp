#include "mqrm/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mqrm {

InverseTemperature InverseTemperature::finite(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("inverse temperature must be positive and finite (use infinite())");
  }
  InverseTemperature b;
  b.infinite_ = false;
  b.beta_ = beta;
  return b;
}

InverseTemperature InverseTemperature::parse(std::string_view text) {
  std::string lower;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) lower.push_back(static_cast<char>(std::tolower(c)));
  }
  if (lower == "inf" || lower == "infinity" || lower == "+inf") return infinite();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(lower.data(), lower.data() + lower.size(), v);
  if (ec != std::errc() || ptr != lower.data() + lower.size()) {
    throw std::invalid_argument("cannot parse inverse temperature '" + std::string(text) + "'");
  }
  return finite(v);
}

double InverseTemperature::value() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : beta_;
}

std::string InverseTemperature::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", beta_);
  return buf;
}

ModelParams::ModelParams(double delta, double omega0, double g, int num_modes)
    : delta_(delta), omega0_(omega0), g_(g), num_modes_(num_modes) {
  if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("omega0 must be > 0");
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("g must be >= 0");
  if (num_modes < 1) throw std::invalid_argument("num_modes must be >= 1");
}

std::vector<Mode> build_mode_table(const ModelParams& p) {
  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(p.num_modes()));
  for (int m = 0; m < p.num_modes(); ++m) {
    const double k = m + 1.0;
    modes.push_back({k * p.omega0(), std::sqrt(k) * p.g()});
  }
  return modes;
}

SqueezeThermal::SqueezeThermal(double r, double phi, InverseTemperature beta)
    : r_(r), phi_(phi), beta_(beta) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("squeezing amplitude r must be >= 0");
  if (!std::isfinite(phi)) throw std::invalid_argument("squeezing angle must be finite");
  phi_ = std::fmod(phi, kTwoPi);
  if (phi_ < 0.0) phi_ += kTwoPi;
  if (phi_ >= kTwoPi) phi_ = 0.0;
}

SqueezeCoefficients squeeze_coeffs(const SqueezeThermal& st) {
  const double ch = std::cosh(st.r());
  const double sh = std::sinh(st.r());
  const cplx phase = std::polar(1.0, st.phi());
  return {ch * ch + sh * sh, phase * ch * sh, ch + phase * sh};
}

std::vector<double> thermal_angles(const SqueezeThermal& st, std::span<const Mode> modes) {
  std::vector<double> theta(modes.size(), 0.0);
  if (st.beta().is_infinite()) return theta;
  const double beta = st.beta().value();
  std::transform(modes.begin(), modes.end(), theta.begin(),
                 [beta](const Mode& m) { return std::atanh(std::exp(-0.5 * beta * m.omega)); });
  return theta;
}

double bose_occupation(const InverseTemperature& beta, double omega) {
  if (beta.is_infinite()) return 0.0;
  return 1.0 / std::expm1(beta.value() * omega);
}

}  // namespace mqrm
