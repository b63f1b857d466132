#include "mqrm/tn/observables.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "mqrm/operators.hpp"

namespace mqrm::tn {

namespace {

struct TagInfo {
  std::string_view name;
  ObservableKind kind;
  bool has_mode;
};

constexpr TagInfo kTags[] = {
    {"sz", ObservableKind::SigmaZ, false},
    {"sx", ObservableKind::SigmaX, false},
    {"p_sur", ObservableKind::Survival, false},
    {"norm", ObservableKind::Norm, false},
    {"energy", ObservableKind::Energy, false},
    {"n", ObservableKind::Number, true},
    {"nb", ObservableKind::FictitiousNumber, true},
    {"n_phys", ObservableKind::PhysicalNumber, true},
    {"e", ObservableKind::ModeEnergy, true},
    {"e_phys", ObservableKind::PhysicalModeEnergy, true},
};

// Transfer a bra x ket matrix through site tensor t with operator op.
Eigen::MatrixXcd transfer(const Eigen::MatrixXcd& env, const Eigen::MatrixXcd& t, int d, const Eigen::MatrixXcd* op) {
  const Eigen::MatrixXcd p = env * t;
  const Eigen::MatrixXcd tl = to_left_grouped(t, d);
  if (!op) return tl.adjoint() * to_left_grouped(p, d);
  const Eigen::Index dr = t.cols() / d;
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(p.rows(), p.cols());
  for (int s = 0; s < d; ++s) {
    for (int sp = 0; sp < d; ++sp) {
      const cplx w = (*op)(s, sp);
      if (w != cplx(0.0)) q.middleCols(s * dr, dr) += w * p.middleCols(sp * dr, dr);
    }
  }
  return tl.adjoint() * to_left_grouped(q, d);
}

}  // namespace

ObservableSpec ObservableSpec::parse(std::string_view tag) {
  std::string_view name = tag;
  int mode = -1;
  const auto open = tag.find('(');
  if (open != std::string_view::npos) {
    if (tag.back() != ')') throw std::invalid_argument("malformed observable tag: " + std::string(tag));
    name = tag.substr(0, open);
    const auto digits = tag.substr(open + 1, tag.size() - open - 2);
    const auto* end = digits.data() + digits.size();
    const auto res = std::from_chars(digits.data(), end, mode);
    if (res.ec != std::errc() || res.ptr != end || mode < 0) {
      throw std::invalid_argument("bad mode index in observable tag: " + std::string(tag));
    }
  }
  for (const auto& info : kTags) {
    if (info.name != name) continue;
    if (info.has_mode != (open != std::string_view::npos)) {
      throw std::invalid_argument("observable tag " + std::string(tag) +
                                  (info.has_mode ? " needs a mode index" : " takes no mode index"));
    }
    return {info.kind, mode};
  }
  throw std::invalid_argument("unknown observable tag: " + std::string(tag));
}

std::string ObservableSpec::to_string() const {
  for (const auto& info : kTags) {
    if (info.kind == kind) {
      return info.has_mode ? std::string(info.name) + "(" + std::to_string(mode) + ")" : std::string(info.name);
    }
  }
  return "?";
}

Measurer::Measurer(const TfdMps& state, const ModelParams& p, const SqueezeThermal& st)
    : state_(state), params_(p), st_(st), modes_(build_mode_table(p)), theta_(thermal_angles(st, modes_)) {
  if (state.layout().num_modes() != p.num_modes()) throw std::invalid_argument("state and model disagree on M");
  const int n = state.size();
  left_.resize(static_cast<std::size_t>(n + 1));
  right_.resize(static_cast<std::size_t>(n + 1));
  left_[0] = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    left_[static_cast<std::size_t>(i + 1)] = transfer(left_[static_cast<std::size_t>(i)], state.tensor(i), state.dim(i), nullptr);
  }
  right_[static_cast<std::size_t>(n)] = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = n - 1; i >= 0; --i) {
    const auto& t = state.tensor(i);
    const int d = state.dim(i);
    const Eigen::MatrixXcd tl = to_left_grouped(t, d);
    const Eigen::MatrixXcd p = tl * right_[static_cast<std::size_t>(i + 1)];
    right_[static_cast<std::size_t>(i)] = to_right_grouped(p, d) * t.adjoint();
  }
  norm2_ = left_[static_cast<std::size_t>(n)](0, 0).real();
  if (!(norm2_ > 0.0)) throw std::runtime_error("state has zero norm");
}

cplx Measurer::local(int site, const Eigen::MatrixXcd& op) const {
  const auto i = static_cast<std::size_t>(site);
  const Eigen::MatrixXcd e = transfer(left_.at(i), state_.tensor(site), state_.dim(site), &op);
  return (e.transpose().array() * right_[i + 1].array()).sum() / norm2_;
}

cplx Measurer::correlator(int i, const Eigen::MatrixXcd& op_i, int j, const Eigen::MatrixXcd& op_j) const {
  if (i == j) throw std::invalid_argument("correlator needs two distinct sites");
  if (i > j) return correlator(j, op_j, i, op_i);
  Eigen::MatrixXcd e = transfer(left_.at(static_cast<std::size_t>(i)), state_.tensor(i), state_.dim(i), &op_i);
  for (int k = i + 1; k < j; ++k) e = transfer(e, state_.tensor(k), state_.dim(k), nullptr);
  e = transfer(e, state_.tensor(j), state_.dim(j), &op_j);
  return (e.transpose().array() * right_[static_cast<std::size_t>(j + 1)].array()).sum() / norm2_;
}

Eigen::VectorXd Measurer::populations(int site) const {
  const int d = state_.dim(site);
  Eigen::VectorXd out(d);
  for (int s = 0; s < d; ++s) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(d, d);
    proj(s, s) = 1.0;
    out(s) = local(site, proj).real();
  }
  return out;
}

double Measurer::sigma_z() const {
  return local(state_.layout().spin_index(), ops::spin(OpLabel::SigmaZ)).real();
}

double Measurer::frame_number(int mode) const {
  const int site = state_.layout().physical_index(mode);
  return local(site, ops::boson(OpLabel::Number, state_.layout().site(site).n_max())).real();
}

double Measurer::fictitious_number(int mode) const {
  const int site = state_.layout().fictitious_index(mode);
  if (site < 0) return 0.0;
  return local(site, ops::boson(OpLabel::Number, state_.layout().site(site).n_max())).real();
}

double Measurer::physical_number(int mode) const {
  const auto k = static_cast<std::size_t>(mode);
  const double c = std::cosh(theta_.at(k));
  const double s = std::sinh(theta_[k]);
  const double cr = std::cosh(st_.r());
  const cplx sr = std::polar(std::sinh(st_.r()), st_.phi());
  // L = u a + v b^+ + w a^+ + x b
  const cplx u = cr * c;
  const cplx v = cr * s;
  const cplx w = sr * c;
  const cplx x = sr * s;

  const int ia = state_.layout().physical_index(mode);
  const int na = state_.layout().site(ia).n_max();
  const Eigen::MatrixXcd a = ops::boson(OpLabel::Annihilate, na);
  const Eigen::MatrixXcd ad = ops::boson(OpLabel::Create, na);
  const Eigen::MatrixXcd aa_local = std::norm(u) * (ad * a) + std::conj(u) * w * (ad * ad) +
                                    std::conj(w) * u * (a * a) + std::norm(w) * (a * ad);
  double result = local(ia, aa_local).real();

  const int ib = state_.layout().fictitious_index(mode);
  if (ib < 0) {
    // Absent b-sites are in their vacuum: only <b b^+> = 1 survives.
    return result + std::norm(v);
  }
  const int nb = state_.layout().site(ib).n_max();
  const Eigen::MatrixXcd b = ops::boson(OpLabel::Annihilate, nb);
  const Eigen::MatrixXcd bd = ops::boson(OpLabel::Create, nb);
  const Eigen::MatrixXcd bb_local = std::norm(v) * (b * bd) + std::conj(v) * x * (b * b) +
                                    std::conj(x) * v * (bd * bd) + std::norm(x) * (bd * b);
  result += local(ib, bb_local).real();

  // a^+ b^+: u* v + x* w;   a^+ b: u* x + v* w;   plus their conjugates.
  const cplx adbd = correlator(ia, ad, ib, bd);
  const cplx adb = correlator(ia, ad, ib, b);
  const cplx c1 = std::conj(u) * v + std::conj(x) * w;
  const cplx c2 = std::conj(u) * x + std::conj(v) * w;
  result += 2.0 * std::real(c1 * adbd) + 2.0 * std::real(c2 * adb);
  return result;
}

double Measurer::max_tail() const {
  double tail = 0.0;
  for (int i = 0; i < state_.size(); ++i) {
    if (state_.layout().site(i).kind == SiteKind::Spin) continue;
    const Eigen::VectorXd pop = populations(i);
    const Eigen::Index d = pop.size();
    double t = pop(d - 1);
    if (d >= 3) t += pop(d - 2);
    tail = std::max(tail, t);
  }
  return tail;
}

double Measurer::measure(const ObservableSpec& spec, const std::vector<LocalMpo>* mpo) const {
  auto check_mode = [this](int m) {
    if (m < 0 || m >= params_.num_modes()) throw std::invalid_argument("observable mode index out of range");
  };
  switch (spec.kind) {
    case ObservableKind::SigmaZ:
      return sigma_z();
    case ObservableKind::SigmaX:
      return local(state_.layout().spin_index(), ops::spin(OpLabel::SigmaX)).real();
    case ObservableKind::Survival:
      return survival();
    case ObservableKind::Norm:
      return std::sqrt(norm2_);
    case ObservableKind::Number:
      check_mode(spec.mode);
      return frame_number(spec.mode);
    case ObservableKind::FictitiousNumber:
      check_mode(spec.mode);
      return fictitious_number(spec.mode);
    case ObservableKind::PhysicalNumber:
      check_mode(spec.mode);
      return physical_number(spec.mode);
    case ObservableKind::ModeEnergy:
      check_mode(spec.mode);
      return modes_[static_cast<std::size_t>(spec.mode)].omega * frame_number(spec.mode);
    case ObservableKind::PhysicalModeEnergy:
      check_mode(spec.mode);
      return modes_[static_cast<std::size_t>(spec.mode)].omega * physical_number(spec.mode);
    case ObservableKind::Energy: {
      if (!mpo) throw std::invalid_argument("energy measurement needs the MPO");
      std::vector<Eigen::MatrixXcd> tensors;
      for (int i = 0; i < state_.size(); ++i) tensors.push_back(state_.tensor(i));
      return mpo_expectation(*mpo, tensors).real() / norm2_;
    }
  }
  throw std::invalid_argument("unhandled observable");
}

double measure(const TfdMps& state, const ModelParams& p, const SqueezeThermal& st, const ObservableSpec& spec,
               const std::vector<LocalMpo>* mpo) {
  return Measurer(state, p, st).measure(spec, mpo);
}

}  // namespace mqrm::tn
