#include "mqrm/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mqrm {

std::string_view to_string(SiteKind kind) {
  switch (kind) {
    case SiteKind::Spin: return "spin";
    case SiteKind::PhysicalBoson: return "physical-boson";
    case SiteKind::FictitiousBoson: return "fictitious-boson";
  }
  return "?";
}

std::string_view to_string(OpLabel label) {
  switch (label) {
    case OpLabel::Identity: return "identity";
    case OpLabel::SigmaX: return "sigma_x";
    case OpLabel::SigmaZ: return "sigma_z";
    case OpLabel::SigmaPlus: return "sigma_plus";
    case OpLabel::SigmaMinus: return "sigma_minus";
    case OpLabel::ProjectUp: return "project_up";
    case OpLabel::Annihilate: return "annihilate";
    case OpLabel::Create: return "create";
    case OpLabel::Number: return "number";
  }
  return "?";
}

namespace ops {

Eigen::MatrixXcd spin(OpLabel label) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  switch (label) {
    case OpLabel::Identity: m.setIdentity(); break;
    case OpLabel::SigmaX: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case OpLabel::SigmaZ: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    case OpLabel::SigmaPlus: m(0, 1) = 1.0; break;
    case OpLabel::SigmaMinus: m(1, 0) = 1.0; break;
    case OpLabel::ProjectUp: m(0, 0) = 1.0; break;
    default:
      throw std::invalid_argument("operator '" + std::string(to_string(label)) + "' does not act on a spin");
  }
  return m;
}

Eigen::MatrixXcd boson(OpLabel label, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const int d = n_max + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  switch (label) {
    case OpLabel::Identity: m.setIdentity(); break;
    case OpLabel::Annihilate:
      for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
      break;
    case OpLabel::Create:
      for (int n = 0; n + 1 < d; ++n) m(n + 1, n) = std::sqrt(n + 1.0);
      break;
    case OpLabel::Number:
      for (int n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
      break;
    default:
      throw std::invalid_argument("operator '" + std::string(to_string(label)) + "' does not act on a boson");
  }
  return m;
}

LocalOperator make(SiteKind kind, OpLabel label, int n_max) {
  if (kind == SiteKind::Spin) return {kind, label, spin(label)};
  return {kind, label, boson(label, n_max)};
}

}  // namespace ops
}  // namespace mqrm
