#pragma once

// Local operators in truncated site bases. Spin basis: index 0 = |up>,
// index 1 = |down>, so sigma_z = diag(1, -1). Boson basis: Fock states
// |0>..|n_max>; the component that would create |n_max+1> is dropped.

#include <string_view>

#include <Eigen/Dense>

namespace mqrm {

enum class SiteKind { Spin, PhysicalBoson, FictitiousBoson };

enum class OpLabel {
  Identity,
  SigmaX,
  SigmaZ,
  SigmaPlus,   // |up><down|
  SigmaMinus,  // |down><up|
  ProjectUp,   // |up><up|
  Annihilate,
  Create,
  Number,
};

std::string_view to_string(SiteKind kind);
std::string_view to_string(OpLabel label);

struct LocalOperator {
  SiteKind site_kind;
  OpLabel label;
  Eigen::MatrixXcd matrix;
};

namespace ops {

Eigen::MatrixXcd spin(OpLabel label);
Eigen::MatrixXcd boson(OpLabel label, int n_max);

/// Dispatches on the site kind; throws std::invalid_argument for a label
/// that does not act on that kind of site.
LocalOperator make(SiteKind kind, OpLabel label, int n_max);

}  // namespace ops
}  // namespace mqrm
