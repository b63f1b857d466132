#pragma once

// Expectation values on an MPS. Mode observables come in two frames:
//   frame:    operators of the transformed, doubled Hamiltonian (a_m, b_m);
//   physical: the original mode operator, recovered through
//             a_orig = cosh r (c a + s b^+) + e^{i phi} sinh r (c a^+ + s b),
//             c = cosh theta_m, s = sinh theta_m.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqrm/model.hpp"
#include "mqrm/tn/environment.hpp"
#include "mqrm/tn/mps.hpp"

namespace mqrm::tn {

enum class ObservableKind {
  SigmaZ,
  SigmaX,
  Survival,          // (<sz> + 1) / 2
  Number,            // a_m^+ a_m, frame
  FictitiousNumber,  // b_m^+ b_m, frame
  PhysicalNumber,    // original-frame occupation of mode m
  ModeEnergy,        // omega_m a_m^+ a_m, frame
  PhysicalModeEnergy,
  Energy,            // <H>
  Norm,
};

/// Parsed observable tag. Grammar: sz | sx | p_sur | norm | energy |
/// n(m) | nb(m) | n_phys(m) | e(m) | e_phys(m).
struct ObservableSpec {
  ObservableKind kind;
  int mode = -1;

  /// Throws std::invalid_argument for unknown tags or bad mode indices.
  static ObservableSpec parse(std::string_view tag);
  std::string to_string() const;
};

/// Cached identity environments of one state for repeated measurements.
class Measurer {
 public:
  Measurer(const TfdMps& state, const ModelParams& p, const SqueezeThermal& st);

  double norm_squared() const { return norm2_; }

  /// <O> / <psi|psi> for a single-site operator.
  cplx local(int site, const Eigen::MatrixXcd& op) const;
  /// <O_i O_j> / <psi|psi>, i != j.
  cplx correlator(int i, const Eigen::MatrixXcd& op_i, int j, const Eigen::MatrixXcd& op_j) const;
  /// Diagonal of the reduced density matrix of a site.
  Eigen::VectorXd populations(int site) const;

  double sigma_z() const;
  double survival() const { return 0.5 * (sigma_z() + 1.0); }
  double frame_number(int mode) const;
  double fictitious_number(int mode) const;
  double physical_number(int mode) const;
  /// Occupation of the top two Fock levels, maximized over boson sites.
  double max_tail() const;

  /// Needs the MPO only for ObservableKind::Energy.
  double measure(const ObservableSpec& spec, const std::vector<LocalMpo>* mpo = nullptr) const;

 private:
  const TfdMps& state_;
  ModelParams params_;
  SqueezeThermal st_;
  std::vector<Mode> modes_;
  std::vector<double> theta_;
  std::vector<Eigen::MatrixXcd> left_;   // left_[i]: sites < i
  std::vector<Eigen::MatrixXcd> right_;  // right_[i]: sites >= i
  double norm2_ = 1.0;
};

/// One-shot measurement.
double measure(const TfdMps& state, const ModelParams& p, const SqueezeThermal& st, const ObservableSpec& spec,
               const std::vector<LocalMpo>* mpo = nullptr);

}  // namespace mqrm::tn
