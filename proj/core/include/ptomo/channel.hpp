#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ptomo/linalg.hpp"
#include "ptomo/qstate.hpp"

namespace ptomo {

/// Tolerance on eigenvalues and partial-trace residuals when validating
/// Choi matrices and channel parameters.
inline constexpr double kCptpTol = 1e-9;

/// Generalized Pauli channel on C^d: depolarizes each of the u = d+1
/// complementary maximal Abelian subalgebras spanned by the MUB bases with
/// its own factor lambda_i. For d = 2 this is the qubit Pauli channel.
class GenPauliChannel {
 public:
  /// Throws kInvalidChannel if lambda violates the CPTP inequalities and
  /// kDimension if lambda and the MUB disagree in size.
  GenPauliChannel(Mub mub, RVector lambda);

  /// Builds the channel without the CPTP check; used for parameter
  /// directions (e.g. lambda = e_k) that only enter linear constructions.
  static GenPauliChannel unchecked(Mub mub, RVector lambda);

  int dim() const noexcept { return mub_.dim; }
  const Mub& mub() const noexcept { return mub_; }
  const RVector& lambda() const noexcept { return lambda_; }

  /// Linear extension of the channel to arbitrary d x d matrices.
  CMatrix apply(const CMatrix& a) const;

 private:
  GenPauliChannel(Mub mub, RVector lambda, bool check);
  Mub mub_;
  RVector lambda_;
};

/// Qubit Pauli channel: lambda plus three channel directions stored as a
/// d = 2 MUB.
class PauliChannel {
 public:
  PauliChannel(const Vec3& lambda, Mub directions);
  /// Channel whose directions are the Pauli eigenbases sigma_1..sigma_3.
  static PauliChannel standard(const Vec3& lambda);
  /// Channel with orthonormal Bloch axes as directions.
  static PauliChannel from_axes(const Vec3& lambda, const std::array<Vec3, 3>& axes);

  const Vec3& lambda() const noexcept { return lambda_; }
  const Mub& directions() const noexcept { return gen_.mub(); }
  std::array<Vec3, 3> axes() const { return bloch_axes(gen_.mub()); }
  const GenPauliChannel& as_generalized() const noexcept { return gen_; }

  CMatrix apply(const CMatrix& a) const { return gen_.apply(a); }
  /// Action on Bloch coordinates: b -> sum_i lambda_i (v_i . b) v_i.
  Vec3 apply_bloch(const Vec3& b) const;

 private:
  Vec3 lambda_;
  GenPauliChannel gen_;
};

DensityMatrix pauli_apply(const PauliChannel& ch, const DensityMatrix& rho);
DensityMatrix gen_pauli_apply(const GenPauliChannel& ch, const DensityMatrix& rho);

/// Pinching of a in basis i: sum_k <phi_ik|a|phi_ik> |phi_ik><phi_ik|.
CMatrix cond_expectation(const Mub& mub, int i, const CMatrix& a);

/// Choi matrix sum_ij |f_i><f_j| (x) E(|f_i><f_j|) in the computational
/// basis; block (i, j) is E(|i><j|).
struct ChoiMatrix {
  int dim = 0;
  CMatrix entries;
};

using LinearMap = std::function<CMatrix(const CMatrix&)>;

ChoiMatrix choi(const LinearMap& apply_fn, int d);
ChoiMatrix choi(const PauliChannel& ch);
ChoiMatrix choi(const GenPauliChannel& ch);

struct CptpVerdict {
  bool valid = true;
  std::vector<std::string> violated;
};

/// 1 + lambda_3 >= |lambda_1 + lambda_2|, 1 - lambda_3 >= |lambda_1 - lambda_2| and |lambda_i| <= 1.
CptpVerdict cptp_check_qubit(const Vec3& lambda);

/// 1 + d lambda_i >= sum_j lambda_j >= -1/(d-1) and |lambda_i| <= 1.
CptpVerdict cptp_check_gen(const RVector& lambda, int d);

/// X(lambda) = H0 + sum_k lambda_k H_k.
struct AffineBasis {
  int dim = 0;
  CMatrix h0;
  std::vector<CMatrix> hk;
  std::vector<std::string> param_names;

  int num_params() const noexcept { return static_cast<int>(hk.size()); }
  CMatrix evaluate(const RVector& lambda) const;
};

/// Qubit Pauli channel with sigma-eigenbasis directions.
AffineBasis affine_basis_qubit();

/// Qutrit generalized Pauli channel. For the standard qutrit MUB the
/// matrices come from the closed-form 9x9 Choi template (f1..f4); parameter
/// k of the result is the contraction of basis k of `mub`.
AffineBasis affine_basis_qutrit(const Mub& mub);

/// Any generalized Pauli family, derived from choi() at lambda = 0 and e_k.
AffineBasis affine_basis_gen(const Mub& mub);

/// Template parameter t of the closed-form qutrit Choi matrix is the
/// contraction factor of standard_mub(3) basis kQutritTemplateToMub[t].
inline constexpr std::array<int, 4> kQutritTemplateToMub = {1, 0, 2, 3};

/// Reorders template-indexed qutrit parameters into standard_mub(3) order.
RVector qutrit_lambda_from_template(const RVector& template_lambda);
RVector qutrit_lambda_to_template(const RVector& mub_lambda);

/// The closed-form qutrit template evaluated at template-indexed parameters.
CMatrix qutrit_choi_template(const RVector& template_lambda);

/// k-fold composition; parameters become lambda_i^k in the same directions.
PauliChannel cascade(const PauliChannel& ch, int k);
GenPauliChannel cascade(const GenPauliChannel& ch, int k);

struct ChoiVerdict {
  bool hermitian = false;
  bool psd = false;
  bool trace_preserving = false;
  double hermitian_residual = 0.0;
  double min_eigenvalue = 0.0;
  double tp_residual = 0.0;

  bool ok() const noexcept { return hermitian && psd && trace_preserving; }
};

/// Independent Hermiticity, positivity and trace-preservation checks.
ChoiVerdict choi_validate(const CMatrix& x);

}  // namespace ptomo
