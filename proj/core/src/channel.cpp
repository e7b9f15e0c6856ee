#include "ptomo/channel.hpp"

#include <cmath>
#include <sstream>

#include "ptomo/errors.hpp"

namespace ptomo {

namespace {

std::string describe(const RVector& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

RVector to_rvector(const Vec3& v) { return RVector(v); }

}  // namespace

GenPauliChannel::GenPauliChannel(Mub mub, RVector lambda)
    : GenPauliChannel(std::move(mub), std::move(lambda), true) {}

GenPauliChannel GenPauliChannel::unchecked(Mub mub, RVector lambda) {
  return GenPauliChannel(std::move(mub), std::move(lambda), false);
}

GenPauliChannel::GenPauliChannel(Mub mub, RVector lambda, bool check)
    : mub_(std::move(mub)), lambda_(std::move(lambda)) {
  if (lambda_.size() != mub_.size() || mub_.size() != mub_.dim + 1) {
    throw Error(ErrorKind::kDimension,
                "generalized Pauli channel needs d+1 parameters and bases");
  }
  if (check) {
    const auto verdict = cptp_check_gen(lambda_, mub_.dim);
    if (!verdict.valid) {
      throw Error(ErrorKind::kInvalidChannel,
                  "parameters " + describe(lambda_) + " violate " +
                      verdict.violated.front());
    }
  }
}

CMatrix GenPauliChannel::apply(const CMatrix& a) const {
  const int d = dim();
  if (a.rows() != d || a.cols() != d) {
    throw Error(ErrorKind::kDimension, "channel input has wrong size");
  }
  const cplx scale = (1.0 - lambda_.sum()) * a.trace() / static_cast<double>(d);
  CMatrix out = scale * CMatrix::Identity(d, d);
  for (int i = 0; i < mub_.size(); ++i) {
    if (lambda_[i] != 0.0) out += lambda_[i] * cond_expectation(mub_, i, a);
  }
  return out;
}

PauliChannel::PauliChannel(const Vec3& lambda, Mub directions)
    : lambda_(lambda), gen_(std::move(directions), to_rvector(lambda)) {
  if (gen_.dim() != 2) {
    throw Error(ErrorKind::kDimension, "Pauli channel directions must be a qubit MUB");
  }
}

PauliChannel PauliChannel::standard(const Vec3& lambda) {
  return PauliChannel(lambda, standard_mub(2));
}

PauliChannel PauliChannel::from_axes(const Vec3& lambda,
                                     const std::array<Vec3, 3>& axes) {
  return PauliChannel(lambda, mub_from_bloch_axes(axes));
}

Vec3 PauliChannel::apply_bloch(const Vec3& b) const {
  Vec3 out = Vec3::Zero();
  const auto v = axes();
  for (int i = 0; i < 3; ++i) out += lambda_[i] * v[i].dot(b) * v[i];
  return out;
}

DensityMatrix pauli_apply(const PauliChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix::from_matrix(ch.apply(rho.matrix()));
}

DensityMatrix gen_pauli_apply(const GenPauliChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim()) {
    throw Error(ErrorKind::kDimension, "state and channel dimensions differ");
  }
  return DensityMatrix::from_matrix(ch.apply(rho.matrix()));
}

CMatrix cond_expectation(const Mub& mub, int i, const CMatrix& a) {
  if (i < 0 || i >= mub.size()) {
    throw Error(ErrorKind::kIndexOutOfRange, "basis index out of range");
  }
  if (a.rows() != mub.dim || a.cols() != mub.dim) {
    throw Error(ErrorKind::kDimension, "conditional expectation input size");
  }
  const CMatrix& basis = mub.bases[i];
  // Diagonal of a in basis i, mapped back.
  const CVector diag = (basis.adjoint() * a * basis).diagonal();
  return basis * diag.asDiagonal() * basis.adjoint();
}

ChoiMatrix choi(const LinearMap& apply_fn, int d) {
  ChoiMatrix out;
  out.dim = d;
  out.entries = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      out.entries.block(i * d, j * d, d, d) = apply_fn(unit);
    }
  }
  return out;
}

ChoiMatrix choi(const PauliChannel& ch) { return choi(ch.as_generalized()); }

ChoiMatrix choi(const GenPauliChannel& ch) {
  return choi([&ch](const CMatrix& a) { return ch.apply(a); }, ch.dim());
}

CptpVerdict cptp_check_qubit(const Vec3& l) {
  CptpVerdict v;
  auto require = [&v](bool ok, std::string what) {
    if (!ok) {
      v.valid = false;
      v.violated.push_back(std::move(what));
    }
  };
  // The signs pair up: these are the Kraus weights p_0, p_3, p_1, p_2 >= 0.
  require(1.0 + l[2] + kCptpTol >= l[0] + l[1], "1+l3 >= l1+l2");
  require(1.0 + l[2] + kCptpTol >= -(l[0] + l[1]), "1+l3 >= -(l1+l2)");
  require(1.0 - l[2] + kCptpTol >= l[0] - l[1], "1-l3 >= l1-l2");
  require(1.0 - l[2] + kCptpTol >= -(l[0] - l[1]), "1-l3 >= -(l1-l2)");
  for (int i = 0; i < 3; ++i) {
    require(std::abs(l[i]) <= 1.0 + kCptpTol,
            "|l" + std::to_string(i + 1) + "| <= 1");
  }
  return v;
}

CptpVerdict cptp_check_gen(const RVector& l, int d) {
  if (d < 2 || l.size() != d + 1) {
    throw Error(ErrorKind::kDimension, "generalized Pauli channel needs d+1 parameters");
  }
  CptpVerdict v;
  const double sum = l.sum();
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (1.0 + d * l[i] + kCptpTol < sum) {
      v.valid = false;
      v.violated.push_back("1 + d*l" + std::to_string(i + 1) + " >= sum(l)");
    }
  }
  if (sum + kCptpTol < -1.0 / (d - 1)) {
    v.valid = false;
    v.violated.push_back("sum(l) >= -1/(d-1)");
  }
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (std::abs(l[i]) > 1.0 + kCptpTol) {
      v.valid = false;
      v.violated.push_back("|l" + std::to_string(i + 1) + "| <= 1");
    }
  }
  return v;
}

CMatrix AffineBasis::evaluate(const RVector& lambda) const {
  if (lambda.size() != num_params()) {
    throw Error(ErrorKind::kDimension, "affine basis parameter count mismatch");
  }
  CMatrix x = h0;
  for (int k = 0; k < num_params(); ++k) x += lambda[k] * hk[k];
  return x;
}

AffineBasis affine_basis_qubit() {
  AffineBasis basis;
  basis.dim = 2;
  basis.h0 = 0.5 * CMatrix::Identity(4, 4);
  CMatrix h1 = CMatrix::Zero(4, 4), h2 = CMatrix::Zero(4, 4),
          h3 = CMatrix::Zero(4, 4);
  h1(0, 3) = h1(3, 0) = h1(1, 2) = h1(2, 1) = 0.5;
  h2(0, 3) = h2(3, 0) = 0.5;
  h2(1, 2) = h2(2, 1) = -0.5;
  h3.diagonal() << 0.5, -0.5, -0.5, 0.5;
  basis.hk = {h1, h2, h3};
  basis.param_names = {"lambda_1", "lambda_2", "lambda_3"};
  return basis;
}

RVector qutrit_lambda_from_template(const RVector& t) {
  if (t.size() != 4) throw Error(ErrorKind::kDimension, "qutrit has 4 parameters");
  RVector out(4);
  for (int k = 0; k < 4; ++k) out[kQutritTemplateToMub[k]] = t[k];
  return out;
}

RVector qutrit_lambda_to_template(const RVector& m) {
  if (m.size() != 4) throw Error(ErrorKind::kDimension, "qutrit has 4 parameters");
  RVector out(4);
  for (int k = 0; k < 4; ++k) out[k] = m[kQutritTemplateToMub[k]];
  return out;
}

CMatrix qutrit_choi_template(const RVector& l) {
  if (l.size() != 4) throw Error(ErrorKind::kDimension, "qutrit has 4 parameters");
  const cplx i(0.0, 1.0);
  const double r3 = std::sqrt(3.0);
  const cplx f1 = 1.0 + 2.0 * l[1];
  const cplx f2 = 1.0 - l[1];
  const cplx f3 = l[0] + l[2] + l[3];
  const cplx f4 = l[0] - 0.5 * l[2] * (1.0 + i * r3) - 0.5 * l[3] * (1.0 - i * r3);
  const cplx c4 = std::conj(f4);
  const cplx o = 0.0;
  CMatrix x(9, 9);
  x << f1, o, o, o, f3, o, o, o, f3,
       o, f2, o, o, o, f4, c4, o, o,
       o, o, f2, c4, o, o, o, f4, o,
       o, o, f4, f2, o, o, o, c4, o,
       f3, o, o, o, f1, o, o, o, f3,
       o, c4, o, o, o, f2, f4, o, o,
       o, f4, o, o, o, c4, f2, o, o,
       o, o, c4, f4, o, o, o, f2, o,
       f3, o, o, o, f3, o, o, o, f1;
  return x / 3.0;
}

namespace {

bool same_bases(const Mub& a, const Mub& b) {
  if (a.dim != b.dim || a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    for (int k = 0; k < a.dim; ++k) {
      if ((a.projector(i, k) - b.projector(i, k)).cwiseAbs().maxCoeff() > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

AffineBasis affine_basis_qutrit(const Mub& mub) {
  if (mub.dim != 3 || mub.size() != 4) {
    throw Error(ErrorKind::kDimension, "qutrit MUB with four bases expected");
  }
  if (!same_bases(mub, standard_mub(3))) return affine_basis_gen(mub);

  AffineBasis basis;
  basis.dim = 3;
  basis.h0 = qutrit_choi_template(RVector::Zero(4));
  basis.hk.assign(4, CMatrix());
  for (int t = 0; t < 4; ++t) {
    basis.hk[kQutritTemplateToMub[t]] =
        qutrit_choi_template(RVector::Unit(4, t)) - basis.h0;
  }
  basis.param_names = {"lambda_1", "lambda_2", "lambda_3", "lambda_4"};
  return basis;
}

AffineBasis affine_basis_gen(const Mub& mub) {
  const int u = mub.size();
  AffineBasis basis;
  basis.dim = mub.dim;
  basis.h0 = choi(GenPauliChannel::unchecked(mub, RVector::Zero(u))).entries;
  for (int k = 0; k < u; ++k) {
    basis.hk.push_back(
        choi(GenPauliChannel::unchecked(mub, RVector::Unit(u, k))).entries -
        basis.h0);
    basis.param_names.push_back("lambda_" + std::to_string(k + 1));
  }
  return basis;
}

PauliChannel cascade(const PauliChannel& ch, int k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "cascade depth must be >= 1");
  Vec3 l = ch.lambda();
  for (int i = 0; i < 3; ++i) l[i] = std::pow(l[i], k);
  return PauliChannel(l, ch.directions());
}

GenPauliChannel cascade(const GenPauliChannel& ch, int k) {
  if (k < 1) throw Error(ErrorKind::kInvalidArgument, "cascade depth must be >= 1");
  RVector l = ch.lambda();
  for (Eigen::Index i = 0; i < l.size(); ++i) l[i] = std::pow(l[i], k);
  return GenPauliChannel(ch.mub(), l);
}

ChoiVerdict choi_validate(const CMatrix& x) {
  if (x.rows() != x.cols()) {
    throw Error(ErrorKind::kDimension, "Choi matrix must be square");
  }
  const int d = linalg::exact_sqrt(x.rows());
  if (d < 1) {
    throw Error(ErrorKind::kDimension, "Choi matrix size is not a perfect square");
  }
  ChoiVerdict v;
  v.hermitian_residual = linalg::hermitian_residual(x);
  v.hermitian = v.hermitian_residual <= kHermitianTol;
  const CMatrix h = linalg::hermitian_part(x);
  v.min_eigenvalue = linalg::min_eigenvalue(h);
  v.psd = v.min_eigenvalue >= -kCptpTol;
  v.tp_residual = (linalg::partial_trace_second(h, d, d) - CMatrix::Identity(d, d))
                      .cwiseAbs()
                      .maxCoeff();
  v.trace_preserving = v.tp_residual <= kCptpTol;
  return v;
}

}  // namespace ptomo
