#include "ptomo/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ptomo/errors.hpp"

namespace ptomo {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

BlochVector::BlochVector(const Vec3& v) : v_(v) {
  if (!v.allFinite() || v.norm() > 1.0 + kBlochNormTol) {
    throw Error(ErrorKind::kInvalidState,
                "Bloch vector norm " + fmt_double(v.norm()) + " exceeds 1");
  }
}

DensityMatrix DensityMatrix::from_matrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorKind::kDimension, "density matrix must be square");
  }
  if (linalg::hermitian_residual(m) > kHermitianTol) {
    throw Error(ErrorKind::kInvalidState, "density matrix is not Hermitian");
  }
  CMatrix h = linalg::hermitian_part(m);
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw Error(ErrorKind::kInvalidState,
                "density matrix trace " + fmt_double(tr) + " differs from 1");
  }
  const double lmin = linalg::min_eigenvalue(h);
  if (lmin < -kPsdTol) {
    throw Error(ErrorKind::kInvalidState,
                "density matrix has negative eigenvalue " + fmt_double(lmin));
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) {
    throw Error(ErrorKind::kInvalidState, "zero state vector");
  }
  const CVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

CMatrix Mub::projector(int i, int k) const {
  const CVector v = vector(i, k);
  return v * v.adjoint();
}

double mub_residual(const Mub& mub) {
  double worst = 0.0;
  const int d = mub.dim;
  for (int i = 0; i < mub.size(); ++i) {
    const CMatrix gram = mub.bases[i].adjoint() * mub.bases[i];
    worst = std::max(worst, (gram - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
    for (int j = i + 1; j < mub.size(); ++j) {
      const CMatrix overlap = mub.bases[i].adjoint() * mub.bases[j];
      const double dev =
          (overlap.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff();
      worst = std::max(worst, dev);
    }
  }
  return worst;
}

Povm Povm::from_elements(std::vector<CMatrix> elements,
                         std::vector<std::string> labels) {
  if (elements.empty()) {
    throw Error(ErrorKind::kInvalidMeasurement, "POVM has no elements");
  }
  const auto d = elements.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (auto& e : elements) {
    if (e.rows() != d || e.cols() != d) {
      throw Error(ErrorKind::kDimension, "POVM elements differ in size");
    }
    if (linalg::hermitian_residual(e) > kPsdTol) {
      throw Error(ErrorKind::kInvalidMeasurement, "POVM element not Hermitian");
    }
    e = linalg::hermitian_part(e);
    if (linalg::min_eigenvalue(e) < -kPsdTol) {
      throw Error(ErrorKind::kInvalidMeasurement, "POVM element not positive");
    }
    sum += e;
  }
  if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kUnitTol) {
    throw Error(ErrorKind::kInvalidMeasurement,
                "POVM elements do not sum to the identity");
  }
  if (labels.empty()) {
    for (std::size_t a = 0; a < elements.size(); ++a) {
      labels.push_back(std::to_string(a + 1));
    }
  } else if (labels.size() != elements.size()) {
    throw Error(ErrorKind::kInvalidMeasurement, "POVM label count mismatch");
  }
  return Povm(std::move(elements), std::move(labels));
}

std::int64_t MeasurementRecord::total_shots() const {
  std::int64_t n = 0;
  for (const auto& e : entries) n += e.shots;
  return n;
}

void MeasurementRecord::validate() const {
  for (std::size_t g = 0; g < entries.size(); ++g) {
    const auto& e = entries[g];
    if (e.shots <= 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "configuration " + std::to_string(g) + " has no shots");
    }
    std::int64_t sum = 0;
    for (auto c : e.counts) {
      if (c < 0) {
        throw Error(ErrorKind::kInvalidArgument, "negative outcome count");
      }
      sum += c;
    }
    if (sum != e.shots) {
      throw Error(ErrorKind::kInvalidArgument,
                  "counts of configuration " + std::to_string(g) +
                      " do not sum to its shot number");
    }
  }
}

DensityMatrix bloch_to_density(const BlochVector& theta) {
  const auto& p = linalg::pauli();
  CMatrix rho = p[0];
  for (int i = 0; i < 3; ++i) rho += theta[i] * p[i + 1];
  return DensityMatrix::from_matrix(0.5 * rho);
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error(ErrorKind::kDimension, "Bloch vectors exist only for qubits");
  }
  const CMatrix& m = rho.matrix();
  Vec3 v(2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(),
         (m(0, 0) - m(1, 1)).real());
  // Roundoff can push a pure state a hair outside the ball.
  const double n = v.norm();
  if (n > 1.0 && n <= 1.0 + 1e-10) v /= n;
  return BlochVector(v);
}

Mub standard_mub(int d) {
  const cplx i(0.0, 1.0);
  Mub mub;
  mub.dim = d;
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix b1(2, 2), b2(2, 2), b3(2, 2);
    b1 << s, s, s, -s;
    b2 << s, s, i * s, -i * s;
    b3 << 1.0, 0.0, 0.0, 1.0;
    mub.bases = {b1, b2, b3};
    return mub;
  }
  if (d == 3) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const double s = 1.0 / std::sqrt(3.0);
    mub.bases.push_back(CMatrix::Identity(3, 3));
    for (int j = 0; j < 3; ++j) {
      CMatrix b(3, 3);
      for (int k = 0; k < 3; ++k) {
        b(0, k) = s;
        b(1, k) = s * std::pow(w, k);
        b(2, k) = s * std::pow(w, (2 * k + j) % 3);
      }
      mub.bases.push_back(b);
    }
    return mub;
  }
  throw Error(ErrorKind::kUnsupportedDimension,
              "standard MUB available for d = 2 and d = 3 only");
}

namespace {

CVector plus_eigenvector(const Vec3& v) {
  const cplx i(0.0, 1.0);
  CVector psi(2);
  if (v.z() >= 0.0) {
    psi << 1.0 + v.z(), v.x() + i * v.y();
  } else {
    psi << v.x() - i * v.y(), 1.0 - v.z();
  }
  return psi / psi.norm();
}

}  // namespace

Mub mub_from_bloch_axes(const std::array<Vec3, 3>& axes) {
  for (int a = 0; a < 3; ++a) {
    if (std::abs(axes[a].norm() - 1.0) > kUnitTol) {
      throw Error(ErrorKind::kInvalidArgument, "channel axis is not a unit vector");
    }
    for (int b = a + 1; b < 3; ++b) {
      if (std::abs(axes[a].dot(axes[b])) > 1e-9) {
        throw Error(ErrorKind::kInvalidArgument, "channel axes are not orthogonal");
      }
    }
  }
  Mub mub;
  mub.dim = 2;
  for (const auto& v : axes) {
    const CVector plus = plus_eigenvector(v);
    CMatrix basis(2, 2);
    basis.col(0) = plus;
    basis(0, 1) = -std::conj(plus(1));
    basis(1, 1) = std::conj(plus(0));
    mub.bases.push_back(basis);
  }
  return mub;
}

std::array<Vec3, 3> bloch_axes(const Mub& mub) {
  if (mub.dim != 2 || mub.size() != 3) {
    throw Error(ErrorKind::kDimension, "qubit MUB with three bases expected");
  }
  std::array<Vec3, 3> axes;
  for (int i = 0; i < 3; ++i) {
    axes[i] = density_to_bloch(DensityMatrix::pure(mub.vector(i, 0))).vec();
  }
  return axes;
}

Povm projective_povm(const BlochVector& m) {
  if (std::abs(m.norm() - 1.0) > kUnitTol) {
    throw Error(ErrorKind::kInvalidMeasurement,
                "projective measurement needs a unit Bloch vector");
  }
  const auto& p = linalg::pauli();
  CMatrix ms = m[0] * p[1] + m[1] * p[2] + m[2] * p[3];
  return Povm::from_elements({0.5 * (p[0] + ms), 0.5 * (p[0] - ms)},
                             {"+", "-"});
}

Povm basis_povm(const Mub& mub, int i) {
  if (i < 0 || i >= mub.size()) {
    throw Error(ErrorKind::kIndexOutOfRange, "basis index out of range");
  }
  std::vector<CMatrix> elements;
  std::vector<std::string> labels;
  for (int k = 0; k < mub.dim; ++k) {
    elements.push_back(mub.projector(i, k));
    labels.push_back(std::to_string(k + 1));
  }
  return Povm::from_elements(std::move(elements), std::move(labels));
}

Povm tetrahedron_povm() {
  const double r2 = std::sqrt(2.0);
  const std::array<Vec3, 4> t = {
      Vec3(0.0, 0.0, 1.0), Vec3(2.0 * r2 / 3.0, 0.0, -1.0 / 3.0),
      Vec3(-r2 / 3.0, std::sqrt(2.0 / 3.0), -1.0 / 3.0),
      Vec3(-r2 / 3.0, -std::sqrt(2.0 / 3.0), -1.0 / 3.0)};
  const auto& p = linalg::pauli();
  std::vector<CMatrix> elements;
  for (const auto& v : t) {
    elements.push_back(0.25 * (p[0] + v.x() * p[1] + v.y() * p[2] + v.z() * p[3]));
  }
  return Povm::from_elements(std::move(elements), {"t1", "t2", "t3", "t4"});
}

RVector outcome_probs(const DensityMatrix& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) {
    throw Error(ErrorKind::kDimension, "state and POVM dimensions differ");
  }
  RVector p(povm.size());
  for (int a = 0; a < povm.size(); ++a) {
    double v = linalg::trace_product(rho.matrix(), povm.element(a));
    if (v < -kProbabilityClip || v > 1.0 + kProbabilityClip) {
      throw Error(ErrorKind::kInvalidState,
                  "outcome probability " + fmt_double(v) + " outside [0,1]");
    }
    p[a] = std::clamp(v, 0.0, 1.0);
  }
  return p;
}

OutcomeCounts sample_record(const RVector& probs, std::int64_t n, Rng& rng) {
  if (n < 1) {
    throw Error(ErrorKind::kInvalidArgument, "shot number must be positive");
  }
  if ((probs.array() < -kProbabilityClip).any() ||
      std::abs(probs.sum() - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "not a probability vector");
  }
  OutcomeCounts out;
  out.shots = n;
  out.counts.assign(static_cast<std::size_t>(probs.size()), 0);
  std::int64_t remaining = n;
  double mass = 1.0;
  for (Eigen::Index a = 0; a + 1 < probs.size() && remaining > 0; ++a) {
    const double pa = std::max(probs[a], 0.0);
    const double q = mass > 0.0 ? std::clamp(pa / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> dist(remaining, q);
    const std::int64_t c = dist(rng);
    out.counts[static_cast<std::size_t>(a)] = c;
    remaining -= c;
    mass -= pa;
  }
  out.counts.back() += remaining;
  return out;
}

OutcomeCounts sample_record(const RVector& probs, std::int64_t n,
                            std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample_record(probs, n, rng);
}

CMatrix config_matrix(const DensityMatrix& rho, const CMatrix& element) {
  if (element.rows() != rho.dim() || element.cols() != rho.dim()) {
    throw Error(ErrorKind::kDimension, "state and POVM element sizes differ");
  }
  return linalg::kron(rho.matrix().transpose(), element);
}

}  // namespace ptomo
