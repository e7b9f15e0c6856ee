#include "ptomo/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ptomo/errors.hpp"

namespace ptomo::linalg {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix partial_trace_second(const CMatrix& x, int d_in, int d_out) {
  if (x.rows() != d_in * d_out || x.cols() != d_in * d_out) {
    throw Error(ErrorKind::kDimension, "partial trace: size mismatch");
  }
  CMatrix out = CMatrix::Zero(d_in, d_in);
  for (int i = 0; i < d_in; ++i) {
    for (int j = 0; j < d_in; ++j) {
      out(i, j) = x.block(i * d_out, j * d_out, d_out, d_out).trace();
    }
  }
  return out;
}

double hermitian_residual(const CMatrix& x) {
  if (x.rows() != x.cols()) return INFINITY;
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix hermitian_part(const CMatrix& x) { return 0.5 * (x + x.adjoint()); }

RVector eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const CMatrix& h) { return eigenvalues(h).minCoeff(); }

double inner(const CMatrix& a, const CMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

const std::array<CMatrix, 4>& pauli() {
  static const std::array<CMatrix, 4> kPauli = [] {
    std::array<CMatrix, 4> p;
    const cplx i(0.0, 1.0);
    p[0] = CMatrix::Identity(2, 2);
    p[1] = CMatrix(2, 2);
    p[1] << 0.0, 1.0, 1.0, 0.0;
    p[2] = CMatrix(2, 2);
    p[2] << 0.0, -i, i, 0.0;
    p[3] = CMatrix(2, 2);
    p[3] << 1.0, 0.0, 0.0, -1.0;
    return p;
  }();
  return kPauli;
}

int exact_sqrt(Eigen::Index n) {
  const auto r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return static_cast<Eigen::Index>(r) * r == n ? r : -1;
}

}  // namespace ptomo::linalg

namespace ptomo {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidState: return "invalid-state";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kUnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::kInvalidMeasurement: return "invalid-measurement";
    case ErrorKind::kInvalidChannel: return "invalid-channel";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kSingularConfiguration: return "singular-configuration";
    case ErrorKind::kDegenerateIterate: return "degenerate-iterate";
    case ErrorKind::kNonConvergence: return "non-convergence";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kPartialResult: return "partial-result";
  }
  return "unknown";
}

}  // namespace ptomo
