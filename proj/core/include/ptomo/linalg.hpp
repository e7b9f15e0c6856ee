#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace ptomo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

namespace linalg {

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Traces out the second tensor factor of x acting on C^d_in (x) C^d_out.
CMatrix partial_trace_second(const CMatrix& x, int d_in, int d_out);

/// Largest entrywise modulus of x - x^H.
double hermitian_residual(const CMatrix& x);

CMatrix hermitian_part(const CMatrix& x);

/// Eigenvalues of a Hermitian matrix in ascending order.
RVector eigenvalues(const CMatrix& h);

double min_eigenvalue(const CMatrix& h);

/// Real Frobenius inner product Re tr(a^H b).
double inner(const CMatrix& a, const CMatrix& b);

/// Real part of tr(a b) without forming the product.
double trace_product(const CMatrix& a, const CMatrix& b);

/// Identity followed by the three Pauli matrices.
const std::array<CMatrix, 4>& pauli();

/// Integer d with d*d == n, or -1.
int exact_sqrt(Eigen::Index n);

}  // namespace linalg
}  // namespace ptomo
