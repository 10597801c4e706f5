#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "opalg/kernels.hpp"

namespace opalg {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline std::span<const cplx> flat(const Matrix& m) {
    return {m.data(), static_cast<std::size_t>(m.size())};
}
inline std::span<cplx> flat(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

/// tr(A* B), the Hilbert-Schmidt inner product.
inline cplx hs_inner(const Matrix& a, const Matrix& b) { return kernels::dotc(flat(a), flat(b)); }

inline double frobenius(const Matrix& a) { return std::sqrt(kernels::norm2(flat(a))); }

/// max |A_ij - B_ij|; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// max |A_ij|
double max_abs(const Matrix& a);

/// tr(rho A) for Hermitian rho.
inline cplx expectation(const Matrix& rho, const Matrix& a) { return hs_inner(rho, a); }

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron_all(const std::vector<Matrix>& factors);
Matrix identity(int d);
/// |i><j| in dimension d.
Matrix matrix_unit(int d, int i, int j);
Matrix diag(const std::vector<cplx>& entries);

bool is_square(const Matrix& a);
double hermiticity_defect(const Matrix& a);

namespace pauli {
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// Deterministic engine for every seeded draw in the library.
using Rng = std::mt19937_64;

Matrix random_hermitian(int d, Rng& rng);
Matrix random_complex(int rows, int cols, Rng& rng);
Matrix random_unitary(int d, Rng& rng);
/// Random density matrix of full rank.
Matrix random_density(int d, Rng& rng);

/// Orthonormal basis of the span of `vectors` (each flattened, trace inner
/// product), by modified Gram-Schmidt with one re-orthogonalization pass.
/// Candidates whose residual norm falls below `rank_tol` (relative to their
/// original norm, absolute when the original is below 1) are dropped.
std::vector<Matrix> orthonormalize(const std::vector<Matrix>& vectors, double rank_tol);

/// Appends `candidate` to an orthonormal `basis` if it is not already in the
/// span; returns true when it was appended.
bool extend_orthonormal(std::vector<Matrix>& basis, const Matrix& candidate, double rank_tol);

/// Frobenius norm of the component of `m` orthogonal to the orthonormal `basis`.
double span_residual(const std::vector<Matrix>& basis, const Matrix& m);

/// Projection of `m` onto the span of the orthonormal `basis`.
Matrix project(const std::vector<Matrix>& basis, const Matrix& m);

/// Hermitian positive square root inverse, used for polar normalization.
Matrix polar_unitary(const Matrix& s);

}  // namespace opalg
