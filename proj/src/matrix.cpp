#include "opalg/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "opalg/error.hpp"

namespace opalg {

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("max_abs_diff: shape mismatch");
    return kernels::max_abs_diff(flat(a), flat(b));
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) out = kron(out, f);
    return out;
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Matrix matrix_unit(int d, int i, int j) {
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

Matrix diag(const std::vector<cplx>& entries) {
    const int d = static_cast<int>(entries.size());
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = entries[i];
    return m;
}

bool is_square(const Matrix& a) { return a.rows() == a.cols(); }

double hermiticity_defect(const Matrix& a) {
    if (!is_square(a)) return INFINITY;
    Matrix adj = a.adjoint();
    return max_abs_diff(a, adj);
}

namespace pauli {
Matrix x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Matrix y() {
    Matrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
Matrix z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

Matrix random_complex(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

Matrix random_hermitian(int d, Rng& rng) {
    Matrix g = random_complex(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(int d, Rng& rng) {
    Matrix g = random_complex(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const cplx rii = r(i, i);
        if (std::abs(rii) > 0) q.col(i) *= rii / std::abs(rii);
    }
    return q;
}

Matrix random_density(int d, Rng& rng) {
    Matrix g = random_complex(d, d, rng);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

bool extend_orthonormal(std::vector<Matrix>& basis, const Matrix& candidate, double rank_tol) {
    Matrix v = candidate;
    const double n0 = frobenius(v);
    if (n0 == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
            const cplx c = hs_inner(b, v);
            kernels::axpy(-c, flat(b), flat(v));
        }
    }
    const double n1 = frobenius(v);
    if (n1 <= rank_tol * std::max(1.0, n0)) return false;
    kernels::scale(1.0 / n1, flat(v));
    basis.push_back(std::move(v));
    return true;
}

std::vector<Matrix> orthonormalize(const std::vector<Matrix>& vectors, double rank_tol) {
    std::vector<Matrix> basis;
    for (const auto& v : vectors) extend_orthonormal(basis, v, rank_tol);
    return basis;
}

double span_residual(const std::vector<Matrix>& basis, const Matrix& m) {
    Matrix r = m;
    for (const auto& b : basis) kernels::axpy(-hs_inner(b, m), flat(b), flat(r));
    return frobenius(r);
}

Matrix project(const std::vector<Matrix>& basis, const Matrix& m) {
    Matrix p = Matrix::Zero(m.rows(), m.cols());
    for (const auto& b : basis) kernels::axpy(hs_inner(b, m), flat(b), flat(p));
    return p;
}

Matrix polar_unitary(const Matrix& s) {
    Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace opalg
