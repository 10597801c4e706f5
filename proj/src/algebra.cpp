#include "opalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "opalg/error.hpp"

namespace opalg {

// ---------------------------------------------------------------- algebra --

OperatorAlgebra::OperatorAlgebra(int ambient_dim, std::vector<Matrix> orthonormal_basis, bool contains_unit)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)), contains_unit_(contains_unit) {
    for (const auto& b : basis_)
        if (b.rows() != ambient_dim_ || b.cols() != ambient_dim_)
            throw DimensionError("OperatorAlgebra: basis element has wrong shape");
}

OperatorAlgebra OperatorAlgebra::scalars(int d) {
    return OperatorAlgebra(d, {identity(d) / std::sqrt(double(d))}, true);
}

OperatorAlgebra OperatorAlgebra::full(int d) {
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(d) * d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) basis.push_back(matrix_unit(d, i, j));
    return OperatorAlgebra(d, std::move(basis), true);
}

bool OperatorAlgebra::contains(const Matrix& m, double tol) const {
    return residual(m) <= tol * std::max(1.0, frobenius(m));
}

Vector OperatorAlgebra::coordinates(const Matrix& m) const {
    Vector c(dim());
    for (int k = 0; k < dim(); ++k) c(k) = hs_inner(basis_[k], m);
    return c;
}

Matrix OperatorAlgebra::from_coordinates(const Vector& c) const {
    Matrix m = Matrix::Zero(ambient_dim_, ambient_dim_);
    for (int k = 0; k < dim(); ++k) kernels::axpy(c(k), flat(basis_[k]), flat(m));
    return m;
}

Matrix OperatorAlgebra::random_hermitian_element(Rng& rng) const {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix h = Matrix::Zero(ambient_dim_, ambient_dim_);
    for (const auto& b : basis_) {
        const double s = u(rng), t = u(rng);
        h += s * (b + b.adjoint()) + t * cplx(0, 1) * (b - b.adjoint());
    }
    return 0.5 * (h + h.adjoint());
}

double OperatorAlgebra::closure_defect(int pair_cap, std::uint64_t seed) const {
    double worst = 0.0;
    for (const auto& b : basis_) worst = std::max(worst, residual(b.adjoint()));
    const int n = dim();
    if (n <= pair_cap) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) worst = std::max(worst, residual(basis_[i] * basis_[j]));
    } else {
        Rng rng(seed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int s = 0; s < pair_cap * pair_cap; ++s)
            worst = std::max(worst, residual(basis_[pick(rng)] * basis_[pick(rng)]));
    }
    return worst;
}

double OperatorAlgebra::orthonormality_defect() const {
    double worst = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) {
            const cplx g = hs_inner(basis_[i], basis_[j]);
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

// ------------------------------------------------------------------ state --

DensityDefects density_defects(const Matrix& rho) {
    DensityDefects d;
    d.hermiticity = hermiticity_defect(rho);
    Matrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    d.trace_error = std::abs(rho.trace() - cplx(1.0));
    return d;
}

State::State(Matrix density, std::string label, double tol) : density_(std::move(density)), label_(std::move(label)) {
    if (!is_square(density_) || density_.rows() == 0) throw DimensionError("State: density must be square");
    const auto d = density_defects(density_);
    if (d.hermiticity > tol || d.min_eigenvalue < -tol || d.trace_error > tol) {
        std::ostringstream os;
        os << "State '" << label_ << "': not a density matrix (hermiticity " << d.hermiticity << ", min eigenvalue "
           << d.min_eigenvalue << ", trace error " << d.trace_error << ")";
        throw PreconditionError(os.str());
    }
}

State State::pure(const Vector& v, std::string label) {
    Vector u = v / v.norm();
    return State(u * u.adjoint(), std::move(label));
}

State State::maximally_mixed(int d, std::string label) { return State(identity(d) / double(d), std::move(label)); }

cplx State::operator()(const Matrix& a) const {
    if (a.rows() != density_.rows() || a.cols() != density_.cols())
        throw DimensionError("State: observable dimension mismatch");
    return expectation(density_, a);
}

// ------------------------------------------------------------- generation --

OperatorAlgebra generate_algebra(const std::vector<Matrix>& generators, bool include_unit, const Tolerances& tol,
                                 int dim_cap) {
    int d = -1;
    for (const auto& g : generators) {
        if (!is_square(g)) throw DimensionError("generate_algebra: generator is not square");
        if (d < 0) d = static_cast<int>(g.rows());
        if (g.rows() != d) throw DimensionError("generate_algebra: generators differ in dimension");
    }
    if (d < 0) {
        if (!include_unit) throw DimensionError("generate_algebra: no generators and no unit");
        d = 1;
    }
    if (d > dim_cap) throw DimensionError("generate_algebra: ambient dimension exceeds cap");

    std::vector<Matrix> basis;
    if (include_unit) extend_orthonormal(basis, identity(d), tol.rank);
    for (const auto& g : generators) {
        extend_orthonormal(basis, g, tol.rank);
        extend_orthonormal(basis, g.adjoint(), tol.rank);
    }
    // Every pair (i, j) with max(i, j) >= done has not been multiplied yet.
    std::size_t done = 0;
    while (done < basis.size()) {
        const std::size_t end = basis.size();
        for (std::size_t i = 0; i < end; ++i) {
            for (std::size_t j = (i < done ? done : 0); j < end; ++j) {
                extend_orthonormal(basis, basis[i] * basis[j], tol.rank);
                if (j != i) extend_orthonormal(basis, basis[j] * basis[i], tol.rank);
            }
            if (i >= done) extend_orthonormal(basis, basis[i].adjoint(), tol.rank);
        }
        done = end;
        if (basis.size() == static_cast<std::size_t>(d) * d) break;
    }
    const bool unit = include_unit || span_residual(basis, identity(d)) <= 1e-10 * std::sqrt(double(d));
    return OperatorAlgebra(d, std::move(basis), unit);
}

// -------------------------------------------------------------- commutant --

namespace {

struct Clusters {
    std::vector<int> of;  // cluster id per eigen-index
    int count = 0;
};

Clusters cluster_eigenvalues(const RealVector& sorted_values, double gap) {
    Clusters c;
    c.of.resize(sorted_values.size());
    const double scale = std::max(1.0, sorted_values.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < sorted_values.size(); ++i) {
        if (i > 0 && sorted_values(i) - sorted_values(i - 1) > gap * scale) ++c.count;
        c.of[i] = c.count;
    }
    c.count = sorted_values.size() ? c.count + 1 : 0;
    return c;
}

// Hermitian generators of the *-algebra: all Hermitian parts for small
// algebras, a few seeded random elements otherwise.
std::vector<Matrix> hermitian_generators(const OperatorAlgebra& alg, Rng& rng, bool exhaustive) {
    std::vector<Matrix> out;
    if (exhaustive || alg.dim() <= 8) {
        for (const auto& b : alg.basis()) {
            out.push_back(0.5 * (b + b.adjoint()));
            out.push_back(cplx(0, -0.5) * (b - b.adjoint()));
        }
    } else {
        for (int r = 0; r < 3; ++r) out.push_back(alg.random_hermitian_element(rng));
    }
    return out;
}

// True when K (in the cluster eigenbasis) is block diagonal with scalar
// blocks, i.e. commutes with every matrix supported within clusters.
bool cluster_scalar(const Matrix& k, const Clusters& cl, double tol) {
    const Eigen::Index d = k.rows();
    std::vector<Eigen::Index> first(cl.count, -1);
    for (Eigen::Index i = 0; i < d; ++i)
        if (first[cl.of[i]] < 0) first[cl.of[i]] = i;
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
            if (cl.of[i] != cl.of[j]) {
                if (std::abs(k(i, j)) > tol) return false;
            } else if (i == j) {
                const Eigen::Index f = first[cl.of[i]];
                if (std::abs(k(i, i) - k(f, f)) > tol) return false;
            } else if (std::abs(k(i, j)) > tol) {
                return false;
            }
        }
    return true;
}

OperatorAlgebra commutant_attempt(const OperatorAlgebra& alg, const Tolerances& tol, Rng& rng, bool exhaustive) {
    const int d = alg.ambient_dim();
    auto gens = hermitian_generators(alg, rng, exhaustive);
    Matrix h1 = alg.random_hermitian_element(rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h1);
    const Matrix& v = es.eigenvectors();
    const Clusters cl = cluster_eigenvalues(es.eigenvalues(), tol.gap);

    std::vector<std::pair<int, int>> cand;
    for (int b = 0; b < d; ++b)
        for (int a = 0; a < d; ++a)
            if (cl.of[a] == cl.of[b]) cand.emplace_back(a, b);
    const int s = static_cast<int>(cand.size());

    std::vector<Matrix> ks;
    double kscale = 1.0;
    for (const auto& g : gens) {
        Matrix k = v.adjoint() * g * v;
        kscale = std::max(kscale, max_abs(k));
        ks.push_back(std::move(k));
    }
    std::vector<Matrix> relevant;
    for (auto& k : ks)
        if (!cluster_scalar(k, cl, 1e-12 * kscale)) relevant.push_back(std::move(k));

    auto lift = [&](const Vector& y) {
        Matrix inner = Matrix::Zero(d, d);
        for (int t = 0; t < s; ++t) inner(cand[t].first, cand[t].second) = y(t);
        return Matrix(v * inner * v.adjoint());
    };

    std::vector<Matrix> basis;
    if (relevant.empty()) {
        basis.reserve(s);
        for (int t = 0; t < s; ++t) {
            const auto [a, b] = cand[t];
            basis.push_back(v.col(a) * v.col(b).adjoint());
        }
    } else {
        if (s > 4096) throw DimensionError("commutant: candidate space too large for dense elimination");
        // Gram matrix of the commutation map restricted to the candidate space:
        // <[E_ab,K],[E_cd,K]> = d_ac (K^2)_db + d_bd (K^2)_ac - 2 K_db K_ac.
        Matrix gram = Matrix::Zero(s, s);
        for (const auto& k : relevant) {
            const Matrix k2 = k * k;
            for (int q = 0; q < s; ++q) {
                const auto [c, dd] = cand[q];
                for (int p = 0; p < s; ++p) {
                    const auto [a, b] = cand[p];
                    cplx g = -2.0 * k(dd, b) * k(a, c);
                    if (a == c) g += k2(dd, b);
                    if (b == dd) g += k2(a, c);
                    gram(p, q) += g;
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> ges(gram);
        const double top = std::max(1.0, ges.eigenvalues().cwiseAbs().maxCoeff());
        for (int t = 0; t < s; ++t)
            if (ges.eigenvalues()(t) <= tol.rank * top) basis.push_back(lift(ges.eigenvectors().col(t)));
    }
    return OperatorAlgebra(d, std::move(basis), true);
}

double commutation_defect(const OperatorAlgebra& alg, const OperatorAlgebra& comm, Rng& rng) {
    if (comm.dim() == 0) return 0.0;
    std::normal_distribution<double> nd;
    Vector y(comm.dim());
    for (int k = 0; k < comm.dim(); ++k) y(k) = cplx(nd(rng), nd(rng));
    y /= y.norm();
    const Matrix x = comm.from_coordinates(y);
    double worst = 0.0;
    for (const auto& b : alg.basis()) worst = std::max(worst, frobenius(commutator(x, b)));
    return worst;
}

}  // namespace

OperatorAlgebra commutant(const OperatorAlgebra& alg, const Tolerances& tol, std::uint64_t seed) {
    const int d = alg.ambient_dim();
    if (d > kMaxAmbientDim) throw DimensionError("commutant: ambient dimension exceeds cap");
    if (alg.dim() == 0) return OperatorAlgebra::full(d);
    Rng rng(seed);
    for (int attempt = 0; attempt < 2; ++attempt) {
        OperatorAlgebra comm = commutant_attempt(alg, tol, rng, attempt > 0);
        if (commutation_defect(alg, comm, rng) <= 1e-8) return comm;
    }
    throw NumericalError("commutant: commutation check failed after exhaustive retry");
}

// ----------------------------------------------------------------- centre --

OperatorAlgebra center(const OperatorAlgebra& alg, const Tolerances& tol, std::uint64_t seed) {
    const int d = alg.ambient_dim();
    const int n = alg.dim();
    if (n == 0) return alg;
    Rng rng(seed);
    for (int attempt = 0; attempt < 2; ++attempt) {
        const auto gens = hermitian_generators(alg, rng, attempt > 0);
        Matrix gram = Matrix::Zero(n, n);
        for (const auto& h : gens) {
            std::vector<Matrix> cols;
            cols.reserve(n);
            for (const auto& b : alg.basis()) cols.push_back(commutator(b, h));
            for (int q = 0; q < n; ++q)
                for (int p = 0; p <= q; ++p) {
                    const cplx g = hs_inner(cols[p], cols[q]);
                    gram(p, q) += g;
                    if (p != q) gram(q, p) += std::conj(g);
                }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
        const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        std::vector<Matrix> basis;
        for (int t = 0; t < n; ++t)
            if (es.eigenvalues()(t) <= tol.rank * top) basis.push_back(alg.from_coordinates(es.eigenvectors().col(t)));
        OperatorAlgebra c(d, std::move(basis), alg.contains_unit());
        if (commutation_defect(alg, c, rng) <= 1e-8) return c;
    }
    throw NumericalError("center: commutation check failed after exhaustive retry");
}

// ---------------------------------------------------- central projections --

namespace {

bool diag_lex_greater(const Matrix& a, const Matrix& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double x = a(i, i).real(), y = b(i, i).real();
        if (std::abs(x - y) > 1e-9) return x > y;
    }
    return false;
}

}  // namespace

std::vector<Matrix> minimal_projections_of_commutative(const OperatorAlgebra& centre, const Tolerances& tol,
                                                       std::uint64_t seed) {
    const int d = centre.ambient_dim();
    if (centre.dim() == 0) return {};
    for (int attempt = 0; attempt < 5; ++attempt) {
        Rng rng(seed + static_cast<std::uint64_t>(attempt));
        const Matrix z = centre.random_hermitian_element(rng);
        Eigen::SelfAdjointEigenSolver<Matrix> es(z);
        const RealVector& ev = es.eigenvalues();
        const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
        bool ambiguous = false;
        for (Eigen::Index i = 1; i < ev.size(); ++i) {
            const double gap = ev(i) - ev(i - 1);
            if (gap > 1e-12 * scale && gap <= tol.gap * scale) ambiguous = true;
        }
        const Clusters cl = cluster_eigenvalues(ev, tol.gap);
        if (ambiguous || cl.count != centre.dim()) continue;
        std::vector<Matrix> proj(cl.count, Matrix::Zero(d, d));
        for (int i = 0; i < d; ++i) proj[cl.of[i]] += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        std::vector<std::pair<int, Matrix>> ranked;
        for (auto& p : proj) ranked.emplace_back(static_cast<int>(std::lround(p.trace().real())), std::move(p));
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return diag_lex_greater(x.second, y.second);
        });
        std::vector<Matrix> out;
        for (auto& r : ranked) out.push_back(std::move(r.second));
        return out;
    }
    throw NumericalError("minimal_central_projections: eigenvalue gap ambiguous after 5 seeds");
}

std::vector<Matrix> minimal_central_projections(const OperatorAlgebra& alg, const Tolerances& tol,
                                                std::uint64_t seed) {
    return minimal_projections_of_commutative(center(alg, tol, seed), tol, seed);
}

// ---------------------------------------------------------------- states --

double state_distance_mod(const State& a, const State& b, const OperatorAlgebra& sub) {
    if (a.dim() != b.dim() || a.dim() != sub.ambient_dim())
        throw DimensionError("state_distance_mod: dimension mismatch");
    const Matrix diff = a.density() - b.density();
    double worst = 0.0;
    for (const auto& basis_el : sub.basis()) worst = std::max(worst, std::abs(hs_inner(diff, basis_el)));
    return worst;
}

double inclusion_residual(const OperatorAlgebra& a, const OperatorAlgebra& b) {
    double worst = 0.0;
    for (const auto& x : a.basis()) worst = std::max(worst, b.residual(x));
    return worst;
}

bool same_span(const OperatorAlgebra& a, const OperatorAlgebra& b, double tol) {
    if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) return false;
    return inclusion_residual(a, b) <= tol && inclusion_residual(b, a) <= tol;
}

}  // namespace opalg
