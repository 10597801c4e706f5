#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opalg/matrix.hpp"
#include "opalg/tolerances.hpp"

namespace opalg {

/// A unital *-closed subspace of d x d matrices, stored as a basis that is
/// orthonormal under tr(A* B).
class OperatorAlgebra {
public:
    OperatorAlgebra() = default;

    /// Wraps an already orthonormal basis. No closure check is made here; use
    /// `closure_defect` or `generate_algebra` when that matters.
    OperatorAlgebra(int ambient_dim, std::vector<Matrix> orthonormal_basis, bool contains_unit);

    /// The scalars C*1 in dimension d.
    static OperatorAlgebra scalars(int d);
    /// All of B(C^d), basis of matrix units.
    static OperatorAlgebra full(int d);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Matrix>& basis() const { return basis_; }
    bool contains_unit() const { return contains_unit_; }

    /// Frobenius distance from `m` to the span of the basis.
    double residual(const Matrix& m) const { return span_residual(basis_, m); }
    bool contains(const Matrix& m, double tol) const;
    Matrix project(const Matrix& m) const { return opalg::project(basis_, m); }

    /// Coordinates <B_k, m> in the basis.
    Vector coordinates(const Matrix& m) const;
    Matrix from_coordinates(const Vector& c) const;

    /// Random Hermitian element, a real-weighted sum of the Hermitian and
    /// anti-Hermitian parts of the basis.
    Matrix random_hermitian_element(Rng& rng) const;

    /// Largest projection residual of B_i* and of B_i B_j (all pairs when
    /// dim <= pair_cap, otherwise `pair_cap`^2 seeded samples).
    double closure_defect(int pair_cap = 64, std::uint64_t seed = kDefaultSeed) const;
    /// Largest |<B_i, B_j> - delta_ij|.
    double orthonormality_defect() const;

private:
    int ambient_dim_ = 0;
    std::vector<Matrix> basis_;
    bool contains_unit_ = false;
};

/// Density matrix with a label; validated on construction.
class State {
public:
    State() = default;
    explicit State(Matrix density, std::string label = {}, double tol = Tolerances{}.state);

    /// Pure state |v><v| from a (normalized) vector.
    static State pure(const Vector& v, std::string label = {});
    /// 1/d.
    static State maximally_mixed(int d, std::string label = {});

    const Matrix& density() const { return density_; }
    const std::string& label() const { return label_; }
    int dim() const { return static_cast<int>(density_.rows()); }

    /// omega(A) = tr(rho A).
    cplx operator()(const Matrix& a) const;

private:
    Matrix density_;
    std::string label_;
};

/// Hermiticity, positivity and trace defects of a candidate density; the
/// largest of the three is what State compares with its tolerance.
struct DensityDefects {
    double hermiticity = 0.0;
    double min_eigenvalue = 0.0;
    double trace_error = 0.0;
};
DensityDefects density_defects(const Matrix& rho);

/// Smallest unital *-closed subspace containing the generators, found by
/// multiplying basis pairs until the dimension stops growing.
OperatorAlgebra generate_algebra(const std::vector<Matrix>& generators, bool include_unit,
                                 const Tolerances& tol = {}, int dim_cap = kMaxAmbientDim);

/// {X : XB = BX for all B in alg}. Solved on the joint eigenbasis of a seeded
/// random Hermitian element of alg and then cut down by the commutation
/// equations of further random elements; the result is verified against
/// every basis element of alg.
OperatorAlgebra commutant(const OperatorAlgebra& alg, const Tolerances& tol = {},
                          std::uint64_t seed = kDefaultSeed);

/// alg intersected with its commutant, solved in the coordinates of alg.
OperatorAlgebra center(const OperatorAlgebra& alg, const Tolerances& tol = {},
                       std::uint64_t seed = kDefaultSeed);

/// Minimal projections of the centre of alg, ordered by descending rank and
/// then descending diagonal (lexicographic).
std::vector<Matrix> minimal_central_projections(const OperatorAlgebra& alg, const Tolerances& tol = {},
                                                std::uint64_t seed = kDefaultSeed);

/// Same as above, starting from an already computed commutative centre.
std::vector<Matrix> minimal_projections_of_commutative(const OperatorAlgebra& centre,
                                                       const Tolerances& tol = {},
                                                       std::uint64_t seed = kDefaultSeed);

/// max over the orthonormal basis B of sub of |tr(rho1 B) - tr(rho2 B)|.
double state_distance_mod(const State& a, const State& b, const OperatorAlgebra& sub);

/// Both spans contain each other up to `tol` (Frobenius residual).
bool same_span(const OperatorAlgebra& a, const OperatorAlgebra& b, double tol);
/// Largest residual of a's basis projected onto b.
double inclusion_residual(const OperatorAlgebra& a, const OperatorAlgebra& b);

}  // namespace opalg
