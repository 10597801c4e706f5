#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/matrix.hpp"
#include "opalg/tolerances.hpp"

namespace opalg {

/// A finite group given by its multiplication table; element 0 need not be the
/// identity.
class FiniteGroup {
public:
    FiniteGroup() = default;
    /// Validates closure, identity and inverses exactly, and associativity on
    /// all triples for order <= 64 (sampled above).
    FiniteGroup(std::vector<std::vector<int>> table, std::string name = {});

    static FiniteGroup trivial();
    static FiniteGroup cyclic(int n);
    static FiniteGroup symmetric3();
    static FiniteGroup quaternion8();
    /// "cyclic:N", "symmetric:3", "quaternion:8", "trivial".
    static FiniteGroup named(const std::string& name);

    int order() const { return static_cast<int>(table_.size()); }
    int mul(int g, int h) const { return table_[g][h]; }
    int inverse(int g) const { return inverse_[g]; }
    int identity() const { return identity_; }
    const std::vector<std::vector<int>>& table() const { return table_; }
    const std::string& name() const { return name_; }

private:
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int identity_ = 0;
    std::string name_;
};

/// g -> U(g), one unitary per group element.
class UnitaryRep {
public:
    UnitaryRep() = default;
    /// Checks U(g)U(h) = U(gh) and unitarity to `tol`.
    UnitaryRep(FiniteGroup group, std::vector<Matrix> matrices, double tol = 1e-10);

    static UnitaryRep trivial(const FiniteGroup& g, int dim);
    static UnitaryRep regular(const FiniteGroup& g);
    /// Z_n generated by a unitary u with u^n = 1: U(k) = u^k.
    static UnitaryRep cyclic_from_generator(const FiniteGroup& g, const Matrix& u);
    static UnitaryRep tensor(const UnitaryRep& a, const UnitaryRep& b);
    /// n-fold tensor power (the global action of a site-wise symmetry).
    static UnitaryRep tensor_power(const UnitaryRep& site, int n);

    const FiniteGroup& group() const { return group_; }
    int dim() const { return matrices_.empty() ? 0 : static_cast<int>(matrices_.front().rows()); }
    const Matrix& operator()(int g) const { return matrices_[g]; }
    const std::vector<Matrix>& matrices() const { return matrices_; }

    /// tr U(g) for every element.
    std::vector<cplx> character() const;

private:
    FiniteGroup group_;
    std::vector<Matrix> matrices_;
};

/// m(F) = (1/|G|) sum_g U(g) F U(g)*, summed in group-index order.
Matrix average(const Matrix& f, const UnitaryRep& rep);

/// Fixed points of Ad U(G) inside f_alg: images of the basis under `average`,
/// re-orthonormalized.
OperatorAlgebra fixed_point_algebra(const OperatorAlgebra& f_alg, const UnitaryRep& rep, const Tolerances& tol = {});

/// Basis of {S : S U1(g) = U2(g) S}; S has shape dim2 x dim1. Obtained by
/// averaging matrix units, so the result is exactly the range of the
/// intertwiner projection.
std::vector<Matrix> intertwiner_space(const UnitaryRep& rep1, const UnitaryRep& rep2, const Tolerances& tol = {});

/// The unital *-algebra spanned by U(G).
OperatorAlgebra group_algebra(const UnitaryRep& rep, const Tolerances& tol = {});

/// One isotypic component: multiplicity space H (dim_h) tensored with the
/// irreducible space V (dim_v).
struct Sector {
    std::string label;
    int dim_h = 0;
    int dim_v = 0;
    /// gamma(g) on V, in the basis fixed by the decomposition unitary.
    std::vector<Matrix> irrep;
    /// Character of gamma.
    std::vector<cplx> character;
    /// Central projection onto H_gamma (x) V_gamma in the original basis.
    Matrix projection;
    /// First column of this sector inside W.
    int offset = 0;
};

/// Joint block structure of U(G)'' and U(G)'.
struct SectorDecomposition {
    std::vector<Sector> sectors;
    /// Columns grouped by sector, index h * dim_v + v inside a sector, so that
    /// W* U(g) W = (+)_gamma (1_H (x) gamma(g)).
    Matrix w;
    /// Set when the field algebra handed to decompose_sectors was not all of B(C^d).
    bool field_not_full = false;

    int ambient_dim() const { return static_cast<int>(w.rows()); }
    int size() const { return static_cast<int>(sectors.size()); }
    int index_of(const std::string& label) const;
    std::vector<std::string> labels() const;
    /// (+)_gamma (1_H (x) gamma(g)) as a block-diagonal matrix.
    Matrix block_form(int g) const;
};

/// Isotypic decomposition of a unitary representation.
SectorDecomposition isotypic_decomposition(const UnitaryRep& rep, const Tolerances& tol = {},
                                           std::uint64_t seed = kDefaultSeed);

/// max_g || U(g) - W (block form) W* ||_max
double reconstruction_residual(const SectorDecomposition& dec, const UnitaryRep& rep);

}  // namespace opalg
