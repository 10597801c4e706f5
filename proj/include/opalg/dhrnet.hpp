#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/groups.hpp"
#include "opalg/sectors.hpp"

namespace opalg {

/// Sorted, duplicate-free site indices. The empty region is allowed.
using Region = std::vector<int>;

std::string region_name(const Region& r);

/// A chain of n sites with on-site dimension d0 and a site-wise group action;
/// site 0 is the leftmost tensor factor.
class LatticeNet {
public:
    LatticeNet() = default;
    /// Requires d0^n <= kMaxAmbientDim.
    LatticeNet(int sites, UnitaryRep site_rep);

    /// Spins with Z_2 acting by sigma_z on every site.
    static LatticeNet z2_chain(int sites);

    int sites() const { return sites_; }
    int onsite_dim() const { return site_rep_.dim(); }
    int dim() const { return dim_; }
    const UnitaryRep& site_rep() const { return site_rep_; }
    const UnitaryRep& global_rep() const { return global_rep_; }
    const FiniteGroup& group() const { return site_rep_.group(); }

    /// Throws unless `r` is sorted, unique and within the chain.
    void validate(const Region& r) const;
    Region complement(const Region& r) const;
    Region all_sites() const;
    /// d0^|r|
    int factor_dim(const Region& r) const;
    /// `local` acts on the sites of `r` in ascending order, identity elsewhere.
    Matrix embed(const Region& r, const Matrix& local) const;
    /// Partial trace over the complement of `keep`.
    Matrix reduce(const Matrix& m, const Region& keep) const;
    /// All contiguous intervals, shortest first, then by left end.
    std::vector<Region> intervals() const;

    /// Isotypic decomposition of the site action on k sites, cached.
    const SectorDecomposition& local_decomposition(int k) const;

private:
    int sites_ = 0;
    int dim_ = 1;
    UnitaryRep site_rep_;
    UnitaryRep global_rep_;
    mutable std::vector<std::optional<SectorDecomposition>> local_dec_;
};

/// Field algebra B(C^{d0^|r|}) (x) 1 or its G-fixed points (x) 1. The
/// observable basis consists of the block matrix units of the local sector
/// decomposition, so coordinates match `observable_distance`.
OperatorAlgebra region_algebra(const LatticeNet& net, const Region& r, bool observable);

/// state_distance_mod of two densities on the observable algebra of `r`,
/// computed from the reduced difference without building the algebra.
double observable_distance(const LatticeNet& net, const Matrix& rho1, const Matrix& rho2, const Region& r);

struct DhrReport {
    bool passes = false;
    std::vector<Region> witness_regions;
    std::vector<std::pair<Region, double>> distances;
};

/// omega = omega0 mod A(O') over the proper regions O (the empty region
/// included, the full chain excluded since its complement is trivial).
/// Intervals by default; every proper subset when `all_subsets` (n <= 8).
DhrReport dhr_check(const State& omega, const State& vacuum, const LatticeNet& net, double tol,
                    bool all_subsets = false);

struct LocalizedMorphism {
    Region region;
    ChargedMultiplet multiplet;

    const std::string& label() const { return multiplet.label; }
    /// Embeds site-local operators acting on `region`.
    static LocalizedMorphism from_local(const LatticeNet& net, Region region, std::string label,
                                        const std::vector<Matrix>& local);
    static LocalizedMorphism identity(const LatticeNet& net);
};

struct MorphismReport {
    double image_defect = 0.0;
    double multiplicativity_defect = 0.0;
    double localization_defect = 0.0;
    double unitality_defect = 0.0;
    bool valid = false;
};

/// Checks the unital-endomorphism and localization properties on the
/// observable basis (sampled when the net is large), tolerance 1e-9.
MorphismReport validate_morphism(const LatticeNet& net, const LocalizedMorphism& rho, std::uint64_t seed = kDefaultSeed);

/// ||m(A) - A||_F, i.e. the distance of A from the observable algebra.
double observable_residual(const LatticeNet& net, const Matrix& a);

/// rho(A); A must be an observable to 1e-9.
Matrix apply_morphism(const LatticeNet& net, const LocalizedMorphism& rho, const Matrix& a);

/// omega0 o rho as a density on the whole chain.
State selected_state(const LocalizedMorphism& rho, const State& vacuum);

/// (rho1 o rho2)(A) = rho1(rho2(A)); also the tensor product of the category.
LocalizedMorphism compose(const LocalizedMorphism& rho1, const LocalizedMorphism& rho2);

struct IntertwinerSpace {
    std::vector<Matrix> basis;
    /// max over the observable basis of ||T rho(A) - sigma(A) T||_max, when
    /// the net is small enough to check the whole basis (else sampled).
    double verification_residual = 0.0;
};

/// {T in A : T rho(A) = sigma(A) T}. Solved on a few random generators of A
/// and then verified.
IntertwinerSpace solve_intertwiners(const LatticeNet& net, const LocalizedMorphism& rho, const LocalizedMorphism& sigma,
                                    const Tolerances& tol = {}, std::uint64_t seed = kDefaultSeed);

struct HaagReport {
    int lhs_dim = 0;
    int rhs_dim = 0;
    int defect = 0;
    double inclusion_residual = 0.0;
    bool passes = false;
};

/// Compares A(O')' with A(O) on the chain.
HaagReport haag_duality_check(const LatticeNet& net, const Region& r, bool observable, const Tolerances& tol = {},
                              std::uint64_t seed = kDefaultSeed);

struct InversionSearch {
    std::optional<LocalizedMorphism> morphism;
    double distance = 0.0;
    int tried = 0;
};

/// Looks for a product of single-site conjugations by `generators`, up to
/// `max_factors` placements, whose selected state equals omega on the
/// observables. No completeness claim.
InversionSearch dhr_invert(const State& omega, const State& vacuum, const LatticeNet& net,
                           const std::vector<Matrix>& generators, double tol, int max_factors = 2);

/// -J sum X_i X_{i+1} - h sum Z_i on a spin chain; commutes with the sigma_z parity.
Matrix transverse_ising(const LatticeNet& net, double j, double h);

}  // namespace opalg
