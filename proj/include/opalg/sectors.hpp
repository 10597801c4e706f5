#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/channels.hpp"
#include "opalg/groups.hpp"

namespace opalg {

/// psi_1..psi_m in the field algebra carrying charge `label`; implements
/// rho(A) = sum_i psi_i A psi_i*.
struct ChargedMultiplet {
    std::string label;
    std::vector<Matrix> psi;
    /// Sites the multiplet is supported on, when used inside a lattice net.
    std::optional<std::vector<int>> region;
    /// Set when sum psi psi* = 1 and psi_i* psi_j = delta_ij fail; the
    /// multiplet may still implement its morphism on the observables.
    bool partial = false;

    ChargedMultiplet() = default;
    ChargedMultiplet(std::string label, std::vector<Matrix> psi, std::optional<std::vector<int>> region = std::nullopt,
                     double tol = 1e-10);

    static ChargedMultiplet identity(std::string label, int d);

    int ambient_dim() const { return psi.empty() ? 0 : static_cast<int>(psi.front().rows()); }
    /// rho(A) = sum_i psi_i A psi_i*
    Matrix apply(const Matrix& a) const;
    /// Density of omega o rho: sum_i psi_i* rho psi_i.
    Matrix pull_back(const Matrix& density) const;
};

/// Decomposition of C^d under U(G), with the observable algebra
/// A = F^G realized as U(G)'. The field algebra must be all of B(C^d) for the
/// blocks to be the superselection sectors; otherwise the decomposition of
/// U(G)' is still returned with `field_not_full` set.
SectorDecomposition decompose_sectors(const OperatorAlgebra& field, const UnitaryRep& rep, const Tolerances& tol = {},
                                      std::uint64_t seed = kDefaultSeed);

/// Largest deviation of W* A W from the form (+)_gamma (a_gamma (x) 1_V).
double block_form_residual(const SectorDecomposition& dec, const Matrix& a);

/// dim of the centre of U(G)'' (equal to the centre of U(G)').
int center_dimension(const UnitaryRep& rep, const Tolerances& tol = {}, std::uint64_t seed = kDefaultSeed);

/// Index of the sector carrying the vacuum; requires tr(omega0 P) = 1 to 1e-9.
int vacuum_sector(const SectorDecomposition& dec, const State& vacuum);

/// Largest projection residual of rho(B) onto `observables` over its basis.
double morphism_preservation_defect(const ChargedMultiplet& m, const OperatorAlgebra& observables);

/// [k(A)](gamma) = omega0(rho_gamma(A)), one value per morphism. Each
/// morphism is checked to map the observable basis into itself (1e-9).
Vector k_map(const Matrix& a, const State& vacuum, const std::vector<ChargedMultiplet>& morphisms,
             const OperatorAlgebra& observables);

/// k*(nu) = sum_gamma nu_gamma omega0 o rho_gamma. Morphisms are matched to
/// sector labels by name; the vacuum sector defaults to the identity when
/// absent. The channel's classifying space is the decomposition's labels.
ClassicalQuantumChannel charging_channel(const SectorDecomposition& dec, const State& vacuum,
                                         const std::vector<ChargedMultiplet>& morphisms,
                                         const OperatorAlgebra& observables);

/// nu_gamma = tr(omega P_gamma).
ProbabilityWeight estimate_charge(const State& omega, const SectorDecomposition& dec);

struct ChargedVectorReport {
    Vector psi;
    double norm_deviation = 0.0;
    /// max over the field basis of |k*(nu)(m(F)) - <Psi|m(F) Psi>|
    double max_deviation = 0.0;
    int checked = 0;
};

/// Psi = sum_gamma sum_i sqrt(nu_gamma) psi_i^gamma* Omega0, checked against
/// k*(nu) o m on all matrix units of B(C^d). Throws when a multiplet does not
/// implement its morphism (psi_i A = rho(A) psi_i) on the observable basis.
ChargedVectorReport induce_charged_state(const ProbabilityWeight& nu, const std::vector<ChargedMultiplet>& multiplets,
                                         const Vector& vacuum_vector, const UnitaryRep& rep,
                                         const OperatorAlgebra& observables);

/// Ground energy of H compressed to each sector's range, in sector order.
std::vector<double> sector_energies(const SectorDecomposition& dec, const Matrix& hamiltonian);

/// Scans `candidates` for a unitary that transforms under U(G) by a scalar
/// character and moves the vacuum entirely into sector `label`. Only abelian
/// (dim V = 1) sectors are searched.
std::optional<ChargedMultiplet> find_abelian_morphism(const SectorDecomposition& dec, const UnitaryRep& rep,
                                                      const State& vacuum, const std::string& label,
                                                      const std::vector<Matrix>& candidates);

}  // namespace opalg
