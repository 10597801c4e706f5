#include "opalg/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opalg/error.hpp"

namespace opalg {

ChargedMultiplet::ChargedMultiplet(std::string label_, std::vector<Matrix> psi_, std::optional<std::vector<int>> region_,
                                   double tol)
    : label(std::move(label_)), psi(std::move(psi_)), region(std::move(region_)) {
    if (psi.empty()) throw PreconditionError("ChargedMultiplet: no operators");
    const auto d = psi.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& p : psi) {
        if (p.rows() != d || p.cols() != d) throw DimensionError("ChargedMultiplet: operators differ in shape");
        sum += p * p.adjoint();
    }
    double defect = max_abs_diff(sum, opalg::identity(static_cast<int>(d)));
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t j = 0; j < psi.size(); ++j) {
            Matrix target = i == j ? opalg::identity(static_cast<int>(d)) : Matrix::Zero(d, d);
            defect = std::max(defect, max_abs_diff(psi[i].adjoint() * psi[j], target));
        }
    partial = defect > tol;
}

ChargedMultiplet ChargedMultiplet::identity(std::string label, int d) {
    return ChargedMultiplet(std::move(label), {opalg::identity(d)});
}

Matrix ChargedMultiplet::apply(const Matrix& a) const {
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (const auto& p : psi) out.noalias() += p * a * p.adjoint();
    return out;
}

Matrix ChargedMultiplet::pull_back(const Matrix& density) const {
    Matrix out = Matrix::Zero(density.rows(), density.cols());
    for (const auto& p : psi) out.noalias() += p.adjoint() * density * p;
    return out;
}

SectorDecomposition decompose_sectors(const OperatorAlgebra& field, const UnitaryRep& rep, const Tolerances& tol,
                                      std::uint64_t seed) {
    if (field.ambient_dim() != rep.dim()) throw DimensionError("decompose_sectors: dimension mismatch");
    SectorDecomposition dec = isotypic_decomposition(rep, tol, seed);
    const int d = rep.dim();
    dec.field_not_full = field.dim() != d * d;
    return dec;
}

double block_form_residual(const SectorDecomposition& dec, const Matrix& a) {
    const Matrix b = dec.w.adjoint() * a * dec.w;
    Matrix expected = Matrix::Zero(b.rows(), b.cols());
    for (const auto& s : dec.sectors) {
        const int n = s.dim_h * s.dim_v;
        const Matrix blk = b.block(s.offset, s.offset, n, n);
        Matrix reduced(s.dim_h, s.dim_h);
        for (int x = 0; x < s.dim_h; ++x)
            for (int y = 0; y < s.dim_h; ++y)
                reduced(x, y) = blk.block(x * s.dim_v, y * s.dim_v, s.dim_v, s.dim_v).trace() / double(s.dim_v);
        expected.block(s.offset, s.offset, n, n) = kron(reduced, identity(s.dim_v));
    }
    return max_abs_diff(b, expected);
}

int center_dimension(const UnitaryRep& rep, const Tolerances& tol, std::uint64_t seed) {
    return center(group_algebra(rep, tol), tol, seed).dim();
}

int vacuum_sector(const SectorDecomposition& dec, const State& vacuum) {
    for (int k = 0; k < dec.size(); ++k)
        if (std::abs(vacuum(dec.sectors[k].projection) - cplx(1.0)) <= 1e-9) return k;
    throw PreconditionError("vacuum state is not supported in a single sector");
}

double morphism_preservation_defect(const ChargedMultiplet& m, const OperatorAlgebra& observables) {
    double worst = 0.0;
    for (const auto& b : observables.basis()) worst = std::max(worst, observables.residual(m.apply(b)));
    return worst;
}

namespace {

void require_preserving(const ChargedMultiplet& m, const OperatorAlgebra& observables) {
    const double defect = morphism_preservation_defect(m, observables);
    if (defect > 1e-9) {
        std::ostringstream os;
        os << "morphism '" << m.label << "' does not map the observable algebra into itself (defect " << defect << ")";
        throw PreconditionError(os.str());
    }
}

}  // namespace

Vector k_map(const Matrix& a, const State& vacuum, const std::vector<ChargedMultiplet>& morphisms,
             const OperatorAlgebra& observables) {
    Vector out(static_cast<Eigen::Index>(morphisms.size()));
    for (std::size_t g = 0; g < morphisms.size(); ++g) {
        require_preserving(morphisms[g], observables);
        out(static_cast<Eigen::Index>(g)) = vacuum(morphisms[g].apply(a));
    }
    return out;
}

ClassicalQuantumChannel charging_channel(const SectorDecomposition& dec, const State& vacuum,
                                         const std::vector<ChargedMultiplet>& morphisms,
                                         const OperatorAlgebra& observables) {
    const int vac = vacuum_sector(dec, vacuum);
    std::vector<State> fibres;
    for (int k = 0; k < dec.size(); ++k) {
        const auto& label = dec.sectors[k].label;
        auto it = std::find_if(morphisms.begin(), morphisms.end(), [&](const auto& m) { return m.label == label; });
        if (it == morphisms.end()) {
            if (k != vac) throw PreconditionError("charging_channel: no morphism for sector '" + label + "'");
            fibres.emplace_back(vacuum.density(), label);
            continue;
        }
        require_preserving(*it, observables);
        fibres.emplace_back(it->pull_back(vacuum.density()), label);
    }
    return ClassicalQuantumChannel(ClassifyingSpace::labels(dec.labels()), std::move(fibres));
}

ProbabilityWeight estimate_charge(const State& omega, const SectorDecomposition& dec) {
    if (omega.dim() != dec.ambient_dim()) throw DimensionError("estimate_charge: dimension mismatch");
    RealVector nu(dec.size());
    for (int k = 0; k < dec.size(); ++k) nu(k) = std::max(0.0, omega(dec.sectors[k].projection).real());
    nu /= nu.sum();
    return ProbabilityWeight(ClassifyingSpace::labels(dec.labels()), nu);
}

ChargedVectorReport induce_charged_state(const ProbabilityWeight& nu, const std::vector<ChargedMultiplet>& multiplets,
                                         const Vector& vacuum_vector, const UnitaryRep& rep,
                                         const OperatorAlgebra& observables) {
    const int d = rep.dim();
    if (vacuum_vector.size() != d) throw DimensionError("induce_charged_state: vacuum vector dimension mismatch");
    if (std::abs(vacuum_vector.norm() - 1.0) > 1e-10) throw PreconditionError("induce_charged_state: vacuum not normalized");

    std::vector<const ChargedMultiplet*> chosen;
    for (int k = 0; k < nu.size(); ++k) {
        const auto& label = nu.space()[k].name;
        auto it = std::find_if(multiplets.begin(), multiplets.end(), [&](const auto& m) { return m.label == label; });
        if (it == multiplets.end()) {
            if (nu[k] == 0.0) {
                chosen.push_back(nullptr);
                continue;
            }
            throw PreconditionError("induce_charged_state: no multiplet for label '" + label + "'");
        }
        for (const auto& b : observables.basis()) {
            const Matrix rho_b = it->apply(b);
            for (const auto& p : it->psi) {
                if (max_abs_diff(p * b, rho_b * p) > 1e-9) {
                    std::ostringstream os;
                    os << "induce_charged_state: multiplet '" << label
                       << "' violates psi A = rho(A) psi on observable basis element " << (&b - &observables.basis()[0]);
                    throw PreconditionError(os.str());
                }
            }
        }
        chosen.push_back(&*it);
    }

    ChargedVectorReport r;
    r.psi = Vector::Zero(d);
    const Matrix rho0 = vacuum_vector * vacuum_vector.adjoint();
    Matrix induced = Matrix::Zero(d, d);
    for (int k = 0; k < nu.size(); ++k) {
        if (!chosen[k] || nu[k] == 0.0) continue;
        const double amp = std::sqrt(nu[k]);
        for (const auto& p : chosen[k]->psi) r.psi += amp * (p.adjoint() * vacuum_vector);
        induced += nu[k] * chosen[k]->pull_back(rho0);
    }
    r.norm_deviation = std::abs(r.psi.norm() - 1.0);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const Matrix mf = average(matrix_unit(d, i, j), rep);
            const cplx lhs = expectation(induced, mf);
            const cplx rhs = r.psi.dot(mf * r.psi);
            r.max_deviation = std::max(r.max_deviation, std::abs(lhs - rhs));
            ++r.checked;
        }
    return r;
}

std::vector<double> sector_energies(const SectorDecomposition& dec, const Matrix& hamiltonian) {
    std::vector<double> out;
    for (const auto& s : dec.sectors) {
        const int n = s.dim_h * s.dim_v;
        const Matrix q = dec.w.middleCols(s.offset, n);
        const Matrix hc = q.adjoint() * hamiltonian * q;
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (hc + hc.adjoint()), Eigen::EigenvaluesOnly);
        out.push_back(es.eigenvalues().minCoeff());
    }
    return out;
}

std::optional<ChargedMultiplet> find_abelian_morphism(const SectorDecomposition& dec, const UnitaryRep& rep,
                                                      const State& vacuum, const std::string& label,
                                                      const std::vector<Matrix>& candidates) {
    const int k = dec.index_of(label);
    if (k < 0) throw PreconditionError("find_abelian_morphism: unknown sector '" + label + "'");
    if (dec.sectors[k].dim_v != 1) return std::nullopt;
    const int d = rep.dim();
    for (const auto& u : candidates) {
        if (u.rows() != d || u.cols() != d) continue;
        if (max_abs_diff(u.adjoint() * u, identity(d)) > 1e-10) continue;
        bool charged = true;
        for (int g = 0; g < rep.group().order() && charged; ++g) {
            const Matrix moved = rep(g) * u * rep(g).adjoint();
            const cplx c = hs_inner(u, moved) / double(d);
            charged = max_abs_diff(moved, c * u) <= 1e-10;
        }
        if (!charged) continue;
        const Matrix fibre = u.adjoint() * vacuum.density() * u;
        if (std::abs(expectation(fibre, dec.sectors[k].projection) - cplx(1.0)) <= 1e-9)
            return ChargedMultiplet(label, {u});
    }
    return std::nullopt;
}

}  // namespace opalg
