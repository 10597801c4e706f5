#include "opalg/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "opalg/error.hpp"

namespace opalg {

HamiltonianSystem::HamiltonianSystem(Matrix h, std::optional<Matrix> number, double tol)
    : h_(std::move(h)), n_(std::move(number)) {
    if (!is_square(h_) || h_.rows() == 0) throw DimensionError("HamiltonianSystem: H must be square");
    if (hermiticity_defect(h_) > tol) throw PreconditionError("HamiltonianSystem: H is not Hermitian");
    if (n_) {
        if (n_->rows() != h_.rows() || n_->cols() != h_.cols())
            throw DimensionError("HamiltonianSystem: N has the wrong shape");
        if (hermiticity_defect(*n_) > tol) throw PreconditionError("HamiltonianSystem: N is not Hermitian");
        if (max_abs(commutator(h_, *n_)) > tol) throw PreconditionError("HamiltonianSystem: [H, N] != 0");
    }
}

Matrix HamiltonianSystem::effective(std::optional<double> mu) const {
    if (mu && n_) return h_ - *mu * *n_;
    return h_;
}

ThermalGrid::ThermalGrid(std::vector<ThermalPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(points_[i].beta > 0.0)) throw PreconditionError("ThermalGrid: beta must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (points_[i] == points_[j]) throw PreconditionError("ThermalGrid: duplicate point");
    }
}

ThermalGrid ThermalGrid::linear_beta(double lo, double hi, int count) {
    std::vector<ThermalPoint> pts;
    for (int i = 0; i < count; ++i)
        pts.push_back({count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1), std::nullopt});
    return ThermalGrid(std::move(pts));
}

ClassifyingSpace ThermalGrid::space() const {
    std::vector<ClassifyingPoint> pts;
    for (const auto& p : points_) {
        std::ostringstream os;
        os << std::setprecision(17) << "beta=" << p.beta;
        ClassifyingPoint cp;
        cp.coords["beta"] = p.beta;
        if (p.mu) {
            os << ",mu=" << *p.mu;
            cp.coords["mu"] = *p.mu;
        }
        cp.name = os.str();
        pts.push_back(std::move(cp));
    }
    return ClassifyingSpace(std::move(pts));
}

namespace {

struct Spectral {
    RealVector energies;
    Matrix vectors;
};

Spectral spectrum(const Matrix& k) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k + k.adjoint()));
    return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

State gibbs_state(const HamiltonianSystem& sys, double beta, std::optional<double> mu) {
    if (!(beta > 0.0)) throw PreconditionError("gibbs_state: beta must be positive");
    const Spectral sp = spectrum(sys.effective(mu));
    const double e0 = sp.energies.minCoeff();
    RealVector w = (-beta * (sp.energies.array() - e0)).exp();
    w /= w.sum();
    Matrix rho = sp.vectors * w.cast<cplx>().asDiagonal() * sp.vectors.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    std::ostringstream os;
    os << std::setprecision(17) << "gibbs(beta=" << beta;
    if (mu) os << ",mu=" << *mu;
    os << ")";
    return State(std::move(rho), os.str());
}

double kms_residual(const HamiltonianSystem& sys, double beta, std::optional<double> mu, const State& rho,
                    const std::vector<std::pair<Matrix, Matrix>>& pairs) {
    const Spectral sp = spectrum(sys.effective(mu));
    const RealVector fwd = (-beta * sp.energies.array()).exp();
    const RealVector bwd = (beta * sp.energies.array()).exp();
    const Matrix ef = sp.vectors * fwd.cast<cplx>().asDiagonal() * sp.vectors.adjoint();
    const Matrix eb = sp.vectors * bwd.cast<cplx>().asDiagonal() * sp.vectors.adjoint();
    double worst = 0.0;
    for (const auto& [a, b] : pairs) {
        const Matrix alpha_a = ef * a * eb;
        const cplx lhs = (rho.density() * a * b).trace();
        const cplx rhs = (rho.density() * b * alpha_a).trace();
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

Vector thermal_function(const HamiltonianSystem& sys, const ThermalGrid& grid, const Matrix& a) {
    if (a.rows() != sys.dim() || a.cols() != sys.dim()) throw DimensionError("thermal_function: dimension mismatch");
    Vector out(grid.size());
    for (int i = 0; i < grid.size(); ++i) out(i) = gibbs_state(sys, grid.points()[i].beta, grid.points()[i].mu)(a);
    return out;
}

ClassicalQuantumChannel build_thermal_channel(const HamiltonianSystem& sys, const ThermalGrid& grid) {
    std::vector<State> fibres;
    for (const auto& p : grid.points()) fibres.push_back(gibbs_state(sys, p.beta, p.mu));
    return ClassicalQuantumChannel(grid.space(), std::move(fibres));
}

ThermalSummary thermal_summary(const HamiltonianSystem& sys, const ThermalPoint& point) {
    const Spectral sp = spectrum(sys.effective(point.mu));
    const double e0 = sp.energies.minCoeff();
    const RealVector w = (-point.beta * (sp.energies.array() - e0)).exp();
    const double z_shifted = w.sum();
    const State rho = gibbs_state(sys, point.beta, point.mu);
    ThermalSummary s;
    s.point = point;
    s.log_partition = std::log(z_shifted) - point.beta * e0;
    s.internal_energy = rho(sys.h()).real();
    s.free_energy = -s.log_partition / point.beta;
    const double k_mean = (w.array() * sp.energies.array()).sum() / z_shifted;
    s.entropy = point.beta * (k_mean - s.free_energy);
    return s;
}

// ------------------------------------------------------------- criterion --

ThermalVerdict s_thermal_check(const std::map<std::string, double>& measured, const std::vector<Probe>& level,
                               const ClassicalQuantumChannel& channel, double tol, const Tolerances& tols) {
    std::vector<Matrix> ops;
    RealVector data(static_cast<Eigen::Index>(level.size()));
    ThermalVerdict v;
    for (std::size_t j = 0; j < level.size(); ++j) {
        const auto it = measured.find(level[j].name);
        if (it == measured.end()) throw PreconditionError("s_thermal_check: no measured value for probe '" + level[j].name + "'");
        ops.push_back(level[j].op);
        data(static_cast<Eigen::Index>(j)) = it->second;
        v.probes.push_back(level[j].name);
    }
    const auto inv = invert_cq(channel, ops, data, tol, tols);
    v.accepted = inv.residual <= tol;
    v.residual = inv.residual;
    v.weights = inv.weights;
    v.unique = inv.unique;
    v.nullspace_dim = inv.separation.nullspace_dim;
    v.mean = inv.weights.coordinate_mean();
    v.variance = inv.weights.coordinate_variance();
    return v;
}

namespace {

std::vector<Probe> cumulative(const ObservableHierarchy& h, std::size_t upto) {
    std::vector<Probe> out;
    std::set<std::string> seen;
    for (std::size_t k = 0; k <= upto; ++k)
        for (const auto& p : h.levels[k].probes)
            if (seen.insert(p.name).second) out.push_back(p);
    return out;
}

}  // namespace

double ObservableHierarchy::nesting_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        std::vector<Matrix> ops;
        for (const auto& p : levels[k + 1].probes) ops.push_back(p.op);
        const auto basis = orthonormalize(ops, 1e-12);
        for (const auto& p : levels[k].probes) worst = std::max(worst, span_residual(basis, p.op));
    }
    return worst;
}

HierarchyReport hierarchy_report(const std::map<std::string, double>& measured, const ObservableHierarchy& hierarchy,
                                 const ClassicalQuantumChannel& channel, double tol, const Tolerances& tols) {
    if (hierarchy.nesting_defect() > 1e-9) throw PreconditionError("hierarchy_report: levels are not nested");
    HierarchyReport r;
    for (std::size_t k = 0; k < hierarchy.levels.size(); ++k) {
        r.level_names.push_back(hierarchy.levels[k].name);
        r.verdicts.push_back(s_thermal_check(measured, cumulative(hierarchy, k), channel, tol, tols));
        if (r.verdicts.back().accepted) r.maximal_accepted = static_cast<int>(k);
        // Fitting more probes can only raise the optimum; allow solver round-off.
        if (k > 0 && r.verdicts[k].residual + 1e-12 < r.verdicts[k - 1].residual) r.monotone = false;
    }
    return r;
}

}  // namespace opalg
