#include "opalg/channels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "opalg/error.hpp"

namespace opalg {

ClassifyingSpace::ClassifyingSpace(std::vector<ClassifyingPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (points_[i] == points_[j]) throw PreconditionError("ClassifyingSpace: duplicate point");
}

ClassifyingSpace ClassifyingSpace::labels(const std::vector<std::string>& names) {
    std::vector<ClassifyingPoint> pts;
    for (const auto& n : names) pts.push_back({n, {}});
    return ClassifyingSpace(std::move(pts));
}

ProbabilityWeight::ProbabilityWeight(ClassifyingSpace space, RealVector weights, double tol)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size()) throw DimensionError("ProbabilityWeight: size does not match space");
    if (weights_.size() == 0) throw PreconditionError("ProbabilityWeight: empty");
    if (weights_.minCoeff() < -1e-12) throw PreconditionError("ProbabilityWeight: negative weight");
    if (std::abs(weights_.sum() - 1.0) > tol) throw PreconditionError("ProbabilityWeight: weights do not sum to 1");
}

ProbabilityWeight ProbabilityWeight::point_mass(ClassifyingSpace space, int index) {
    RealVector w = RealVector::Zero(space.size());
    w(index) = 1.0;
    return ProbabilityWeight(std::move(space), std::move(w));
}

ProbabilityWeight ProbabilityWeight::uniform(ClassifyingSpace space) {
    const int n = space.size();
    return ProbabilityWeight(std::move(space), RealVector::Constant(n, 1.0 / n));
}

std::map<std::string, double> ProbabilityWeight::coordinate_mean() const {
    std::map<std::string, double> mean;
    for (int i = 0; i < size(); ++i)
        for (const auto& [k, v] : space_[i].coords) mean[k] += weights_(i) * v;
    return mean;
}

std::map<std::string, double> ProbabilityWeight::coordinate_variance() const {
    const auto mean = coordinate_mean();
    std::map<std::string, double> var;
    for (int i = 0; i < size(); ++i)
        for (const auto& [k, v] : space_[i].coords) var[k] += weights_(i) * (v - mean.at(k)) * (v - mean.at(k));
    return var;
}

ClassicalQuantumChannel::ClassicalQuantumChannel(ClassifyingSpace space, std::vector<State> fibres)
    : space_(std::move(space)), fibres_(std::move(fibres)) {
    if (static_cast<int>(fibres_.size()) != space_.size())
        throw DimensionError("ClassicalQuantumChannel: one fibre state per point required");
    for (const auto& f : fibres_)
        if (f.dim() != fibres_.front().dim()) throw DimensionError("ClassicalQuantumChannel: fibres differ in dimension");
}

// ------------------------------------------------------------ positivity --

BasisMap evaluation_map(const ClassicalQuantumChannel& channel, const OperatorAlgebra& alg) {
    BasisMap m;
    m.values = Matrix(channel.space().size(), alg.dim());
    for (int i = 0; i < channel.space().size(); ++i)
        for (int k = 0; k < alg.dim(); ++k) m.values(i, k) = channel.fibres()[i](alg.basis()[k]);
    return m;
}

PositivityReport verify_positive_unital(const BasisMap& map, const OperatorAlgebra& alg, int samples,
                                        std::uint64_t seed, double tol) {
    if (map.values.cols() != alg.dim()) throw DimensionError("verify_positive_unital: map/basis size mismatch");
    PositivityReport r;
    const int d = alg.ambient_dim();
    const Vector unit_coords = alg.coordinates(identity(d));
    const Vector at_unit = map.values * unit_coords;
    r.unitality_residual = (at_unit.array() - cplx(1.0)).abs().maxCoeff();

    Rng rng(seed);
    std::normal_distribution<double> nd;
    r.positivity_margin = INFINITY;
    for (int s = 0; s < samples; ++s) {
        Vector c(alg.dim());
        for (int k = 0; k < alg.dim(); ++k) c(k) = cplx(nd(rng), nd(rng));
        Matrix a = alg.from_coordinates(c);
        a /= std::max(frobenius(a), 1e-300);
        const Vector val = map.values * alg.coordinates(a.adjoint() * a);
        r.positivity_margin = std::min(r.positivity_margin, val.real().minCoeff());
    }
    // phi_i(X) = tr(R_i X) with R_i = sum_k f_ik B_k* in alg; positivity on a
    // *-algebra is R_i >= 0.
    r.density_margin = INFINITY;
    for (Eigen::Index i = 0; i < map.values.rows(); ++i) {
        Matrix rd = Matrix::Zero(d, d);
        for (int k = 0; k < alg.dim(); ++k) rd += map.values(i, k) * alg.basis()[k].adjoint();
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rd + rd.adjoint()), Eigen::EigenvaluesOnly);
        r.density_margin = std::min(r.density_margin, es.eigenvalues().minCoeff());
    }
    r.passes = r.unitality_residual <= tol && r.positivity_margin >= -tol && r.density_margin >= -tol;
    return r;
}

// --------------------------------------------------------------- forward --

State apply_cq(const ClassicalQuantumChannel& channel, const ProbabilityWeight& rho) {
    if (!(rho.space() == channel.space())) throw PreconditionError("apply_cq: classifying spaces differ");
    const int d = channel.ambient_dim();
    Matrix acc = Matrix::Zero(d, d);
    for (int i = 0; i < rho.size(); ++i)
        if (rho[i] != 0.0) kernels::axpy(rho[i], flat(channel.fibres()[i].density()), flat(acc));
    return State(std::move(acc), "mixture");
}

RealMatrix design_matrix(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes) {
    const int d = channel.ambient_dim();
    RealMatrix m(static_cast<Eigen::Index>(probes.size()), channel.space().size());
    for (std::size_t j = 0; j < probes.size(); ++j) {
        if (probes[j].rows() != d || probes[j].cols() != d) throw DimensionError("design_matrix: probe dimension mismatch");
        for (int i = 0; i < channel.space().size(); ++i)
            m(static_cast<Eigen::Index>(j), i) = channel.fibres()[i](probes[j]).real();
    }
    return m;
}

RealVector forward_data(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                        const ProbabilityWeight& rho) {
    return design_matrix(channel, probes) * rho.weights();
}

SeparationReport separation_check(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                                  const Tolerances& tol) {
    const RealMatrix m = design_matrix(channel, probes);
    const int n = channel.space().size();
    RealMatrix stacked(m.rows() + 1, n);
    stacked.topRows(m.rows()) = m;
    stacked.row(m.rows()).setOnes();
    Eigen::JacobiSVD<RealMatrix> svd(stacked);
    const RealVector& sv = svd.singularValues();
    SeparationReport r;
    r.labels = n;
    r.sigma_max = sv.size() ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank * std::max(r.sigma_max, 1e-300)) ++r.rank;
    r.sigma_min = sv.size() >= n ? sv(n - 1) : 0.0;
    r.passes = r.rank == n;
    r.nullspace_dim = n - r.rank;
    return r;
}

InversionResult invert_cq(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                          const RealVector& data, double tol, const Tolerances& tols) {
    if (probes.empty()) throw PreconditionError("invert_cq: no probes");
    if (static_cast<std::size_t>(data.size()) != probes.size())
        throw DimensionError("invert_cq: one data value per probe required");
    const RealMatrix m = design_matrix(channel, probes);
    const auto sol = simplex_lsq(m, data);
    InversionResult r;
    r.separation = separation_check(channel, probes, tols);
    r.unique = r.separation.passes;
    RealVector x = sol.x;
    if (!r.unique) {
        const RealVector tie = simplex_min_norm(m, x);
        if ((m * tie - data).norm() <= sol.residual + 1e-12 * std::max(1.0, data.norm())) x = tie;
    }
    r.weights = ProbabilityWeight(channel.space(), x);
    r.residual = (m * x - data).norm();
    r.kkt_residual = sol.kkt_residual;
    r.iterations = sol.iterations;
    r.converged = sol.converged;
    r.within_tolerance = r.residual <= tol;
    return r;
}

std::string design_matrix_csv(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                              const std::vector<std::string>& probe_names) {
    const RealMatrix m = design_matrix(channel, probes);
    std::ostringstream os;
    os << std::setprecision(17);
    os << "probe";
    for (const auto& p : channel.space().points()) os << ',' << p.name;
    os << '\n';
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        os << (static_cast<std::size_t>(j) < probe_names.size() ? probe_names[j] : "p" + std::to_string(j));
        for (Eigen::Index i = 0; i < m.cols(); ++i) os << ',' << m(j, i);
        os << '\n';
    }
    return os.str();
}

}  // namespace opalg
