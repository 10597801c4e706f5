#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/matrix.hpp"
#include "opalg/tolerances.hpp"

namespace opalg {

/// One point of a classifying space: either named real coordinates
/// (e.g. beta, mu) or a symbolic label, or both.
struct ClassifyingPoint {
    std::string name;
    std::map<std::string, double> coords;

    bool operator==(const ClassifyingPoint&) const = default;
};

/// Ordered finite set of distinct points.
class ClassifyingSpace {
public:
    ClassifyingSpace() = default;
    explicit ClassifyingSpace(std::vector<ClassifyingPoint> points);
    static ClassifyingSpace labels(const std::vector<std::string>& names);

    int size() const { return static_cast<int>(points_.size()); }
    const ClassifyingPoint& operator[](int i) const { return points_[i]; }
    const std::vector<ClassifyingPoint>& points() const { return points_; }
    bool operator==(const ClassifyingSpace& o) const { return points_ == o.points_; }

private:
    std::vector<ClassifyingPoint> points_;
};

/// Non-negative normalized weights over a classifying space.
class ProbabilityWeight {
public:
    ProbabilityWeight() = default;
    ProbabilityWeight(ClassifyingSpace space, RealVector weights, double tol = Tolerances{}.state);

    static ProbabilityWeight point_mass(ClassifyingSpace space, int index);
    static ProbabilityWeight uniform(ClassifyingSpace space);

    const ClassifyingSpace& space() const { return space_; }
    const RealVector& weights() const { return weights_; }
    double operator[](int i) const { return weights_(i); }
    int size() const { return static_cast<int>(weights_.size()); }

    /// Variance of each named coordinate under the weight (empty for symbolic spaces).
    std::map<std::string, double> coordinate_variance() const;
    std::map<std::string, double> coordinate_mean() const;

private:
    ClassifyingSpace space_;
    RealVector weights_;
};

/// A c->q channel: one fibre state per point, rho -> sum_i rho_i omega_i.
class ClassicalQuantumChannel {
public:
    ClassicalQuantumChannel() = default;
    ClassicalQuantumChannel(ClassifyingSpace space, std::vector<State> fibres);

    const ClassifyingSpace& space() const { return space_; }
    const std::vector<State>& fibres() const { return fibres_; }
    int ambient_dim() const { return fibres_.empty() ? 0 : fibres_.front().dim(); }

private:
    ClassifyingSpace space_;
    std::vector<State> fibres_;
};

/// Values of a linear map on the basis of an algebra: column k holds the
/// map's value (a function on `points` points) at basis element B_k.
struct BasisMap {
    Matrix values;  // points x alg.dim()
};

struct PositivityReport {
    double unitality_residual = 0.0;
    /// min over sampled A of min_i Re map(A*A)_i, with A normalized.
    double positivity_margin = 0.0;
    /// min over points of the smallest eigenvalue of the functional's density
    /// inside the algebra (exact positivity test).
    double density_margin = 0.0;
    bool passes = false;
};

/// Checks map(1) = 1 and map(A*A) >= 0.
PositivityReport verify_positive_unital(const BasisMap& map, const OperatorAlgebra& alg, int samples = 64,
                                        std::uint64_t seed = kDefaultSeed, double tol = 1e-9);

/// Evaluation map A -> (omega_i(A))_i of the channel's fibres on an algebra basis.
BasisMap evaluation_map(const ClassicalQuantumChannel& channel, const OperatorAlgebra& alg);

/// Xi*(rho) = sum_i rho_i omega_i.
State apply_cq(const ClassicalQuantumChannel& channel, const ProbabilityWeight& rho);

/// M_{j,i} = Re tr(probe_j omega_i).
RealMatrix design_matrix(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes);

/// Predicted data M rho.
RealVector forward_data(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                        const ProbabilityWeight& rho);

struct SeparationReport {
    int rank = 0;
    int labels = 0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    bool passes = false;
    /// labels - rank: dimension of the set of weights indistinguishable by the probes.
    int nullspace_dim = 0;
};

/// Rank of the design matrix stacked with the all-ones row; passes iff the
/// rank equals the number of labels.
SeparationReport separation_check(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                                  const Tolerances& tol = {});

struct InversionResult {
    ProbabilityWeight weights;
    double residual = 0.0;      // ||M rho - data||_2
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    /// residual <= the tolerance handed to invert_cq.
    bool within_tolerance = false;
    bool unique = false;
    SeparationReport separation;
};

/// q->c channel: argmin ||M rho - data||_2 over the probability simplex.
/// Infeasible data shows up as a positive residual, never as an exception.
InversionResult invert_cq(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                          const RealVector& data, double tol = 1e-8, const Tolerances& tols = {});

/// Simplex-constrained least squares: min ||A x - b|| s.t. x >= 0, sum x = 1.
/// Primal active-set method; each subproblem is solved as a minimum-norm
/// least-squares problem on the affine hull of the free set.
struct SimplexLsqResult {
    RealVector x;
    double residual = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};
SimplexLsqResult simplex_lsq(const RealMatrix& a, const RealVector& b, int max_iterations = 100000,
                             double kkt_tol = 1e-10);

/// Among the simplex points with the same image a x as x0, the one of
/// smallest Euclidean norm (tie-break for non-unique solutions).
RealVector simplex_min_norm(const RealMatrix& a, const RealVector& x0, int max_iterations = 10000);

/// CSV of the design matrix: header "probe,<label...>", one row per probe.
std::string design_matrix_csv(const ClassicalQuantumChannel& channel, const std::vector<Matrix>& probes,
                              const std::vector<std::string>& probe_names);

}  // namespace opalg
