#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/channels.hpp"
#include "opalg/matrix.hpp"

namespace opalg {

/// Energy H (hbar = k_B = 1) and an optional conserved number N with [H, N] = 0.
class HamiltonianSystem {
public:
    HamiltonianSystem() = default;
    explicit HamiltonianSystem(Matrix h, std::optional<Matrix> number = std::nullopt, double tol = 1e-10);

    const Matrix& h() const { return h_; }
    const std::optional<Matrix>& number() const { return n_; }
    int dim() const { return static_cast<int>(h_.rows()); }
    /// H - mu N (H when mu is absent or N is absent).
    Matrix effective(std::optional<double> mu) const;

private:
    Matrix h_;
    std::optional<Matrix> n_;
};

struct ThermalPoint {
    double beta = 1.0;
    std::optional<double> mu;
    bool operator==(const ThermalPoint&) const = default;
};

/// Finite grid of (beta, mu) points; beta > 0, points distinct.
class ThermalGrid {
public:
    ThermalGrid() = default;
    explicit ThermalGrid(std::vector<ThermalPoint> points);
    /// `count` betas evenly spaced on [lo, hi].
    static ThermalGrid linear_beta(double lo, double hi, int count);

    const std::vector<ThermalPoint>& points() const { return points_; }
    int size() const { return static_cast<int>(points_.size()); }
    /// Points named "beta=..,mu=.." with coordinates beta (and mu).
    ClassifyingSpace space() const;

private:
    std::vector<ThermalPoint> points_;
};

/// exp(-beta (H - mu N)) / Z, exponentiated after shifting by the smallest
/// eigenvalue so that the largest Boltzmann factor is exactly 1.
State gibbs_state(const HamiltonianSystem& sys, double beta, std::optional<double> mu = std::nullopt);

/// max over the supplied pairs of |tr(rho A B) - tr(rho B alpha(A))| with
/// alpha(A) = e^{-beta K} A e^{beta K}, K = H - mu N.
double kms_residual(const HamiltonianSystem& sys, double beta, std::optional<double> mu, const State& rho,
                    const std::vector<std::pair<Matrix, Matrix>>& pairs);

/// omega_{beta,mu}(A) at every grid point.
Vector thermal_function(const HamiltonianSystem& sys, const ThermalGrid& grid, const Matrix& a);

/// Fibres are the Gibbs states of the grid points.
ClassicalQuantumChannel build_thermal_channel(const HamiltonianSystem& sys, const ThermalGrid& grid);

/// Derived quantities at one grid point. The entropy is reported alongside
/// the thermal functions but is not itself an expectation value of a probe.
struct ThermalSummary {
    ThermalPoint point;
    double log_partition = 0.0;   // ln Z
    double internal_energy = 0.0; // <H>
    double free_energy = 0.0;     // -ln Z / beta (grand potential when mu is set)
    double entropy = 0.0;         // beta (<H - mu N> - free_energy)
};
ThermalSummary thermal_summary(const HamiltonianSystem& sys, const ThermalPoint& point);

/// Named probe observables.
struct Probe {
    std::string name;
    Matrix op;
};

struct ThermalVerdict {
    bool accepted = false;
    double residual = 0.0;
    ProbabilityWeight weights;
    bool unique = false;
    int nullspace_dim = 0;
    /// Spread of the fitted mixing weights over the grid coordinates; reported,
    /// not judged.
    std::map<std::string, double> mean;
    std::map<std::string, double> variance;
    std::vector<std::string> probes;
};

/// Does the measured state agree with some mixture of grid Gibbs states on
/// the probe set? Runs invert_cq restricted to `level`; accepted iff the
/// residual is <= tol.
ThermalVerdict s_thermal_check(const std::map<std::string, double>& measured, const std::vector<Probe>& level,
                               const ClassicalQuantumChannel& channel, double tol = 1e-8, const Tolerances& tols = {});

/// Nested probe sets S_1 <= S_2 <= ...; level k is checked on the union of
/// levels 1..k.
struct ObservableHierarchy {
    struct Level {
        std::string name;
        std::vector<Probe> probes;
    };
    std::vector<Level> levels;

    /// Largest residual of a level's probes against the span of the next
    /// level's probes; <= 1e-9 means properly nested.
    double nesting_defect() const;
};

struct HierarchyReport {
    std::vector<std::string> level_names;
    std::vector<ThermalVerdict> verdicts;
    /// Index of the largest accepted level, absent when none is accepted.
    std::optional<int> maximal_accepted;
    bool monotone = true;
};

HierarchyReport hierarchy_report(const std::map<std::string, double>& measured, const ObservableHierarchy& hierarchy,
                                 const ClassicalQuantumChannel& channel, double tol = 1e-8, const Tolerances& tols = {});

}  // namespace opalg
