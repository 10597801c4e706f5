#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "opalg/channels.hpp"
#include "opalg/error.hpp"

namespace opalg {
namespace {

// Orthonormal basis of {z : sum z = 0} in R^k, as the trailing Householder
// columns of the all-ones vector.
RealMatrix simplex_tangent_basis(int k) {
    if (k <= 1) return RealMatrix(k, 0);
    RealMatrix ones = RealMatrix::Ones(k, 1);
    Eigen::HouseholderQR<RealMatrix> qr(ones);
    RealMatrix q = qr.householderQ();
    return q.rightCols(k - 1);
}

struct Multipliers {
    RealVector mu;  // g_i + lambda, zero on the free set at optimality
    double lambda = 0.0;
};

Multipliers multipliers(const RealMatrix& a, const RealVector& b, const RealVector& x, const std::vector<int>& free) {
    const RealVector g = a.transpose() * (a * x - b);
    Multipliers m;
    double s = 0.0;
    for (int i : free) s += g(i);
    m.lambda = free.empty() ? -g.minCoeff() : -s / double(free.size());
    m.mu = g.array() + m.lambda;
    return m;
}

double kkt_residual(const RealMatrix& a, const RealVector& b, const RealVector& x) {
    std::vector<int> support;
    for (int i = 0; i < x.size(); ++i)
        if (x(i) > 0.0) support.push_back(i);
    const auto m = multipliers(a, b, x, support);
    double worst = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        if (x(i) > 0.0) worst = std::max(worst, std::abs(m.mu(i)));
        worst = std::max(worst, -m.mu(i));
    }
    return worst;
}

}  // namespace

SimplexLsqResult simplex_lsq(const RealMatrix& a, const RealVector& b, int max_iterations, double kkt_tol) {
    const int n = static_cast<int>(a.cols());
    if (n == 0) throw DimensionError("simplex_lsq: no unknowns");
    if (a.rows() != b.size()) throw DimensionError("simplex_lsq: data length mismatch");

    SimplexLsqResult res;
    int start = 0;
    double best = INFINITY;
    for (int i = 0; i < n; ++i) {
        const double r = (a.col(i) - b).norm();
        if (r < best) {
            best = r;
            start = i;
        }
    }
    RealVector x = RealVector::Zero(n);
    x(start) = 1.0;
    std::vector<int> free{start};
    const double step_floor = 1e-15 * std::max(1.0, b.norm());
    // Gradients scale with sigma^2, so an absolute threshold stops early on
    // ill-conditioned designs. Price down to the rounding level of A^T r.
    const double a_norm = a.norm();
    const double price_floor =
        std::min(kkt_tol, 16.0 * std::numeric_limits<double>::epsilon() * a_norm * (a_norm + b.norm()));

    int it = 0;
    for (; it < max_iterations; ++it) {
        // Equality-constrained subproblem on the free set.
        const int k = static_cast<int>(free.size());
        const RealMatrix tangent = simplex_tangent_basis(k);
        RealVector p_free = RealVector::Zero(k);
        if (tangent.cols() > 0) {
            RealMatrix af(a.rows(), k);
            RealVector xf(k);
            for (int t = 0; t < k; ++t) {
                af.col(t) = a.col(free[t]);
                xf(t) = x(free[t]);
            }
            const RealMatrix reduced = af * tangent;
            Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(reduced);
            cod.setThreshold(1e-13);
            const RealVector y = cod.solve(b - af * xf);
            p_free = tangent * y;
            RealVector ap = af * p_free;
            if (ap.norm() <= step_floor) p_free.setZero();
        }

        if (p_free.norm() > 0.0) {
            double alpha = 1.0;
            int blocking = -1;
            for (int t = 0; t < k; ++t)
                if (p_free(t) < 0.0) {
                    const double lim = -x(free[t]) / p_free(t);
                    if (lim < alpha) {
                        alpha = lim;
                        blocking = t;
                    }
                }
            for (int t = 0; t < k; ++t) x(free[t]) += alpha * p_free(t);
            if (blocking >= 0) x(free[blocking]) = 0.0;
            std::vector<int> kept;
            for (int i : free) {
                if (x(i) <= 1e-300) {
                    x(i) = 0.0;
                } else {
                    kept.push_back(i);
                }
            }
            free.swap(kept);
            if (alpha < 1.0) continue;
        }

        // Stationary on the free set: price out the fixed variables.
        const auto m = multipliers(a, b, x, free);
        int enter = -1;
        double most_negative = -price_floor;
        for (int i = 0; i < n; ++i) {
            if (std::find(free.begin(), free.end(), i) != free.end()) continue;
            if (m.mu(i) < most_negative) {
                most_negative = m.mu(i);
                enter = i;
            }
        }
        if (enter < 0) {
            res.converged = true;
            break;
        }
        // Move toward the entering vertex by exact line search so that it
        // joins the free set with positive weight.
        RealVector d = -x;
        d(enter) += 1.0;
        const RealVector ad = a * d;
        const double slope = ad.dot(a * x - b);
        const double curv = ad.squaredNorm();
        const double alpha = curv > 0.0 ? std::clamp(-slope / curv, 0.0, 1.0) : 1.0;
        if (alpha <= 0.0) {
            res.converged = true;
            break;
        }
        x += alpha * d;
        free.clear();
        for (int i = 0; i < n; ++i) {
            if (x(i) <= 1e-300) {
                x(i) = 0.0;
            } else {
                free.push_back(i);
            }
        }
    }

    for (int i = 0; i < n; ++i) x(i) = std::max(x(i), 0.0);
    x /= x.sum();
    res.x = x;
    res.iterations = it;
    res.residual = (a * x - b).norm();
    res.kkt_residual = kkt_residual(a, b, x);
    return res;
}

RealVector simplex_min_norm(const RealMatrix& a, const RealVector& x0, int max_iterations) {
    const int n = static_cast<int>(a.cols());
    if (x0.size() != n) throw DimensionError("simplex_min_norm: length mismatch");
    RealMatrix c(a.rows() + 1, n);
    c.topRows(a.rows()) = a;
    c.bottomRows(1).setOnes();
    const RealVector target = c * x0;
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());

    RealVector x = x0;
    std::vector<char> in_free(n, 0);
    for (int i = 0; i < n; ++i) in_free[i] = x(i) > 0.0;

    for (int it = 0; it < max_iterations; ++it) {
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (in_free[i]) free.push_back(i);
        const int k = static_cast<int>(free.size());
        RealMatrix cf(c.rows(), k);
        RealVector xf(k);
        for (int t = 0; t < k; ++t) {
            cf.col(t) = c.col(free[t]);
            xf(t) = x(free[t]);
        }
        // Minimum-norm point of the affine set {C_F z = target}.
        Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(cf);
        cod.setThreshold(1e-13);
        const RealVector step = RealVector(cod.solve(target)) - xf;

        if (step.norm() > 1e-15) {
            double alpha = 1.0;
            for (int t = 0; t < k; ++t)
                if (step(t) < 0.0) alpha = std::min(alpha, -xf(t) / step(t));
            for (int t = 0; t < k; ++t) {
                x(free[t]) = xf(t) + alpha * step(t);
                if (x(free[t]) <= 1e-300 || (alpha < 1.0 && step(t) < 0.0 && -xf(t) / step(t) <= alpha)) {
                    x(free[t]) = 0.0;
                    in_free[free[t]] = 0;
                }
            }
            if (alpha < 1.0) continue;
        }

        // Multipliers of the equality constraints; a fixed variable enters
        // when raising it would lower the norm.
        Eigen::CompleteOrthogonalDecomposition<RealMatrix> dual(cf.transpose());
        dual.setThreshold(1e-13);
        const RealVector lambda = dual.solve(RealVector(xf + (k > 0 ? step : RealVector())));
        const RealVector price = c.transpose() * lambda;
        int enter = -1;
        double best = 1e-12 * scale;
        for (int i = 0; i < n; ++i)
            if (!in_free[i] && price(i) > best) {
                best = price(i);
                enter = i;
            }
        if (enter < 0) break;
        in_free[enter] = 1;
    }
    for (int i = 0; i < n; ++i) x(i) = std::max(x(i), 0.0);
    return x / x.sum();
}

}  // namespace opalg
