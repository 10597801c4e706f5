#include <doctest.h>

#include <cmath>

#include "opalg/channels.hpp"
#include "opalg/error.hpp"
#include "opalg/thermal.hpp"
#include "oracles.hpp"

using namespace opalg;

namespace {

State basis_state(int d, int i) { return State(matrix_unit(d, i, i)); }

ClassicalQuantumChannel z_channel() {
    return ClassicalQuantumChannel(ClassifyingSpace::labels({"up", "down"}), {basis_state(2, 0), basis_state(2, 1)});
}

RealVector random_simplex(int n, Rng& rng) {
    std::exponential_distribution<double> e(1.0);
    RealVector x(n);
    for (int i = 0; i < n; ++i) x(i) = e(rng);
    return x / x.sum();
}

}  // namespace

TEST_CASE("classifying spaces and weights") {
    CHECK_THROWS_AS(ClassifyingSpace::labels({"a", "a"}), PreconditionError);
    const auto sp = ClassifyingSpace::labels({"a", "b", "c"});
    CHECK_THROWS_AS(ProbabilityWeight(sp, RealVector::Constant(3, 0.5)), PreconditionError);
    CHECK_THROWS_AS(ProbabilityWeight(sp, RealVector{{1.5, -0.5, 0.0}}), PreconditionError);
    CHECK_THROWS_AS(ProbabilityWeight(sp, RealVector::Constant(2, 0.5)), DimensionError);
    const auto u = ProbabilityWeight::uniform(sp);
    CHECK(u[1] == doctest::Approx(1.0 / 3));
    CHECK(ProbabilityWeight::point_mass(sp, 2)[2] == 1.0);

    const auto grid = ThermalGrid::linear_beta(1.0, 3.0, 3).space();
    const ProbabilityWeight w(grid, RealVector{{0.5, 0.0, 0.5}});
    CHECK(w.coordinate_mean().at("beta") == doctest::Approx(2.0));
    CHECK(w.coordinate_variance().at("beta") == doctest::Approx(1.0));
    CHECK(ProbabilityWeight::uniform(sp).coordinate_variance().empty());
}

TEST_CASE("verify_positive_unital") {
    const auto full = OperatorAlgebra::full(2);
    const auto ok = verify_positive_unital(evaluation_map(z_channel(), full), full);
    CHECK(ok.passes);
    CHECK(ok.unitality_residual <= 1e-15);

    BasisMap tr_z{Matrix(1, full.dim())};
    for (int k = 0; k < full.dim(); ++k) tr_z.values(0, k) = (pauli::z() * full.basis()[k]).trace();
    const auto bad = verify_positive_unital(tr_z, full);
    CHECK_FALSE(bad.passes);
    CHECK(bad.unitality_residual == doctest::Approx(1.0));

    const HamiltonianSystem sys(pauli::z());
    const auto ch = build_thermal_channel(sys, ThermalGrid::linear_beta(0.1, 2.1, 11));
    CHECK(verify_positive_unital(evaluation_map(ch, full), full).passes);

    // unital but not positive: A -> tr(A)/2 + 2 (A_01 + A_10)
    BasisMap skew{Matrix(1, full.dim())};
    for (int k = 0; k < full.dim(); ++k) {
        const Matrix& b = full.basis()[k];
        skew.values(0, k) = 0.5 * b.trace() + 2.0 * (b(0, 1) + b(1, 0));
    }
    const auto rep = verify_positive_unital(skew, full);
    CHECK(rep.unitality_residual <= 1e-15);
    CHECK_FALSE(rep.passes);
    CHECK(rep.density_margin < 0.0);
}

TEST_CASE("apply_cq") {
    const auto ch = z_channel();
    const auto sp = ch.space();
    CHECK(max_abs_diff(apply_cq(ch, ProbabilityWeight::point_mass(sp, 1)).density(), matrix_unit(2, 1, 1)) == 0.0);
    CHECK(max_abs_diff(apply_cq(ch, ProbabilityWeight::uniform(sp)).density(), 0.5 * identity(2)) <= 1e-16);
    CHECK_THROWS_AS(apply_cq(ch, ProbabilityWeight::uniform(ClassifyingSpace::labels({"x", "y"}))), PreconditionError);

    const HamiltonianSystem sys(pauli::z());
    const auto th = build_thermal_channel(sys, ThermalGrid({{0.5, {}}, {2.0, {}}}));
    const auto mix = apply_cq(th, ProbabilityWeight(th.space(), RealVector{{0.3, 0.7}}));
    CHECK(std::abs(mix(pauli::z()) - (0.3 * -std::tanh(0.5) + 0.7 * -std::tanh(2.0))) <= 1e-14);
}

TEST_CASE("apply_cq is affine") {
    Rng rng(7);
    std::vector<State> fibres;
    for (int i = 0; i < 5; ++i) fibres.emplace_back(random_density(3, rng));
    const ClassicalQuantumChannel ch(ClassifyingSpace::labels({"a", "b", "c", "d", "e"}), fibres);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const RealVector r1 = random_simplex(5, rng), r2 = random_simplex(5, rng);
        const double s = u(rng);
        const Matrix lhs = apply_cq(ch, ProbabilityWeight(ch.space(), s * r1 + (1 - s) * r2)).density();
        const Matrix rhs = s * apply_cq(ch, ProbabilityWeight(ch.space(), r1)).density() +
                           (1 - s) * apply_cq(ch, ProbabilityWeight(ch.space(), r2)).density();
        CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("separation_check") {
    const std::vector<Matrix> z{pauli::z()};
    const auto ok = separation_check(z_channel(), z);
    CHECK(ok.passes);
    CHECK(ok.rank == 2);
    const ClassicalQuantumChannel same(ClassifyingSpace::labels({"a", "b"}), {basis_state(2, 0), basis_state(2, 0)});
    const auto bad = separation_check(same, z);
    CHECK_FALSE(bad.passes);
    CHECK(bad.rank == 1);
    CHECK(bad.nullspace_dim == 1);

    // 11-point grid, H = diag(0,1,2): a handful of probes cannot separate 11 points
    const HamiltonianSystem sys(diag({0.0, 1.0, 2.0}));
    const auto ch = build_thermal_channel(sys, ThermalGrid::linear_beta(0.2, 2.2, 11));
    const Matrix h = sys.h();
    const auto few = separation_check(ch, {h, h * h, matrix_unit(3, 0, 0)});
    CHECK_FALSE(few.passes);
    CHECK(few.rank < 11);
    // the oracle rank of the augmented design matrix agrees
    RealMatrix m(4, 11);
    m.row(0).setOnes();
    m.bottomRows(3) = design_matrix(ch, {h, h * h, matrix_unit(3, 0, 0)});
    Eigen::JacobiSVD<RealMatrix> svd(m);
    svd.setThreshold(1e-9);
    CHECK(few.rank == static_cast<int>(svd.rank()));
}

TEST_CASE("invert_cq") {
    SUBCASE("recovers a known weight") {
        Rng rng(3);
        std::vector<State> fibres;
        for (int i = 0; i < 6; ++i) fibres.emplace_back(random_density(3, rng));
        const ClassicalQuantumChannel ch(ClassifyingSpace::labels({"a", "b", "c", "d", "e", "f"}), fibres);
        std::vector<Matrix> probes;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Matrix e = matrix_unit(3, i, j);
                probes.push_back(i <= j ? Matrix(e + e.adjoint()) : Matrix(cplx(0, 1) * (e - e.adjoint())));
            }
        REQUIRE(separation_check(ch, probes).passes);
        for (int t = 0; t < 20; ++t) {
            RealVector r0 = random_simplex(6, rng);
            if (t % 4 == 0) r0.setZero(), r0(t % 6) = 1.0;  // vertices too
            const ProbabilityWeight w0(ch.space(), r0);
            const auto res = invert_cq(ch, probes, forward_data(ch, probes, w0));
            CHECK(res.unique);
            CHECK(res.converged);
            CHECK(res.residual <= 1e-10);
            CHECK((res.weights.weights() - r0).lpNorm<1>() <= 1e-6);
            CHECK(res.weights.weights().minCoeff() >= -1e-12);
            CHECK(std::abs(res.weights.weights().sum() - 1.0) <= 1e-12);
        }
    }
    SUBCASE("identity probe only") {
        const auto res = invert_cq(z_channel(), {identity(2)}, RealVector::Ones(1));
        CHECK(res.residual <= 1e-14);
        CHECK_FALSE(res.unique);
        CHECK(res.separation.nullspace_dim == 1);
        // minimum-norm tie-break
        CHECK(res.weights[0] == doctest::Approx(0.5));
    }
    SUBCASE("data outside the hull") {
        const auto res = invert_cq(z_channel(), {pauli::z()}, RealVector::Constant(1, -2.0));
        CHECK(res.residual == doctest::Approx(1.0));
        CHECK_FALSE(res.within_tolerance);
        CHECK(res.weights[1] == doctest::Approx(1.0));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(invert_cq(z_channel(), {}, RealVector()), PreconditionError);
        CHECK_THROWS_AS(invert_cq(z_channel(), {pauli::z()}, RealVector::Ones(2)), DimensionError);
    }
}

TEST_CASE("simplex_lsq against brute force on small problems") {
    Rng rng(11);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        const int m = 2 + t % 3, k = 3;
        RealMatrix a(m, k);
        RealVector b(m);
        for (int i = 0; i < m; ++i) {
            b(i) = n(rng);
            for (int j = 0; j < k; ++j) a(i, j) = n(rng);
        }
        const auto res = simplex_lsq(a, b);
        CHECK(res.converged);
        double best = 1e300;
        const int steps = 400;
        for (int i = 0; i <= steps; ++i)
            for (int j = 0; i + j <= steps; ++j) {
                RealVector x{{double(i) / steps, double(j) / steps, double(steps - i - j) / steps}};
                best = std::min(best, (a * x - b).norm());
            }
        CHECK(res.residual <= best + 1e-12);
        CHECK(res.residual >= best - 0.05);
    }
}

TEST_CASE("simplex_lsq keeps pricing on ill-conditioned designs") {
    // Gibbs columns of a wide spectrum: sigma_min ~ 1e-5, so gradients near
    // the optimum are far below any fixed absolute threshold.
    std::vector<cplx> levels;
    for (int j = 0; j < 12; ++j) levels.emplace_back(double(j * j), 0.0);
    std::vector<ThermalPoint> pts;
    for (int i = 0; i < 11; ++i) pts.push_back({0.01 * std::pow(200.0, i / 10.0), {}});
    const auto ch = build_thermal_channel(HamiltonianSystem(diag(levels)), ThermalGrid(pts));
    std::vector<Matrix> probes;
    for (int j = 0; j < 12; ++j) probes.push_back(matrix_unit(12, j, j));
    Rng rng(12);
    for (int t = 0; t < 10; ++t) {
        const RealVector r = random_simplex(11, rng);
        const auto res = invert_cq(ch, probes, forward_data(ch, probes, ProbabilityWeight(ch.space(), r)));
        CHECK(res.unique);
        CHECK(res.residual <= 1e-14);
        CHECK((res.weights.weights() - r).lpNorm<1>() <= 1e-6);
    }
}

TEST_CASE("minimum-norm tie break") {
    RealMatrix a(1, 3);
    a << 1.0, 1.0, 0.0;
    // optimal face for data 1 is the edge {x_2 = 0}
    const RealVector x = simplex_min_norm(a, RealVector{{1.0, 0.0, 0.0}});
    CHECK(x(0) == doctest::Approx(0.5));
    CHECK(x(1) == doctest::Approx(0.5));
    CHECK(x(2) == doctest::Approx(0.0));
    const RealVector u = simplex_min_norm(RealMatrix::Ones(1, 4), RealVector{{0.0, 0.0, 1.0, 0.0}});
    CHECK((u - RealVector::Constant(4, 0.25)).norm() <= 1e-12);
    // brute-force oracle on a rank-deficient 2x4 problem
    RealMatrix b(2, 4);
    b << 1.0, 0.0, 1.0, 0.5, 0.0, 1.0, 1.0, 0.5;
    const RealVector x0{{0.0, 0.0, 0.5, 0.5}};
    const RealVector m = simplex_min_norm(b, x0);
    CHECK((b * m - b * x0).norm() <= 1e-12);
    double best = 1e300;
    const int steps = 120;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j)
            for (int k = 0; i + j + k <= steps; ++k) {
                const RealVector y{{double(i) / steps, double(j) / steps, double(k) / steps,
                                    double(steps - i - j - k) / steps}};
                if ((b * y - b * x0).norm() <= 1e-9) best = std::min(best, y.norm());
            }
    CHECK(m.norm() <= best + 1e-12);
}

TEST_CASE("design matrix csv") {
    const auto csv = design_matrix_csv(z_channel(), {pauli::z()}, {"sz"});
    CHECK(csv == "probe,up,down\nsz,1,-1\n");
}
