#include <doctest.h>

#include "opalg/algebra.hpp"
#include "opalg/error.hpp"
#include "oracles.hpp"

using namespace opalg;

namespace {

std::vector<Matrix> diag_units(int d) {
    std::vector<Matrix> out;
    for (int i = 0; i < d; ++i) out.push_back(matrix_unit(d, i, i));
    return out;
}

// M_2 (x) 1_2 (+) C on C^5
std::vector<Matrix> block_generators() {
    Matrix a = Matrix::Zero(5, 5);
    a.topLeftCorner(4, 4) = kron(pauli::x(), identity(2));
    Matrix b = Matrix::Zero(5, 5);
    b.topLeftCorner(4, 4) = kron(pauli::z(), identity(2));
    Matrix c = Matrix::Zero(5, 5);
    c(4, 4) = 1.0;
    return {a, b, c};
}

}  // namespace

TEST_CASE("matrix helpers") {
    CHECK(max_abs_diff(kron(pauli::x(), pauli::z()), oracle::kron(oracle::sx(), oracle::sz())) == 0.0);
    CHECK(max_abs_diff(commutator(pauli::x(), pauli::y()), cplx(0, 2) * pauli::z()) <= 1e-15);
    CHECK(kron_all({pauli::x(), pauli::x(), identity(2)}).rows() == 8);
    CHECK(hermiticity_defect(pauli::y()) == 0.0);
    Rng rng(3);
    const Matrix u = random_unitary(6, rng);
    CHECK(max_abs_diff(u.adjoint() * u, identity(6)) <= 1e-12);
    const Matrix rho = random_density(5, rng);
    const auto defects = density_defects(rho);
    CHECK(defects.min_eigenvalue > 0.0);
    CHECK(std::abs(defects.trace_error) <= 1e-12);
}

TEST_CASE("orthonormalize drops dependent vectors") {
    Rng rng(5);
    const Matrix a = random_complex(3, 3, rng);
    const Matrix b = random_complex(3, 3, rng);
    const auto basis = orthonormalize({a, b, a + 2.0 * b, cplx(0, 1) * a}, 1e-9);
    CHECK(basis.size() == 2);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            CHECK(std::abs(hs_inner(basis[i], basis[j]) - cplx(i == j ? 1.0 : 0.0)) <= 1e-12);
    CHECK(span_residual(basis, a - b) <= 1e-12);
}

TEST_CASE("full, scalars and generated algebras") {
    const auto full = OperatorAlgebra::full(3);
    CHECK(full.dim() == 9);
    CHECK(full.orthonormality_defect() == 0.0);
    CHECK(OperatorAlgebra::scalars(4).dim() == 1);

    const auto diag = generate_algebra({matrix_unit(3, 0, 0)}, true);
    CHECK(diag.dim() == 2);
    CHECK(diag.closure_defect() <= 1e-12);

    const auto pauli_alg = generate_algebra({pauli::x(), pauli::z()}, true);
    CHECK(pauli_alg.dim() == 4);

    const auto blocks = generate_algebra(block_generators(), true);
    CHECK(blocks.dim() == 5);
    CHECK(blocks.contains(identity(5), 1e-9));
}

TEST_CASE("commutant matches the Kronecker nullspace oracle") {
    Rng rng(17);
    std::vector<std::vector<Matrix>> cases{
        {identity(3)},
        {pauli::z()},
        diag_units(4),
        block_generators(),
        {kron(pauli::x(), identity(3)), kron(pauli::z(), identity(3))},
        {random_hermitian(4, rng)},
    };
    for (const auto& gens : cases) {
        const auto alg = generate_algebra(gens, true);
        const auto comm = commutant(alg);
        const int d = alg.ambient_dim();
        const auto ref = oracle::commutant(alg.basis(), d);
        CAPTURE(d);
        CHECK(comm.dim() == static_cast<int>(ref.size()));
        CHECK(oracle::same_span(comm.basis(), ref));
        for (const auto& x : comm.basis())
            for (const auto& b : alg.basis()) CHECK(frobenius(commutator(x, b)) <= 1e-9);
    }
}

TEST_CASE("double commutant and centre") {
    const auto alg = generate_algebra(block_generators(), true);
    const auto comm = commutant(alg);
    CHECK(comm.dim() == 5);  // M_2 (x) 1 has commutant 1 (x) M_2, plus C on the last line
    CHECK(same_span(commutant(comm), alg, 1e-8));

    const auto z = center(alg);
    CHECK(z.dim() == 2);
    const auto ref = oracle::commutant(alg.basis(), 5);
    // centre = alg intersected with its commutant
    for (const auto& c : z.basis()) {
        CHECK(alg.residual(c) <= 1e-9);
        CHECK(oracle::span_residual(ref, c) <= 1e-9);
    }
    const auto proj = minimal_central_projections(alg);
    REQUIRE(proj.size() == 2);
    CHECK(proj[0].trace().real() == doctest::Approx(4.0));
    CHECK(proj[1].trace().real() == doctest::Approx(1.0));
    Matrix sum = proj[0] + proj[1];
    CHECK(max_abs_diff(sum, identity(5)) <= 1e-9);
    for (const auto& p : proj) CHECK(max_abs_diff(p * p, p) <= 1e-9);
}

TEST_CASE("commutant is seed independent as a span") {
    const auto alg = generate_algebra({kron(pauli::x(), identity(2)), kron(pauli::z(), identity(2))}, true);
    const auto c0 = commutant(alg, {}, 0);
    const auto c1 = commutant(alg, {}, 12345);
    CHECK(same_span(c0, c1, 1e-8));
}

TEST_CASE("states") {
    CHECK_THROWS_AS(State(pauli::z()), PreconditionError);
    const State m = State::maximally_mixed(4);
    CHECK(std::abs(m(identity(4)) - cplx(1.0)) <= 1e-15);
    Vector v = Vector::Zero(2);
    v(1) = 1.0;
    const State s = State::pure(v);
    CHECK(s(pauli::z()).real() == doctest::Approx(-1.0));

    const auto diag = generate_algebra({pauli::z()}, true);
    const State plus = State::pure(Vector::Ones(2) / std::sqrt(2.0));
    // |+> and the maximally mixed state agree on the diagonal algebra only
    CHECK(state_distance_mod(plus, State::maximally_mixed(2), diag) <= 1e-15);
    CHECK(state_distance_mod(plus, State::maximally_mixed(2), OperatorAlgebra::full(2)) > 0.1);
}

TEST_CASE("dimension errors") {
    CHECK_THROWS_AS(state_distance_mod(State::maximally_mixed(2), State::maximally_mixed(3), OperatorAlgebra::full(2)),
                    DimensionError);
}
