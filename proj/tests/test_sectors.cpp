#include <doctest.h>

#include <cmath>

#include "opalg/error.hpp"
#include "opalg/sectors.hpp"
#include "oracles.hpp"

using namespace opalg;

namespace {

struct Z2Chain {
    int n;
    UnitaryRep rep;
    OperatorAlgebra field;
    OperatorAlgebra obs;
    SectorDecomposition dec;
    Vector omega0;
    State vacuum;
    ChargedMultiplet flip;

    explicit Z2Chain(int sites)
        : n(sites),
          rep(UnitaryRep::tensor_power(UnitaryRep::cyclic_from_generator(FiniteGroup::cyclic(2), pauli::z()), sites)),
          field(OperatorAlgebra::full(1 << sites)),
          obs(fixed_point_algebra(field, rep)),
          dec(decompose_sectors(field, rep)),
          omega0(Vector::Unit(1 << sites, 0)),
          vacuum(State::pure(omega0)),
          flip("s1", {kron(pauli::x(), identity(1 << (sites - 1)))}) {}
};

}  // namespace

TEST_CASE("charged multiplets") {
    const auto id = ChargedMultiplet::identity("trivial", 3);
    CHECK_FALSE(id.partial);
    Rng rng(2);
    const Matrix a = random_complex(3, 3, rng);
    CHECK(max_abs_diff(id.apply(a), a) == 0.0);
    CHECK_FALSE(ChargedMultiplet("x", {pauli::x()}).partial);
    CHECK(ChargedMultiplet("x", {matrix_unit(2, 0, 0)}).partial);
    CHECK_THROWS_AS(ChargedMultiplet("x", {}), PreconditionError);
    CHECK_THROWS_AS(ChargedMultiplet("x", {identity(2), identity(3)}), DimensionError);
    // two isometries C^2 -> C^4 realized inside M_4: a Cuntz pair
    const Matrix s1 = matrix_unit(4, 0, 0) + matrix_unit(4, 2, 1);
    const Matrix s2 = matrix_unit(4, 1, 0) + matrix_unit(4, 3, 1);
    CHECK(ChargedMultiplet("c", {s1, s2}).partial);  // not isometries on all of C^4
    const Matrix rho = random_density(4, rng);
    const ChargedMultiplet m("y", {kron(pauli::y(), identity(2))});
    const Matrix z1 = kron(pauli::z(), identity(2));
    CHECK(std::abs(expectation(m.pull_back(rho), z1) - expectation(rho, m.apply(z1))) <= 1e-14);
}

TEST_CASE("decompose_sectors") {
    SUBCASE("trivial group") {
        const auto rep = UnitaryRep::trivial(FiniteGroup::trivial(), 3);
        const auto dec = decompose_sectors(OperatorAlgebra::full(3), rep);
        CHECK(dec.size() == 1);
        CHECK_FALSE(dec.field_not_full);
        CHECK(fixed_point_algebra(OperatorAlgebra::full(3), rep).dim() == 9);
    }
    SUBCASE("single qubit") {
        const auto rep = UnitaryRep::cyclic_from_generator(FiniteGroup::cyclic(2), pauli::z());
        const auto dec = decompose_sectors(OperatorAlgebra::full(2), rep);
        CHECK(dec.size() == 2);
        const auto obs = fixed_point_algebra(OperatorAlgebra::full(2), rep);
        CHECK(center(obs).dim() == obs.dim());
    }
    SUBCASE("two-site chain against the commutant oracle") {
        const Z2Chain c(2);
        CHECK(c.dec.size() == 2);
        for (const auto& s : c.dec.sectors) CHECK(s.dim_h == 2);
        CHECK(center_dimension(c.rep) == 2);
        const auto ref = oracle::commutant({c.rep(1)}, 4);
        CHECK(oracle::same_span(c.obs.basis(), ref));
        for (const auto& b : c.obs.basis()) CHECK(block_form_residual(c.dec, b) <= 1e-8);
        CHECK(block_form_residual(c.dec, kron(pauli::x(), identity(2))) > 0.5);
    }
    SUBCASE("non-full field is flagged") {
        const auto rep = UnitaryRep::cyclic_from_generator(FiniteGroup::cyclic(2), pauli::z());
        const auto dec = decompose_sectors(OperatorAlgebra::scalars(2), rep);
        CHECK(dec.field_not_full);
        CHECK(dec.size() == 2);
    }
    SUBCASE("chains n = 2..6") {
        for (int n = 2; n <= 6; ++n) {
            const auto rep =
                UnitaryRep::tensor_power(UnitaryRep::cyclic_from_generator(FiniteGroup::cyclic(2), pauli::z()), n);
            const auto dec = decompose_sectors(OperatorAlgebra::full(1 << n), rep);
            CHECK(dec.size() == 2);
            int total = 0;
            for (const auto& s : dec.sectors) total += s.dim_h * s.dim_v;
            CHECK(total == (1 << n));
            CHECK(reconstruction_residual(dec, rep) <= 1e-8);
        }
    }
}

TEST_CASE("centre is spanned by the central projections") {
    const auto rep = UnitaryRep::regular(FiniteGroup::symmetric3());
    const auto dec = decompose_sectors(OperatorAlgebra::full(6), rep);
    const auto obs = fixed_point_algebra(OperatorAlgebra::full(6), rep);
    const auto z = center(obs);
    CHECK(z.dim() == dec.size());
    CHECK(center_dimension(rep) == 3);
    for (const auto& s : dec.sectors) CHECK(z.residual(s.projection) <= 1e-9);
}

TEST_CASE("k map and charging channel on the two-site chain") {
    const Z2Chain c(2);
    CHECK(vacuum_sector(c.dec, c.vacuum) == c.dec.index_of("trivial"));
    CHECK_THROWS_AS(vacuum_sector(c.dec, State::maximally_mixed(4)), PreconditionError);
    CHECK(morphism_preservation_defect(c.flip, c.obs) <= 1e-12);
    const std::vector<ChargedMultiplet> ms{ChargedMultiplet::identity("trivial", 4), c.flip};

    const Vector k1 = k_map(identity(4), c.vacuum, ms, c.obs);
    CHECK(std::abs(k1(0) - 1.0) <= 1e-15);
    CHECK(std::abs(k1(1) - 1.0) <= 1e-15);
    const Vector kz = k_map(kron(pauli::z(), identity(2)), c.vacuum, ms, c.obs);
    CHECK(std::abs(kz(0) - 1.0) <= 1e-15);
    CHECK(std::abs(kz(1) + 1.0) <= 1e-15);
    const Vector kp = k_map(c.dec.sectors[1].projection, c.vacuum, ms, c.obs);
    CHECK(std::abs(kp(0)) <= 1e-12);
    CHECK(std::abs(kp(1) - 1.0) <= 1e-12);
    // not algebra-preserving
    const ChargedMultiplet bad("s1", {(identity(4) + kron(pauli::x(), identity(2))) / std::sqrt(2.0)});
    CHECK_THROWS_AS(k_map(identity(4), c.vacuum, {bad}, c.obs), PreconditionError);

    const auto ch = charging_channel(c.dec, c.vacuum, {c.flip}, c.obs);
    CHECK(ch.space().size() == 2);
    CHECK(max_abs_diff(apply_cq(ch, ProbabilityWeight::point_mass(ch.space(), 0)).density(), c.vacuum.density()) == 0.0);
    const Matrix half = apply_cq(ch, ProbabilityWeight::uniform(ch.space())).density();
    CHECK(max_abs_diff(half, 0.5 * (matrix_unit(4, 0, 0) + matrix_unit(4, 2, 2))) <= 1e-15);
    CHECK_THROWS_AS(charging_channel(c.dec, c.vacuum, {}, c.obs), PreconditionError);

    // duality and round trip for random nu and observables
    Rng rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const double p = u(rng);
        const ProbabilityWeight nu(ch.space(), RealVector{{p, 1 - p}});
        const Matrix a = c.obs.random_hermitian_element(rng);
        const Vector k = k_map(a, c.vacuum, ms, c.obs);
        const State img = apply_cq(ch, nu);
        CHECK(std::abs(img(a) - (p * k(0) + (1 - p) * k(1))) <= 1e-12);
        const auto back = estimate_charge(img, c.dec);
        CHECK((back.weights() - nu.weights()).cwiseAbs().maxCoeff() <= 1e-10);
        for (int g = 0; g < 2; ++g)
            for (int h = 0; h < 2; ++h)
                if (g != h) CHECK(std::abs(ch.fibres()[g](c.dec.sectors[h].projection)) <= 1e-10);
    }
}

TEST_CASE("estimate_charge") {
    const Z2Chain c(2);
    CHECK(estimate_charge(c.vacuum, c.dec)[0] == doctest::Approx(1.0));
    const auto mm = estimate_charge(State::maximally_mixed(4), c.dec);
    CHECK(mm[0] == doctest::Approx(0.5));
    CHECK(mm[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(estimate_charge(State::maximally_mixed(2), c.dec), DimensionError);
}

TEST_CASE("induce_charged_state") {
    const Z2Chain c(2);
    const auto labels = ClassifyingSpace::labels(c.dec.labels());
    SUBCASE("vacuum") {
        const auto r = induce_charged_state(ProbabilityWeight::point_mass(labels, 0),
                                            {ChargedMultiplet::identity("trivial", 4)}, c.omega0, c.rep, c.obs);
        CHECK((r.psi - c.omega0).norm() <= 1e-15);
    }
    SUBCASE("half and half") {
        const auto r = induce_charged_state(ProbabilityWeight::uniform(labels),
                                            {ChargedMultiplet::identity("trivial", 4), c.flip}, c.omega0, c.rep, c.obs);
        Vector expect = Vector::Zero(4);
        expect(0) = expect(2) = 1.0 / std::sqrt(2.0);
        CHECK((r.psi - expect).norm() <= 1e-15);
        CHECK(r.max_deviation <= 1e-8);
        CHECK(r.norm_deviation <= 1e-15);
        CHECK(r.checked == 16);
        // direct check on the even basis
        const auto ch = charging_channel(c.dec, c.vacuum, {c.flip}, c.obs);
        const State k = apply_cq(ch, ProbabilityWeight::uniform(labels));
        for (const auto& b : c.obs.basis()) CHECK(std::abs(k(b) - r.psi.dot(b * r.psi)) <= 1e-8);
    }
    SUBCASE("missing multiplet") {
        CHECK_THROWS_AS(induce_charged_state(ProbabilityWeight::uniform(labels),
                                             {ChargedMultiplet::identity("trivial", 4)}, c.omega0, c.rep, c.obs),
                        PreconditionError);
    }
    SUBCASE("mislabelled multiplet shows up as a deviation") {
        const ChargedMultiplet even("s1", {kron(pauli::x(), pauli::x())});
        const auto r = induce_charged_state(ProbabilityWeight::uniform(labels),
                                            {ChargedMultiplet::identity("trivial", 4), even}, c.omega0, c.rep, c.obs);
        CHECK(r.max_deviation > 0.1);
    }
    SUBCASE("implementing relation violated") {
        const ChargedMultiplet wrong("s1", {matrix_unit(4, 2, 0)});
        CHECK(wrong.partial);
        CHECK_THROWS_AS(induce_charged_state(ProbabilityWeight::uniform(labels),
                                             {ChargedMultiplet::identity("trivial", 4), wrong}, c.omega0, c.rep,
                                             c.obs),
                        PreconditionError);
    }
}

TEST_CASE("sector energies and abelian search") {
    const Z2Chain c(2);
    const Matrix h = -kron(pauli::x(), pauli::x()) - 0.5 * (kron(pauli::z(), identity(2)) + kron(identity(2), pauli::z()));
    const auto e = sector_energies(c.dec, h);
    REQUIRE(e.size() == 2);
    // even block spanned by |00>,|11>: [[-1,-1],[-1,1]]
    CHECK(e[0] == doctest::Approx(-std::sqrt(2.0)));
    CHECK(e[1] == doctest::Approx(-1.0));

    const auto found = find_abelian_morphism(c.dec, c.rep, c.vacuum, "s1",
                                             {kron(pauli::z(), identity(2)), kron(identity(2), pauli::x())});
    REQUIRE(found.has_value());
    CHECK(max_abs_diff(found->psi[0], kron(identity(2), pauli::x())) == 0.0);
    CHECK_FALSE(find_abelian_morphism(c.dec, c.rep, c.vacuum, "s1", {kron(pauli::z(), pauli::z())}).has_value());
    CHECK_THROWS_AS(find_abelian_morphism(c.dec, c.rep, c.vacuum, "nope", {}), PreconditionError);
}
