// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "cuntz_oracle.hpp"
#include "opalg/channels.hpp"
#include "opalg/cuntz.hpp"
#include "opalg/dhrnet.hpp"
#include "opalg/groups.hpp"
#include "opalg/sectors.hpp"
#include "opalg/thermal.hpp"
#include "oracles.hpp"

using namespace opalg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

RealVector random_simplex(int n, Rng& rng) {
    std::exponential_distribution<double> e(1.0);
    RealVector x(n);
    for (int i = 0; i < n; ++i) x(i) = e(rng);
    return x / x.sum();
}

// The bundled spin-chain model: Z_2 by sigma_z on every site, vacuum |0..0>,
// charge carried by a flip on site 0.
struct ChainModel {
    LatticeNet net;
    OperatorAlgebra obs;
    SectorDecomposition dec;
    State vacuum;
    ChargedMultiplet flip;

    explicit ChainModel(int n)
        : net(LatticeNet::z2_chain(n)),
          obs(fixed_point_algebra(OperatorAlgebra::full(net.dim()), net.global_rep())),
          dec(decompose_sectors(OperatorAlgebra::full(net.dim()), net.global_rep())),
          vacuum(State::pure(Vector::Unit(net.dim(), 0))),
          flip(LocalizedMorphism::from_local(net, {0}, "s1", {pauli::x()}).multiplet) {}
};

Outcome sector_structure() {
    Outcome o;
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const auto net = LatticeNet::z2_chain(n);
        const auto dec = decompose_sectors(OperatorAlgebra::full(net.dim()), net.global_rep());
        int total = 0;
        for (const auto& s : dec.sectors) total += s.dim_h * s.dim_v;
        const double res = reconstruction_residual(dec, net.global_rep());
        worst = std::max(worst, res);
        o.pass = o.pass && dec.size() == 2 && center_dimension(net.global_rep()) == 2 && total == (1 << n) &&
                 res <= 1e-8;
    }
    const auto s3 = UnitaryRep::regular(FiniteGroup::symmetric3());
    const auto dec = decompose_sectors(OperatorAlgebra::full(6), s3);
    std::string dims;
    for (const auto& s : dec.sectors) dims += (dims.empty() ? "" : ",") + std::to_string(s.dim_v);
    const int centre = center_dimension(s3);
    o.pass = o.pass && dec.size() == 3 && dims == "1,1,2" && centre == 3;
    o.detail = "Z2 chains n=2..6 max residual " + fmt(worst) + "; S3 dim V (" + dims + "), centre " +
               std::to_string(centre);
    return o;
}

Outcome channel_duality() {
    Outcome o;
    Rng rng(101);
    double worst = 0.0;
    for (int n : {2, 3}) {
        const ChainModel m(n);
        const std::vector<ChargedMultiplet> ms{ChargedMultiplet::identity("trivial", m.net.dim()), m.flip};
        const auto ch = charging_channel(m.dec, m.vacuum, {m.flip}, m.obs);
        for (int t = 0; t < 100; ++t) {
            const ProbabilityWeight nu(ch.space(), random_simplex(2, rng));
            const Matrix a = m.obs.random_hermitian_element(rng);
            const Vector k = k_map(a, m.vacuum, ms, m.obs);
            const cplx lhs = apply_cq(ch, nu)(a);
            worst = std::max(worst, std::abs(lhs - (nu[0] * k(0) + nu[1] * k(1))));
        }
    }
    const HamiltonianSystem sys(pauli::z());
    const ThermalGrid grid(std::vector<ThermalPoint>{{0.5, {}}, {2.0, {}}});
    const auto ch = build_thermal_channel(sys, grid);
    for (int t = 0; t < 100; ++t) {
        const ProbabilityWeight rho(ch.space(), random_simplex(2, rng));
        const Matrix a = random_complex(2, 2, rng);
        const Vector f = thermal_function(sys, grid, a);
        worst = std::max(worst, std::abs(apply_cq(ch, rho)(a) - (rho[0] * f(0) + rho[1] * f(1))));
    }
    o.pass = worst <= 1e-12;
    o.detail = "300 pairs over 3 models, max deviation " + fmt(worst);
    return o;
}

Outcome adjunction_round_trips() {
    Outcome o;
    std::vector<cplx> levels;
    for (int j = 0; j < 12; ++j) levels.emplace_back(double(j * j), 0.0);
    const HamiltonianSystem sys(diag(levels));
    std::vector<ThermalPoint> pts;
    for (int i = 0; i < 11; ++i) pts.push_back({0.01 * std::pow(200.0, i / 10.0), {}});
    const auto ch = build_thermal_channel(sys, ThermalGrid(pts));
    std::vector<Matrix> probes;
    for (int j = 0; j < 12; ++j) probes.push_back(matrix_unit(12, j, j));
    const auto sep = separation_check(ch, probes);
    Rng rng(202);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        RealVector r0 = random_simplex(11, rng);
        if (t < 11) r0 = RealVector::Unit(11, t);
        const auto res = invert_cq(ch, probes, forward_data(ch, probes, ProbabilityWeight(ch.space(), r0)));
        worst = std::max(worst, (res.weights.weights() - r0).lpNorm<1>());
    }
    double charge = 0.0;
    for (int n : {2, 3}) {
        const ChainModel m(n);
        const auto kch = charging_channel(m.dec, m.vacuum, {m.flip}, m.obs);
        for (int t = 0; t < 50; ++t) {
            const RealVector nu = random_simplex(2, rng);
            const auto back = estimate_charge(apply_cq(kch, ProbabilityWeight(kch.space(), nu)), m.dec);
            charge = std::max(charge, (back.weights() - nu).cwiseAbs().maxCoeff());
        }
    }
    o.pass = sep.passes && worst <= 1e-6 && charge <= 1e-10;
    o.detail = "thermal 11-point grid rank " + std::to_string(sep.rank) + ", max l1 error " + fmt(worst) +
               "; charge round trip " + fmt(charge);
    return o;
}

Outcome gibbs_kms() {
    Outcome o;
    Rng rng(303);
    double worst = 0.0;
    for (int d : {2, 3, 4, 8, 12, 16}) {
        Matrix h = random_hermitian(d, rng);
        h /= h.selfadjointView<Eigen::Lower>().eigenvalues().cwiseAbs().maxCoeff();
        const HamiltonianSystem sys(h);
        for (double beta : {0.5, 1.0, 2.0}) {
            std::vector<std::pair<Matrix, Matrix>> pairs;
            for (int k = 0; k < 5; ++k) {
                Matrix a = random_complex(d, d, rng), b = random_complex(d, d, rng);
                pairs.emplace_back(a / frobenius(a), b / frobenius(b));
            }
            worst = std::max(worst, kms_residual(sys, beta, std::nullopt, gibbs_state(sys, beta), pairs));
        }
    }
    double tanh_err = 0.0;
    const HamiltonianSystem sz(pauli::z());
    for (double beta : {0.5, 1.0, 2.0})
        tanh_err = std::max(tanh_err, std::abs(gibbs_state(sz, beta)(pauli::z()).real() + std::tanh(beta)));
    o.pass = worst <= 1e-8 && tanh_err <= 1e-12;
    o.detail = "KMS max residual " + fmt(worst) + " (d<=16); -tanh(beta) error " + fmt(tanh_err);
    return o;
}

Outcome s_thermality() {
    Outcome o;
    const HamiltonianSystem sys(diag({0.0, 1.0, 4.0}));
    const auto ch = build_thermal_channel(sys, ThermalGrid::linear_beta(0.5, 1.5, 3));
    const std::vector<Probe> s1{{"one", identity(3)}, {"p0", matrix_unit(3, 0, 0)}};
    std::vector<Probe> s2 = s1;
    s2.push_back({"p1", matrix_unit(3, 1, 1)});
    const ObservableHierarchy hier{{{"S1", s1}, {"S2", s2}}};
    std::map<std::string, double> data;
    const State g = gibbs_state(sys, 1.0);
    for (const auto& p : s2) data[p.name] = g(p.op).real();
    const auto exact = hierarchy_report(data, hier, ch);
    data["p1"] += 0.1;
    const auto bent = hierarchy_report(data, hier, ch, 1e-6);
    o.pass = exact.verdicts.back().accepted && exact.verdicts.back().residual <= 1e-10 && exact.monotone &&
             bent.verdicts[0].accepted && !bent.verdicts[1].accepted && bent.monotone &&
             bent.verdicts[0].residual <= bent.verdicts[1].residual;
    o.detail = "on-grid residual " + fmt(exact.verdicts.back().residual) + "; perturbed residuals " +
               fmt(bent.verdicts[0].residual) + " / " + fmt(bent.verdicts[1].residual);
    return o;
}

Outcome dhr_criterion() {
    Outcome o;
    double worst = 0.0;
    int morphisms = 0;
    double gibbs_min = INFINITY;
    for (int n : {2, 3}) {
        const auto net = LatticeNet::z2_chain(n);
        const State vac = State::pure(Vector::Unit(net.dim(), 0));
        std::vector<LocalizedMorphism> family;
        for (int k = 0; k < n; ++k) family.push_back(LocalizedMorphism::from_local(net, {k}, "s1", {pauli::x()}));
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) family.push_back(compose(family[a], family[b]));
        for (const auto& rho : family) {
            if (rho.region == net.all_sites()) continue;  // complement algebra is C1
            ++morphisms;
            const auto rep = dhr_check(selected_state(rho, vac), vac, net, 1e-12, true);
            bool found = false;
            for (const auto& [r, d] : rep.distances)
                if (r == rho.region) {
                    found = d <= 1e-12;
                    worst = std::max(worst, d);
                }
            o.pass = o.pass && rep.passes && found;
        }
        const State g = gibbs_state(HamiltonianSystem(transverse_ising(net, 1.0, 0.5)), 1.0);
        const auto rep = dhr_check(g, vac, net, 1e-6);
        for (const auto& [r, d] : rep.distances) gibbs_min = std::min(gibbs_min, d);
        o.pass = o.pass && !rep.passes;
    }
    o.detail = std::to_string(morphisms) + " morphisms, max distance at the localization region " + fmt(worst) +
               "; coupled Gibbs min interval distance " + fmt(gibbs_min);
    return o;
}

Outcome intertwiners() {
    Outcome o;
    const auto net = LatticeNet::z2_chain(2);
    const auto r0 = LocalizedMorphism::from_local(net, {0}, "s1", {pauli::x()});
    const auto r1 = LocalizedMorphism::from_local(net, {1}, "s1", {pauli::x()});
    const auto sp = solve_intertwiners(net, r0, r1);
    const Matrix xx = kron(pauli::x(), pauli::x());
    const double in_span = sp.basis.empty() ? INFINITY : span_residual(orthonormalize(sp.basis, 1e-9), xx);
    const auto even = region_algebra(net, net.all_sites(), true);
    double direct = 0.0;
    for (const auto& b : even.basis())
        direct = std::max(direct, max_abs_diff(xx * apply_morphism(net, r0, b), apply_morphism(net, r1, b) * xx));
    const auto none = solve_intertwiners(net, LocalizedMorphism::identity(net), r0);
    o.pass = in_span <= 1e-10 && direct <= 1e-10 && sp.verification_residual <= 1e-10 && none.basis.empty();
    o.detail = "dim " + std::to_string(sp.basis.size()) + ", XX span residual " + fmt(in_span) +
               ", T rho(A) - sigma(A) T " + fmt(direct) + "; identity vs flip dim " + std::to_string(none.basis.size());
    return o;
}

Outcome conditional_expectation() {
    Outcome o;
    Rng rng(808);
    double idem = 0.0, unit = 0.0, pos = 0.0, bimod = 0.0;
    for (const auto& rep : {UnitaryRep::tensor_power(
                                UnitaryRep::cyclic_from_generator(FiniteGroup::cyclic(2), pauli::z()), 3),
                            UnitaryRep::regular(FiniteGroup::symmetric3()),
                            UnitaryRep::regular(FiniteGroup::quaternion8())}) {
        const int d = rep.dim();
        const auto obs = fixed_point_algebra(OperatorAlgebra::full(d), rep);
        unit = std::max(unit, max_abs_diff(average(identity(d), rep), identity(d)));
        for (int t = 0; t < 100; ++t) {
            const Matrix f = random_complex(d, d, rng);
            const Matrix mf = average(f, rep);
            idem = std::max(idem, max_abs_diff(average(mf, rep), mf));
            const Matrix pp = average(f.adjoint() * f, rep);
            pos = std::max(pos, -Eigen::SelfAdjointEigenSolver<Matrix>(pp).eigenvalues().minCoeff());
            const Matrix a = obs.random_hermitian_element(rng) + cplx(0, 1) * obs.random_hermitian_element(rng);
            const Matrix b = obs.random_hermitian_element(rng);
            bimod = std::max(bimod, max_abs_diff(average(a * f * b, rep), a * mf * b));
        }
    }
    const double worst = std::max({idem, unit, pos, bimod});
    o.pass = worst <= 1e-9;
    o.detail = "idempotence " + fmt(idem) + ", unitality " + fmt(unit) + ", negativity " + fmt(pos) + ", bimodule " +
               fmt(bimod);
    return o;
}

Outcome cuntz_engine() {
    Outcome o;
    std::mt19937_64 rng(909);
    long long strings = 0;
    int failures = 0;
    for (int t = 0; t < 1000; ++t) {
        const int d = 2 + t % 2;
        const auto p = oracle::random_polynomial(d, 2, 6, rng);
        const auto q = oracle::random_polynomial(d, 2, 6, rng);
        const int n = oracle::fock_agreement(p, q, 12, rng);
        if (n < 0) ++failures;
        strings += std::max(n, 0);
    }
    const bool unital = cuntz::canonical_endomorphism(cuntz::Polynomial::one(2)) == cuntz::Polynomial::one(2) &&
                        cuntz::canonical_endomorphism(cuntz::Polynomial::one(3)) == cuntz::Polynomial::one(3);
    int mult_fail = 0;
    for (int t = 0; t < 200; ++t) {
        const int d = 2 + t % 2;
        const auto p = oracle::random_polynomial(d, 3, 4, rng);
        const auto q = oracle::random_polynomial(d, 3, 4, rng);
        if (!(cuntz::canonical_endomorphism(cuntz::multiply(p, q)) ==
              cuntz::multiply(cuntz::canonical_endomorphism(p), cuntz::canonical_endomorphism(q))))
            ++mult_fail;
    }
    o.pass = failures == 0 && unital && mult_fail == 0;
    o.detail = "1000 pairs, " + std::to_string(strings) + " Fock strings checked exactly, " +
               std::to_string(failures) + " mismatches; sigma(1) = 1 " + (unital ? "yes" : "no") + "; " +
               std::to_string(mult_fail) + "/200 multiplicativity failures";
    return o;
}

Outcome charged_vector() {
    Outcome o;
    const ChainModel m(2);
    const auto labels = ClassifyingSpace::labels(m.dec.labels());
    const ProbabilityWeight nu(labels, RealVector{{0.5, 0.5}});
    const auto rep = induce_charged_state(nu, {ChargedMultiplet::identity("trivial", 4), m.flip},
                                          Vector::Unit(4, 0), m.net.global_rep(), m.obs);
    const State k = apply_cq(charging_channel(m.dec, m.vacuum, {m.flip}, m.obs), nu);
    double direct = 0.0;
    for (const auto& b : m.obs.basis()) direct = std::max(direct, std::abs(k(b) - rep.psi.dot(b * rep.psi)));
    o.pass = rep.max_deviation <= 1e-8 && direct <= 1e-8;
    o.detail = std::to_string(rep.checked) + " field matrix units, max deviation " + fmt(rep.max_deviation) + "; " +
               std::to_string(m.obs.dim()) + " even basis elements " + fmt(direct);
    return o;
}

Outcome haag_duality() {
    Outcome o;
    int regions = 0;
    for (int n = 2; n <= 5; ++n) {
        const auto net = LatticeNet::z2_chain(n);
        for (const auto& r : net.intervals()) {
            const auto h = haag_duality_check(net, r, false);
            o.pass = o.pass && h.passes && h.defect == 0;
            ++regions;
        }
    }
    const auto net = LatticeNet::z2_chain(2);
    const auto obs = haag_duality_check(net, {1}, true);
    o.pass = o.pass && obs.defect > 0;
    o.detail = "field net defect 0 on " + std::to_string(regions) + " intervals (n<=5); observable net {1} defect " +
               std::to_string(obs.defect) + " (" + std::to_string(obs.lhs_dim) + " vs " +
               std::to_string(obs.rhs_dim) + ")";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"sector structure", sector_structure},
        {"channel duality", channel_duality},
        {"adjunction round trips", adjunction_round_trips},
        {"Gibbs/KMS", gibbs_kms},
        {"S-thermality criterion", s_thermality},
        {"DHR criterion", dhr_criterion},
        {"intertwiners", intertwiners},
        {"conditional expectation", conditional_expectation},
        {"Cuntz engine", cuntz_engine},
        {"charged-vector identity", charged_vector},
        {"Haag duality", haag_duality},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
