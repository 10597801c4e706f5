#include <doctest.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "opalg/kernels.hpp"
#include "opalg/matrix.hpp"

using namespace opalg;
using kernels::KernelTable;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

// plain loops, the reference every table is held against
cplx ref_dotc(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

}  // namespace

TEST_CASE("scalar table is listed first and the active table is available") {
    const auto tables = kernels::available();
    REQUIRE(!tables.empty());
    CHECK(tables.front()->name == "scalar");
    bool found = false;
    for (const auto* t : tables) found = found || t->name == kernels::active().name;
    CHECK(found);
    const char* forced = std::getenv("OPALG_FORCE_SCALAR");
    if (forced && std::string(forced) == "1") CHECK(kernels::active().name == "scalar");
}

TEST_CASE("every kernel table agrees with the reference loops") {
    std::mt19937_64 rng(7);
    for (const KernelTable* t : kernels::available()) {
        CAPTURE(t->name);
        for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 17u, 64u, 257u, 1000u}) {
            CAPTURE(n);
            const auto x = random_vec(n, rng);
            const auto y = random_vec(n, rng);
            const double scale = 1.0 + static_cast<double>(n);

            CHECK(std::abs(t->dotc(x.data(), y.data(), n) - ref_dotc(x, y)) <= 1e-12 * scale);
            CHECK(std::abs(t->norm2(x.data(), n) - ref_dotc(x, x).real()) <= 1e-12 * scale);

            const cplx alpha(0.3, -1.7);
            auto y1 = y;
            t->axpy(alpha, x.data(), y1.data(), n);
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(y1[i] - (y[i] + alpha * x[i])));
            CHECK(worst <= 1e-14);

            auto x1 = x;
            t->scale(alpha, x1.data(), n);
            worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(x1[i] - alpha * x[i]));
            CHECK(worst <= 1e-14);

            double ref = 0.0;
            for (std::size_t i = 0; i < n; ++i) ref = std::max(ref, std::abs(x[i] - y[i]));
            CHECK(t->max_abs_diff(x.data(), y.data(), n) == doctest::Approx(ref).epsilon(1e-15));
        }
    }
}

TEST_CASE("tables agree with each other on the matrix-level helpers") {
    std::mt19937_64 rng(11);
    const auto tables = kernels::available();
    for (int d : {1, 3, 4, 7, 16}) {
        const Matrix a = random_complex(d, d, rng);
        const Matrix b = random_complex(d, d, rng);
        const cplx ref = (a.adjoint() * b).trace();
        for (const auto* t : tables) CHECK(std::abs(t->dotc(a.data(), b.data(), a.size()) - ref) <= 1e-12 * d * d);
        CHECK(std::abs(hs_inner(a, b) - ref) <= 1e-12 * d * d);
        CHECK(frobenius(a) == doctest::Approx(a.norm()).epsilon(1e-14));
    }
}
