#pragma once

// Flat complex-vector kernels behind the trace inner product, Gram-Schmidt
// and expectation values. A scalar reference and an AVX2 variant exist; the
// active table is chosen once at startup from the CPU feature flags.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace opalg::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;
    // sum_i conj(x_i) * y_i
    cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
    // y_i += alpha * x_i
    void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
    // sum_i |x_i|^2
    double (*norm2)(const cplx* x, std::size_t n);
    // x_i *= alpha
    void (*scale)(cplx alpha, cplx* x, std::size_t n);
    // max_i |x_i - y_i|
    double (*max_abs_diff)(const cplx* x, const cplx* y, std::size_t n);
};

namespace scalar {
const KernelTable& table();
}

#if defined(OPALG_WITH_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

/// Table picked at first use: AVX2 when compiled in and supported by the CPU,
/// scalar otherwise. Setting OPALG_FORCE_SCALAR=1 in the environment pins the
/// scalar path.
const KernelTable& active();

/// Every table usable on this machine, scalar first.
std::span<const KernelTable* const> available();

inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
    return active().dotc(x.data(), y.data(), x.size());
}
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double norm2(std::span<const cplx> x) { return active().norm2(x.data(), x.size()); }
inline void scale(cplx alpha, std::span<cplx> x) { active().scale(alpha, x.data(), x.size()); }
inline double max_abs_diff(std::span<const cplx> x, std::span<const cplx> y) {
    return active().max_abs_diff(x.data(), y.data(), x.size());
}

}  // namespace opalg::kernels
