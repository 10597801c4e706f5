#include "opalg/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace opalg::kernels::scalar {
namespace {

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = x[i].real(), b = x[i].imag();
        const double c = y[i].real(), d = y[i].imag();
        re += a * c + b * d;
        im += a * d - b * c;
    }
    return {re, im};
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double c = x[i].real(), d = x[i].imag();
        y[i] = {y[i].real() + ar * c - ai * d, y[i].imag() + ar * d + ai * c};
    }
}

double norm2(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void scale(cplx alpha, cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double max_abs_diff(const cplx* x, const cplx* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

constexpr KernelTable kTable{"scalar", dotc, axpy, norm2, scale, max_abs_diff};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace opalg::kernels::scalar
