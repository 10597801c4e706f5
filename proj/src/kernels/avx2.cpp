// Compiled with -mavx2 -mfma; only reached through the dispatcher after a
// runtime CPU check.
#include "opalg/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace opalg::kernels::avx2 {
namespace {

// std::complex<double> is layout-compatible with double[2]; one __m256d holds
// two complex numbers as (re0, im0, re1, im1).

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    // re = sum(a*c + b*d), im = sum(a*d - b*c)
    __m256d acc_re0 = _mm256_setzero_pd(), acc_im0 = _mm256_setzero_pd();
    __m256d acc_re1 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv0 = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv0 = _mm256_loadu_pd(yp + 2 * i);
        __m256d xv1 = _mm256_loadu_pd(xp + 2 * i + 4);
        __m256d yv1 = _mm256_loadu_pd(yp + 2 * i + 4);
        acc_re0 = _mm256_fmadd_pd(xv0, yv0, acc_re0);
        acc_re1 = _mm256_fmadd_pd(xv1, yv1, acc_re1);
        // swap re/im of y: (d, c) so that x*yswap = (a*d, b*c)
        __m256d ys0 = _mm256_permute_pd(yv0, 0b0101);
        __m256d ys1 = _mm256_permute_pd(yv1, 0b0101);
        acc_im0 = _mm256_fmadd_pd(xv0, ys0, acc_im0);
        acc_im1 = _mm256_fmadd_pd(xv1, ys1, acc_im1);
    }
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        acc_re0 = _mm256_fmadd_pd(xv, yv, acc_re0);
        acc_im0 = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc_im0);
    }
    acc_re0 = _mm256_add_pd(acc_re0, acc_re1);
    acc_im0 = _mm256_add_pd(acc_im0, acc_im1);
    double re = hsum(acc_re0);
    // lanes hold (a*d, b*c, ...): even lanes are +, odd lanes are -
    alignas(32) double im_lanes[4];
    _mm256_store_pd(im_lanes, acc_im0);
    double im = im_lanes[0] - im_lanes[1] + im_lanes[2] - im_lanes[3];
    for (; i < n; ++i) {
        const double a = x[i].real(), b = x[i].imag();
        const double c = y[i].real(), d = y[i].imag();
        re += a * c + b * d;
        im += a * d - b * c;
    }
    return {re, im};
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        // alpha*x = (ar*c - ai*d, ar*d + ai*c)
        __m256d xs = _mm256_permute_pd(xv, 0b0101);
        __m256d t = _mm256_mul_pd(ai, xs);
        __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yv, prod));
    }
    for (; i < n; ++i) {
        const double c = x[i].real(), d = x[i].imag();
        y[i] = {y[i].real() + alpha.real() * c - alpha.imag() * d,
                y[i].imag() + alpha.real() * d + alpha.imag() * c};
    }
}

double norm2(const cplx* x, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v0 = _mm256_loadu_pd(xp + 2 * i);
        __m256d v1 = _mm256_loadu_pd(xp + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(xp + 2 * i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void scale(cplx alpha, cplx* x, std::size_t n) {
    double* xp = reinterpret_cast<double*>(x);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        __m256d t = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0b0101));
        _mm256_storeu_pd(xp + 2 * i, _mm256_fmaddsub_pd(ar, xv, t));
    }
    for (; i < n; ++i) x[i] *= alpha;
}

double max_abs_diff(const cplx* x, const cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xp + 2 * i), _mm256_loadu_pd(yp + 2 * i));
        d = _mm256_mul_pd(d, d);
        // (re^2 + im^2) per complex lane pair
        __m256d s = _mm256_hadd_pd(d, d);
        best = _mm256_max_pd(best, s);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double m = std::sqrt(std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3])));
    for (; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

constexpr KernelTable kTable{"avx2", dotc, axpy, norm2, scale, max_abs_diff};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace opalg::kernels::avx2
