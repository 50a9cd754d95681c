// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check.
#include "rabi/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace rabi::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void lincomb(double* out, const double* y, const double* c, const double* const* k,
             std::size_t stages, std::size_t n) {
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        __m256d acc = _mm256_loadu_pd(y + i);
        for (std::size_t s = 0; s < stages; ++s)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(c[s]), _mm256_loadu_pd(k[s] + i), acc);
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n; ++i) {
        double acc = y[i];
        for (std::size_t s = 0; s < stages; ++s) acc += c[s] * k[s][i];
        out[i] = acc;
    }
}

double scaled_sq_error(const double* err, const double* y0, const double* y1, double atol,
                       double rtol, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d va = _mm256_set1_pd(atol);
    const __m256d vr = _mm256_set1_pd(rtol);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d a0 = _mm256_andnot_pd(sign, _mm256_loadu_pd(y0 + i));
        const __m256d a1 = _mm256_andnot_pd(sign, _mm256_loadu_pd(y1 + i));
        const __m256d sc = _mm256_fmadd_pd(vr, _mm256_max_pd(a0, a1), va);
        const __m256d r = _mm256_div_pd(_mm256_loadu_pd(err + i), sc);
        acc = _mm256_fmadd_pd(r, r, acc);
    }
    alignas(32) double lanes[kLanes];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        total += r * r;
    }
    return total;
}

void mul_sqrt_scaled(double* base, const double* x, double s, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d f = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
        _mm256_storeu_pd(base + i, _mm256_mul_pd(_mm256_loadu_pd(base + i), f));
    }
    for (; i < n; ++i) base[i] *= std::sqrt(x[i] * s);
}

void laguerre_step(double* next, const double* cur, const double* prev, const double* x,
                   double alpha, double beta, double inv, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d vb = _mm256_set1_pd(beta);
    const __m256d vi = _mm256_set1_pd(inv);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d t = _mm256_mul_pd(_mm256_sub_pd(va, _mm256_loadu_pd(x + i)),
                                        _mm256_loadu_pd(cur + i));
        const __m256d u = _mm256_fnmadd_pd(vb, _mm256_loadu_pd(prev + i), t);
        _mm256_storeu_pd(next + i, _mm256_mul_pd(u, vi));
    }
    for (; i < n; ++i) next[i] = ((alpha - x[i]) * cur[i] - beta * prev[i]) * inv;
}

void accumulate_complex(double cr, double ci, const double* v, double* sr, double* si,
                        std::size_t n) {
    const __m256d vr = _mm256_set1_pd(cr);
    const __m256d vi = _mm256_set1_pd(ci);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d x = _mm256_loadu_pd(v + i);
        _mm256_storeu_pd(sr + i, _mm256_fmadd_pd(vr, x, _mm256_loadu_pd(sr + i)));
        _mm256_storeu_pd(si + i, _mm256_fmadd_pd(vi, x, _mm256_loadu_pd(si + i)));
    }
    for (; i < n; ++i) {
        sr[i] += cr * v[i];
        si[i] += ci * v[i];
    }
}

void fold_harmonic(double* w, const double* sr, const double* si, double* c, double* s,
                   const double* ur, const double* ui, double scale, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d vc = _mm256_loadu_pd(c + i);
        const __m256d vsn = _mm256_loadu_pd(s + i);
        const __m256d re = _mm256_fmsub_pd(vc, _mm256_loadu_pd(sr + i),
                                           _mm256_mul_pd(vsn, _mm256_loadu_pd(si + i)));
        _mm256_storeu_pd(w + i, _mm256_fmadd_pd(vs, re, _mm256_loadu_pd(w + i)));
        const __m256d vur = _mm256_loadu_pd(ur + i);
        const __m256d vui = _mm256_loadu_pd(ui + i);
        _mm256_storeu_pd(c + i, _mm256_fmsub_pd(vc, vur, _mm256_mul_pd(vsn, vui)));
        _mm256_storeu_pd(s + i, _mm256_fmadd_pd(vsn, vur, _mm256_mul_pd(vc, vui)));
    }
    for (; i < n; ++i) {
        w[i] += scale * (c[i] * sr[i] - s[i] * si[i]);
        const double cn = c[i] * ur[i] - s[i] * ui[i];
        const double sn = s[i] * ur[i] + c[i] * ui[i];
        c[i] = cn;
        s[i] = sn;
    }
}

}  // namespace

const KernelTable& table() noexcept {
    static const KernelTable t{Backend::avx2, "avx2", axpy, lincomb, scaled_sq_error,
                               mul_sqrt_scaled, laguerre_step, accumulate_complex,
                               fold_harmonic};
    return t;
}

}  // namespace rabi::kernels::avx2
