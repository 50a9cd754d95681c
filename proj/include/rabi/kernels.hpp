// kernels.hpp: Data-parallel inner loops with a scalar reference and
// AVX2/FMA variants selected at runtime.
//
// Every routine operates on contiguous double arrays. Complex data is passed
// as interleaved (re, im) pairs, so a complex array of length n is a double
// array of length 2n. The scalar table is the reference; the vector tables
// must agree with it to rounding (see tests/test_kernels.cpp).
//
// Selection order: RABI_KERNELS environment variable ("scalar" or "avx2"),
// then the best backend the CPU reports.
#pragma once

#include <cstddef>
#include <string_view>

namespace rabi::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
    Backend backend;
    std::string_view name;

    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    // out[i] = y[i] + sum_s c[s] * k[s][i]
    void (*lincomb)(double* out, const double* y, const double* c, const double* const* k,
                    std::size_t stages, std::size_t n);

    // sum_i (err[i] / (atol + rtol * max(|y0[i]|, |y1[i]|)))^2
    double (*scaled_sq_error)(const double* err, const double* y0, const double* y1,
                              double atol, double rtol, std::size_t n);

    // base[i] *= sqrt(x[i] * s)
    void (*mul_sqrt_scaled)(double* base, const double* x, double s, std::size_t n);

    // next[i] = ((alpha - x[i]) * cur[i] - beta * prev[i]) * inv
    void (*laguerre_step)(double* next, const double* cur, const double* prev, const double* x,
                          double alpha, double beta, double inv, std::size_t n);

    // sr[i] += cr * v[i]; si[i] += ci * v[i]
    void (*accumulate_complex)(double cr, double ci, const double* v, double* sr, double* si,
                               std::size_t n);

    // w[i] += scale * (c[i] * sr[i] - s[i] * si[i]); then (c, s) <- (c, s) * (ur, ui)
    void (*fold_harmonic)(double* w, const double* sr, const double* si, double* c, double* s,
                          const double* ur, const double* ui, double scale, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// Null when the backend was not compiled in or the CPU lacks the features.
const KernelTable* avx2_table() noexcept;

// Table chosen at first use; stable for the process lifetime.
const KernelTable& active() noexcept;

bool cpu_supports_avx2() noexcept;

}  // namespace rabi::kernels
