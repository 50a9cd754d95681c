#include "rabi/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rabi::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lincomb(double* out, const double* y, const double* c, const double* const* k,
             std::size_t stages, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        for (std::size_t s = 0; s < stages; ++s) acc += c[s] * k[s][i];
        out[i] = acc;
    }
}

double scaled_sq_error(const double* err, const double* y0, const double* y1, double atol,
                       double rtol, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        acc += r * r;
    }
    return acc;
}

void mul_sqrt_scaled(double* base, const double* x, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) base[i] *= std::sqrt(x[i] * s);
}

void laguerre_step(double* next, const double* cur, const double* prev, const double* x,
                   double alpha, double beta, double inv, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        next[i] = ((alpha - x[i]) * cur[i] - beta * prev[i]) * inv;
}

void accumulate_complex(double cr, double ci, const double* v, double* sr, double* si,
                        std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        sr[i] += cr * v[i];
        si[i] += ci * v[i];
    }
}

void fold_harmonic(double* w, const double* sr, const double* si, double* c, double* s,
                   const double* ur, const double* ui, double scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        w[i] += scale * (c[i] * sr[i] - s[i] * si[i]);
        const double cn = c[i] * ur[i] - s[i] * ui[i];
        const double sn = s[i] * ur[i] + c[i] * ui[i];
        c[i] = cn;
        s[i] = sn;
    }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{Backend::scalar, "scalar", axpy, lincomb, scaled_sq_error,
                                   mul_sqrt_scaled, laguerre_step, accumulate_complex,
                                   fold_harmonic};
    return table;
}

}  // namespace rabi::kernels
