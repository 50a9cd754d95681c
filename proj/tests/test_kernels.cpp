// The AVX2 tables must agree with the scalar reference to rounding.
#include "rabi/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace rabi::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
    return m;
}

constexpr std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 9, 31, 64, 1001};
constexpr double kTol = 1e-13;

}  // namespace

TEST_CASE("active kernel table is one of the compiled backends") {
    const KernelTable& t = active();
    CHECK((t.backend == Backend::scalar || t.backend == Backend::avx2));
    if (t.backend == Backend::avx2) CHECK(cpu_supports_avx2());
}

TEST_CASE("AVX2 kernels match the scalar reference") {
    const KernelTable* v = avx2_table();
    if (!v) {
        MESSAGE("AVX2 backend unavailable on this machine; equivalence not exercised");
        return;
    }
    const KernelTable& s = scalar_table();
    std::mt19937_64 rng(7);

    for (std::size_t n : kSizes) {
        CAPTURE(n);
        SUBCASE("axpy") {
            const auto x = random_vec(n, rng);
            auto y1 = random_vec(n, rng);
            auto y2 = y1;
            s.axpy(0.37, x.data(), y1.data(), n);
            v->axpy(0.37, x.data(), y2.data(), n);
            CHECK(max_rel(y1, y2) <= kTol);
        }
        SUBCASE("lincomb") {
            const auto y = random_vec(n, rng);
            std::vector<std::vector<double>> k;
            std::vector<const double*> kp;
            for (int st = 0; st < 6; ++st) k.push_back(random_vec(n, rng));
            for (auto& kk : k) kp.push_back(kk.data());
            const double c[6] = {0.1, -0.2, 0.3, 0.05, -0.7, 0.11};
            for (std::size_t stages = 1; stages <= 6; ++stages) {
                std::vector<double> o1(n), o2(n);
                s.lincomb(o1.data(), y.data(), c, kp.data(), stages, n);
                v->lincomb(o2.data(), y.data(), c, kp.data(), stages, n);
                CHECK(max_rel(o1, o2) <= kTol);
            }
        }
        SUBCASE("scaled_sq_error") {
            const auto e = random_vec(n, rng, -1e-6, 1e-6);
            const auto y0 = random_vec(n, rng);
            const auto y1 = random_vec(n, rng);
            const double a = s.scaled_sq_error(e.data(), y0.data(), y1.data(), 1e-10, 1e-8, n);
            const double b = v->scaled_sq_error(e.data(), y0.data(), y1.data(), 1e-10, 1e-8, n);
            CHECK(std::abs(a - b) <= kTol * std::max(1.0, std::abs(a)));
        }
        SUBCASE("mul_sqrt_scaled") {
            const auto x = random_vec(n, rng, 0.0, 20.0);
            auto b1 = random_vec(n, rng);
            auto b2 = b1;
            s.mul_sqrt_scaled(b1.data(), x.data(), 0.25, n);
            v->mul_sqrt_scaled(b2.data(), x.data(), 0.25, n);
            CHECK(max_rel(b1, b2) <= kTol);
        }
        SUBCASE("laguerre_step") {
            const auto cur = random_vec(n, rng);
            const auto prev = random_vec(n, rng);
            const auto x = random_vec(n, rng, 0.0, 30.0);
            std::vector<double> o1(n), o2(n);
            s.laguerre_step(o1.data(), cur.data(), prev.data(), x.data(), 5.0, 1.7, 0.3, n);
            v->laguerre_step(o2.data(), cur.data(), prev.data(), x.data(), 5.0, 1.7, 0.3, n);
            CHECK(max_rel(o1, o2) <= kTol);
        }
        SUBCASE("accumulate_complex") {
            const auto x = random_vec(n, rng);
            auto r1 = random_vec(n, rng), i1 = random_vec(n, rng);
            auto r2 = r1, i2 = i1;
            s.accumulate_complex(0.3, -0.8, x.data(), r1.data(), i1.data(), n);
            v->accumulate_complex(0.3, -0.8, x.data(), r2.data(), i2.data(), n);
            CHECK(max_rel(r1, r2) <= kTol);
            CHECK(max_rel(i1, i2) <= kTol);
        }
        SUBCASE("fold_harmonic") {
            const auto sr = random_vec(n, rng), si = random_vec(n, rng);
            std::vector<double> ur(n), ui(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double th = 0.1 * static_cast<double>(i);
                ur[i] = std::cos(th);
                ui[i] = std::sin(th);
            }
            auto w1 = random_vec(n, rng), c1 = random_vec(n, rng), s1 = random_vec(n, rng);
            auto w2 = w1, c2 = c1, s2 = s1;
            s.fold_harmonic(w1.data(), sr.data(), si.data(), c1.data(), s1.data(), ur.data(), ui.data(), 0.6, n);
            v->fold_harmonic(w2.data(), sr.data(), si.data(), c2.data(), s2.data(), ur.data(), ui.data(), 0.6, n);
            CHECK(max_rel(w1, w2) <= kTol);
            CHECK(max_rel(c1, c2) <= kTol);
            CHECK(max_rel(s1, s2) <= kTol);
        }
    }
}
