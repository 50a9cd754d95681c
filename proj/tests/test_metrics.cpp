#include "rabi/error.hpp"
#include "rabi/gates.hpp"
#include "rabi/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rabi;

namespace {

constexpr double kPi = std::numbers::pi;

QuantumState probe_state(int d) {
    Vector v = Vector::Zero(d);
    for (int m = 0; m < 8; ++m) v(m) = std::polar(1.0 / (1.0 + m), 0.7 * m);
    return QuantumState::normalized(v, Space::boson(d));
}

}  // namespace

TEST_CASE("Wigner origin values of vacuum and one photon") {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    CHECK(wigner_points(fock(10, 0), zero, zero)(0) == doctest::Approx(1.0 / kPi));
    CHECK(wigner_points(fock(10, 1), zero, zero)(0) == doctest::Approx(-1.0 / kPi));
    CHECK(wigner_points(fock(10, 2), zero, zero)(0) == doctest::Approx(1.0 / kPi));
}

TEST_CASE("Laguerre expansion matches the displaced-parity definition") {
    // the parity reference displaces by up to |β| = 2, so leave headroom above the support
    const int d = 70;
    const QuantumState pure = probe_state(d);
    const QuantumState mixed = QuantumState::mixed(
        0.6 * pure.to_density() + 0.4 * coherent(d, cplx(0.5, -0.3)).to_density(), Space::boson(d));
    for (const QuantumState* s : {&pure, &mixed}) {
        Eigen::VectorXd q(25), p(25);
        int k = 0;
        for (double qi : {-2.0, -1.0, 0.0, 0.5, 1.5})
            for (double pi : {-1.5, -0.5, 0.0, 1.0, 2.0}) {
                q(k) = qi;
                p(k) = pi;
                ++k;
            }
        const Eigen::VectorXd w = wigner_points(*s, q, p);
        for (int i = 0; i < 25; ++i) {
            CAPTURE(i);
            CHECK(std::abs(w(i) - wigner_parity(*s, q(i), p(i))) < 1e-8);
        }
    }
}

TEST_CASE("coherent-state Wigner function is the displaced Gaussian") {
    const cplx beta(0.8, -0.4);
    Eigen::VectorXd q(3), p(3);
    q << 0.0, 1.1, -0.5;
    p << 0.3, -0.6, 0.9;
    const Eigen::VectorXd w = wigner_points(coherent(40, beta), q, p);
    for (int i = 0; i < 3; ++i) {
        const double dq = q(i) - std::sqrt(2.0) * beta.real();
        const double dp = p(i) - std::sqrt(2.0) * beta.imag();
        CHECK(w(i) == doctest::Approx(std::exp(-dq * dq - dp * dp) / kPi).epsilon(1e-10));
    }
}

TEST_CASE("Wigner map integrates to one") {
    const WignerMap m = wigner(probe_state(30));
    CHECK(m.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.abs_integral() >= m.integral());
}

TEST_CASE("Gaussian states carry no mana") {
    CHECK(std::abs(mana(fock(30, 0)).mana) < 1e-6);
    CHECK(std::abs(mana(coherent(40, cplx(0.5, 0.5))).mana) < 1e-6);
    const QuantumState sq = QuantumState::normalized(squeeze(80, 0.6).matrix().col(0), Space::boson(80));
    CHECK(std::abs(mana(sq).mana) < 2e-3);
}

// |1⟩: W = (2ρ² − 1) e^{−ρ²} / π, so ∬|W| = 4 e^{−1/2} − 1.
TEST_CASE("single-photon mana against radial quadrature and closed form") {
    const double closed = std::log2(4.0 * std::exp(-0.5) - 1.0);
    const int n = 200000;
    const double rmax = 10.0;
    const double h = rmax / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * h;
        const double f = std::abs(2.0 * r * r - 1.0) * std::exp(-r * r) / kPi * 2.0 * kPi * r;
        acc += (i == 0 || i == n) ? 0.5 * f : f;
    }
    const double radial = std::log2(acc * h);
    CHECK(radial == doctest::Approx(closed).epsilon(1e-6));
    CHECK(closed == doctest::Approx(0.512098).epsilon(1e-5));
    CHECK(std::abs(mana(fock(30, 1)).mana - closed) < 1e-3);
}

TEST_CASE("mana refuses an inadequate grid") {
    WignerGrid narrow;
    narrow.q_min = narrow.p_min = -1.0;
    narrow.q_max = narrow.p_max = 1.0;
    narrow.n_q = narrow.n_p = 64;
    CHECK_THROWS_AS(mana(fock(20, 3), narrow), Error);
    WignerGrid bad;
    bad.n_q = 10;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("grid doubling helpers") {
    const WignerGrid g;
    const WignerGrid e = g.doubled_extent();
    CHECK(e.dq() == doctest::Approx(g.dq()));
    CHECK(e.q_max == doctest::Approx(2.0 * g.q_max));
    const WignerGrid r = g.doubled_resolution();
    CHECK(r.dq() == doctest::Approx(0.5 * g.dq()));
    CHECK(r.q_max == doctest::Approx(g.q_max));
    const ManaAdequacy a = mana_checked(fock(30, 1));
    CHECK(a.adequate());
}

TEST_CASE("fidelity, photon number and tails") {
    const int d = 20;
    CHECK(fidelity(fock(d, 3), fock(d, 3)) == doctest::Approx(1.0));
    CHECK(fidelity(fock(d, 3), fock(d, 4)) == doctest::Approx(0.0));
    const QuantumState mix =
        QuantumState::mixed(0.25 * fock(d, 0).to_density() + 0.75 * fock(d, 1).to_density(), Space::boson(d));
    CHECK(fidelity(mix, fock(d, 1)) == doctest::Approx(0.75));
    CHECK(mean_photon(fock(d, 5)) == doctest::Approx(5.0));
    CHECK(fock_tail(fock(d, 5), 5) == doctest::Approx(1.0));
    CHECK(fock_tail(fock(d, 5), 6) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fock_tail(fock(d, 5), d), Error);
    CHECK_THROWS_AS(fidelity(fock(d, 0), mix), Error);
    CHECK_THROWS_AS(fidelity(fock(d, 0), fock(d + 1, 0)), Error);
}

TEST_CASE("optimal amplitude recovers the generating gamma") {
    const int d = 100;
    const AmplitudeFit fit = optimal_amplitude(multi_squeezed(d, 3, 0.06), 3, 0.0, 0.12);
    CHECK(fit.gamma == doctest::Approx(0.06).epsilon(1e-5));
    CHECK(fit.fidelity == doctest::Approx(1.0).epsilon(1e-10));

    // vacuum peaks at γ = 0, which needs a bracket around zero
    const AmplitudeFit vac = optimal_amplitude(fock(d, 0), 3, -0.1, 0.1);
    CHECK(std::abs(vac.gamma) < 1e-4);
    CHECK_THROWS_AS(optimal_amplitude(fock(d, 0), 3, 0.0, 0.3), Error);
    CHECK_THROWS_AS(optimal_amplitude(fock(d, 0), 3, 0.3, 0.0), Error);
}

TEST_CASE("covering grid resolves the Wigner function of a heavy-tailed truncated state") {
    const QuantumState s = multi_squeezed(60, 3, 0.2, GuardMode::report);
    CHECK_THROWS_AS(mana(s), Error);
    const WignerGrid g = WignerGrid::covering(60);
    CHECK(g.q_max == doctest::Approx(std::sqrt(121.0) + 4.0));
    CHECK(g.dq() <= 0.05);
    CHECK(std::abs(mana(s, g).norm - 1.0) < 1e-4);
    CHECK(WignerGrid::covering(4).q_max == doctest::Approx(WignerGrid{}.q_max));
}
