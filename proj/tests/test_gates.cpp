#include "rabi/error.hpp"
#include "rabi/gates.hpp"
#include "rabi/metrics.hpp"
#include "rabi/protocols.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace rabi;

namespace {

double interior(const Matrix& a, const Matrix& b, int cut) {
    return (a.topLeftCorner(cut, cut) - b.topLeftCorner(cut, cut)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("first and second order gates are displacement and squeezing") {
    const int d = 40;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const double gamma = 0.5 * uni(rng);
        const double phi = 2.0 * std::numbers::pi * uni(rng);
        const cplx e = std::exp(I * phi);
        const Matrix g1 = gate_matrix({1, phi, gamma, Branch::plus_x}, d, GuardMode::report).matrix();
        const Matrix g2 = gate_matrix({2, phi, gamma, Branch::plus_x}, d, GuardMode::report).matrix();
        CHECK((g1 - displacement(d, -I * gamma * e).matrix()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((g2 - squeeze(d, 2.0 * I * gamma * e).matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("branches are mutual inverses") {
    const int d = 30;
    const GateSpec g{3, 0.4, 0.1, Branch::plus_x};
    const Matrix prod = gate_matrix(g, d, GuardMode::report).matrix() *
                        gate_matrix(g.inverse(), d, GuardMode::report).matrix();
    CHECK((prod - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("truncation guard") {
    CHECK_THROWS_AS(multi_squeezed(20, 1, 3.0), Error);
    CHECK(check_leakage(multi_squeezed(20, 1, 3.0, GuardMode::report), GuardMode::report, "test") > 1e-6);
    CHECK(check_leakage(fock(40, 1), GuardMode::enforce, "test") == 0.0);
    CHECK_THROWS_AS(nphoton_quadrature(4, 4, 0.0), Error);
    CHECK_THROWS_AS(gate_matrix({0, 0.0, 0.1, Branch::plus_x}, 10), Error);
}

TEST_CASE("multi-squeezed family matches direct exponentiation") {
    const int d = 100;
    const MultiSqueezedFamily fam(d, 3);
    for (double gamma : {0.03, 0.05, 0.07}) {
        const QuantumState direct = multi_squeezed(d, 3, gamma);
        CHECK(fidelity(fam.state(gamma), direct) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fam.mean_photon(gamma) == doctest::Approx(mean_photon(direct)).epsilon(1e-10));
    }
}

TEST_CASE("energy_to_gamma inverts the photon number") {
    const int d = 100;
    // Displacement oracle: ⟨n⟩ = γ² for G_1|0⟩.
    CHECK(energy_to_gamma(d, 1, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    // Squeezing oracle: ⟨n⟩ = sinh²(2γ).
    CHECK(energy_to_gamma(d, 2, 1.0) == doctest::Approx(0.5 * std::asinh(1.0)).epsilon(1e-6));
    const double g3 = energy_to_gamma(d, 3, 1.0);
    CHECK(MultiSqueezedFamily(d, 3).mean_photon(g3) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(energy_to_gamma(d, 3, 50.0), Error);
}

TEST_CASE("gate time is gamma over the effective coupling") {
    const RabiParams p{1.0, 0.1};
    const GateSpec g{3, 0.0, 0.1, Branch::plus_x};
    CHECK(gate_time(g, p, 0.2) == doctest::Approx(0.1 / EffectiveCoupling::from(p, 3, 0.2).g_n));
    CHECK_THROWS_AS(gate_time(g, RabiParams{1.0, 0.0}, 0.2), Error);
}

TEST_CASE("schedule compilation pads to whole periods and refuses large Lamb-Dicke parameters") {
    const RabiParams p{1.0, 0.1};
    const DriveSchedule s = compile_schedule({{2, 0.0, 0.2, Branch::plus_x}, {1, 0.5, 0.1, Branch::plus_x}}, p, 0.2);
    REQUIRE(s.segments.size() == 2);
    for (const Segment& seg : s.segments) {
        const double periods = seg.span() / (2.0 * std::numbers::pi);
        CHECK(periods == doctest::Approx(std::round(periods)).epsilon(1e-12));
        CHECK(seg.idle >= 0.0);
    }
    CHECK(s.total_duration() == doctest::Approx(s.segments[0].span() + s.segments[1].span()));
    CHECK_THROWS_AS(compile_schedule({{1, std::numbers::pi / 2, 3.0, Branch::plus_x}}, RabiParams{1.0, 0.4}, 0.2), Error);
    CHECK_THROWS_AS(compile_schedule({}, p, 0.2), Error);
}

TEST_CASE("drive-level schedules reproduce the analytic gates") {
    const RabiParams p{1.0, 0.1};
    struct Case {
        int n;
        double gamma;
        double eps;
        RabiParams params;
    };
    for (const Case& c : {Case{1, 0.2, 0.2, p}, Case{2, 0.2, 0.2, p}, Case{3, 0.1, 0.2, p},
                          Case{4, 0.03, 1.0, p}}) {
        CAPTURE(c.n);
        const GateCheck r =
            check_gate(30, GateSpec{c.n, 0.0, c.gamma, Branch::plus_x}, c.params, c.eps, fock(30, 0));
        CHECK(r.fidelity >= 0.99);
        CHECK(r.probability > 0.5);
    }
}

TEST_CASE("minus branch through phase shift and pi pulse agree") {
    const RabiParams p{1.0, 0.1};
    const GateSpec g{2, 0.0, 0.2, Branch::minus_x};
    CompileOptions shift;
    CompileOptions pulse;
    pulse.conjugation = ConjugationMethod::pi_pulse;
    const GateCheck a = check_gate(30, g, p, 0.2, fock(30, 0), shift);
    const GateCheck b = check_gate(30, g, p, 0.2, fock(30, 0), pulse);
    CHECK(a.fidelity >= 0.99);
    CHECK(b.fidelity >= 0.99);
}

// [H_1s, [H_4, H_2s]] = 8 g_1 g_2 g_4 (a + a†)³ away from the cutoff
TEST_CASE("nested commutator produces the cubic quadrature") {
    const int d = 40;
    const CubicSpec cs = CubicSpec::from_periods(1, 1, 1, 1, RabiParams{1.0, 0.05}, 0.01);
    const Matrix h1 = cubic_h1s(cs, d).matrix();
    const Matrix h2 = cubic_h2s(cs, d).matrix();
    const Matrix h4 = cubic_h4(cs, d).matrix();
    const Matrix inner = h4 * h2 - h2 * h4;
    const Matrix lhs = h1 * inner - inner * h1;
    const Matrix x = annihilation(d).matrix() + creation(d).matrix();
    const double scale = 8.0 * cs.g1() * cs.g2() * cs.g4();
    CHECK(interior(lhs, scale * x * x * x, d - 7) / scale < 1e-8);
}

TEST_CASE("cubic block approximates the cubic phase gate") {
    const int d = 60;
    const CubicSpec cs = CubicSpec::from_periods(10, 20, 800, 1, RabiParams{1.0, 0.05}, 0.01);
    const double delta = cs.delta();
    REQUIRE(delta < kMaxTrotterDelta);
    const Vector out = cubic_block_analytic(cs, d).matrix().col(0);
    const Vector plus = cubic_gate(d, delta).matrix().col(0);
    const Vector minus = cubic_gate(d, -delta).matrix().col(0);
    // the residual is far smaller than the gate's own action, and of the right sign
    const double err = (out - plus).norm();
    CHECK(err < 0.1 * (plus - fock(d, 0).vector()).norm());
    CHECK(err < (out - minus).norm());
}

TEST_CASE("cubic spec validation") {
    const RabiParams p{1.0, 0.05};
    CHECK_THROWS_AS(CubicSpec::from_periods(1.5, 1, 1, 1, p, 0.01), Error);
    try {
        CubicSpec::from_periods(1000, 1000, 1000, 1, p, 1.0);
        FAIL("expected a Trotter-regime error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::trotter_regime);
    }
    const CubicSpec cs = CubicSpec::from_periods(10, 20, 800, 3, p, 0.01);
    CHECK(cs.cubicity() == doctest::Approx(3.0 * cs.delta()));
    const double tp = 2.0 * std::numbers::pi;
    CHECK(cs.delta() ==
          doctest::Approx(8.0 * 10 * tp * cs.g1() * 20 * tp * cs.g2() * 800 * tp * cs.g4()));
}

TEST_CASE("cat state without the frame displacement keeps photon parity") {
    const int d = 80;
    const RabiParams p{1.0, 0.1};
    const QuantumState c = cat_state(d, 2, 0.5, p, CatConjugation::identity_D);
    const Eigen::VectorXd pop = fock_populations(c);
    double odd = 0.0;
    for (Index m = 1; m < pop.size(); m += 2) odd += pop(m);
    CHECK(odd < 1e-14);
    CHECK(fidelity(cat_state(d, 2, 0.5, p), c) < 1.0);
}
