#include "rabi/error.hpp"
#include "rabi/evolution.hpp"
#include "rabi/metrics.hpp"

#include <doctest.h>

#include <cmath>

using namespace rabi;

namespace {

Generator free_oscillator(int d, double omega) {
    Generator h(Space::boson(d));
    Eigen::VectorXd diag(d);
    for (int m = 0; m < d; ++m) diag(m) = omega * m;
    h.add_free_diagonal(diag);
    return h;
}

IntegratorSpec tight(bool frame) {
    IntegratorSpec s;
    s.rel_tol = 1e-10;
    s.abs_tol = 1e-12;
    s.interaction_frame = frame;
    return s;
}

}  // namespace

TEST_CASE("free evolution rotates a coherent state") {
    const int d = 30;
    const cplx alpha(0.7, 0.2);
    const double t = 2.3;
    const QuantumState expect = coherent(d, alpha * std::exp(-I * t));
    for (bool frame : {false, true}) {
        CAPTURE(frame);
        EvolutionStats st;
        const QuantumState out = evolve_pure(free_oscillator(d, 1.0), coherent(d, alpha), t, tight(frame), 0.0, &st);
        CHECK(fidelity(out, expect) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(st.steps > 0);
    }
}

TEST_CASE("interaction frame does not change the driven lab evolution") {
    const int d = 24;
    const RabiParams p{1.0, 0.1};
    const DriveTones tones = tuning_for_gate(GateKind::nphot(2, 0.0), p, 0.2);
    const Generator h = lab_generator(p, tones, d);
    const QuantumState psi0 = product(plus_x(), fock(d, 0));
    const QuantumState lab = evolve_pure(h, psi0, 6.0, tight(false));
    const QuantumState rot = evolve_pure(h, psi0, 6.0, tight(true));
    CHECK((lab.vector() - rot.vector()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("dense-function and structured generators agree") {
    const int d = 16;
    const RabiParams p{1.0, 0.1};
    const DriveTones tones = tuning_for_gate(GateKind::nphot(1, 0.3), p, 0.2);
    const Generator h = lab_generator(p, tones, d);
    const auto fn = [&](double t) { return h_lab(p, tones, t, d); };
    const QuantumState psi0 = product(qubit0(), coherent(d, 0.3));
    const QuantumState a = evolve_pure(h, psi0, 3.0, tight(false));
    const QuantumState b = evolve_pure(fn, psi0, 3.0, tight(false));
    CHECK((a.vector() - b.vector()).cwiseAbs().maxCoeff() < 1e-7);
}

// σ_z jumps at rate Γ: ρ_01(t) = ρ_01(0) e^{−2Γt}
TEST_CASE("qubit dephasing decays coherences at twice the rate") {
    const int d = 2;
    const double rate = 0.05;
    const double t = 4.0;
    NoiseConfig noise;
    noise.rate_sz = rate;
    const Generator h(Space::composite(d));
    EvolutionStats st;
    const QuantumState out = evolve_lindblad(h, product(plus_x(), fock(d, 0)), noise, t, tight(false), 0.0, &st);
    const Matrix& rho = out.density_matrix();
    CHECK(std::abs(rho(0, d)) == doctest::Approx(0.5 * std::exp(-2.0 * rate * t)).epsilon(1e-7));
    CHECK(rho(0, 0).real() == doctest::Approx(0.5));
    CHECK(std::abs(st.trace_drift) < 1e-9);
}

// Equal gain and loss: d⟨n⟩/dt = Γ(⟨n⟩ + 1) − Γ⟨n⟩ = Γ away from the cutoff.
TEST_CASE("balanced heating and loss raise the photon number linearly") {
    const int d = 40;
    const double rate = 0.01;
    NoiseConfig noise;
    noise.rate_a = rate;
    noise.rate_adag = rate;
    const QuantumState out = evolve_lindblad(free_oscillator(d, 1.0), fock(d, 2), noise, 5.0, tight(true));
    CHECK(mean_photon(out) == doctest::Approx(2.0 + rate * 5.0).epsilon(1e-7));
}

TEST_CASE("amplitude damping of a coherent state") {
    const int d = 30;
    const double rate = 0.2;
    const double t = 1.5;
    NoiseConfig noise;
    noise.rate_a = rate;
    const cplx alpha(1.0, 0.0);
    const QuantumState out = evolve_lindblad(free_oscillator(d, 1.0), coherent(d, alpha), noise, t, tight(false));
    const QuantumState expect = coherent(d, alpha * std::exp(-I * t - 0.5 * rate * t));
    CHECK(fidelity(out, expect) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("Lindblad evolution keeps the state physical and converges under tolerance halving") {
    const int d = 12;
    const RabiParams p{1.0, 0.1};
    const DriveTones tones = tuning_for_gate(GateKind::nphot(2, 0.0), p, 0.2);
    NoiseConfig noise{1e-3, 1e-3, 1e-3, 1e-3};
    IntegratorSpec spec = IntegratorSpec::for_tones(tones, p.omega);
    spec.interaction_frame = true;
    const QuantumState psi0 = product(plus_x(), fock(d, 0));
    EvolutionStats st;
    const QuantumState r1 = evolve_lindblad(lab_generator(p, tones, d), psi0, noise, 20.0, spec, 0.0, &st);
    const Matrix& rho = r1.density_matrix();
    CHECK(std::abs(rho.trace() - cplx(1.0)) < 1e-7);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(st.min_eigenvalue > -1e-9);

    IntegratorSpec half = spec;
    half.rel_tol /= 2;
    half.abs_tol /= 2;
    const QuantumState r2 = evolve_lindblad(lab_generator(p, tones, d), psi0, noise, 20.0, half);
    CHECK((r1.density_matrix() - r2.density_matrix()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("jump operators skip zero rates and reject qubit noise without a qubit") {
    NoiseConfig noise;
    noise.rate_a = 0.1;
    CHECK(jump_operators(noise, Space::composite(5)).size() == 1);
    noise.rate_sz = 0.1;
    CHECK(jump_operators(noise, Space::composite(5)).size() == 2);
    CHECK_THROWS_AS(jump_operators(noise, Space::boson(5)), Error);
    noise.rate_a = -1.0;
    CHECK_THROWS_AS(noise.validate(), Error);
}

TEST_CASE("integrator rejects inconsistent inputs") {
    IntegratorSpec bad;
    bad.rel_tol = 0.5;
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK_THROWS_AS(evolve_pure(free_oscillator(5, 1.0), fock(6, 0), 1.0, IntegratorSpec{}), Error);
    CHECK_THROWS_AS(evolve_pure(free_oscillator(5, 1.0), fock(5, 0), 1.0, IntegratorSpec{}, 2.0), Error);
}

TEST_CASE("max step follows the fastest tone") {
    const DriveTones tones{DriveTone{-3.0, 0.1, 0.0}, DriveTone{3.0, 0.1, 0.0}};
    const IntegratorSpec s = IntegratorSpec::for_tones(tones, 1.0);
    CHECK(s.max_step == doctest::Approx(2.0 * M_PI / (40.0 * 3.0)));
}
