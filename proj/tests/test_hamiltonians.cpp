#include "rabi/error.hpp"
#include "rabi/hamiltonians.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rabi;

namespace {

// max |A_ij − B_ij| over indices whose boson level is below `cut`
double interior(const Matrix& a, const Matrix& b, int dim, int cut) {
    double m = 0.0;
    for (Index r = 0; r < a.rows(); ++r)
        for (Index c = 0; c < a.cols(); ++c)
            if (r % dim < cut && c % dim < cut) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

}  // namespace

TEST_CASE("effective coupling g_n = (eps/2)(2g/omega)^n / n!") {
    const RabiParams p{1.0, 0.1};
    CHECK(EffectiveCoupling::from(p, 1, 0.2).g_n == doctest::Approx(0.1 * 0.2));
    CHECK(EffectiveCoupling::from(p, 3, 0.2).g_n == doctest::Approx(0.1 * 0.008 / 6.0));
    CHECK(EffectiveCoupling::from(p, 4, 1.0).g_n == doctest::Approx(0.5 * 0.0016 / 24.0));
}

TEST_CASE("tuning rules: tones at -+n omega with the phase pattern of each order") {
    const RabiParams p{1.0, 0.05};
    const DriveTones t3 = tuning_for_gate(GateKind::nphot(3, 0.0), p, 1.0);
    CHECK(t3[0].delta == doctest::Approx(-3.0));
    CHECK(t3[1].delta == doctest::Approx(3.0));
    CHECK(t3[0].phase == doctest::Approx(0.0));
    CHECK(t3[1].phase == doctest::Approx(std::numbers::pi));
    const DriveTones t4 = tuning_for_gate(GateKind::nphot(4, 0.0), p, 1.0);
    CHECK(t4[0].delta == doctest::Approx(-4.0));
    CHECK(t4[1].phase == doctest::Approx(0.0));
    CHECK_THROWS_AS(tuning_for_gate(GateKind::nphot(0, 0.0), p, 1.0), Error);
}

TEST_CASE("qubit-dependent displacement relations hold on the interior") {
    const int d = 40;
    const int cut = d / 2;
    for (cplx alpha : {cplx(-0.1, 0.0), cplx(0.05, 0.2)}) {
        CAPTURE(alpha);
        const Matrix t = qubit_displacement_T(d, alpha).matrix();
        auto conj = [&](const Matrix& m) { return Matrix(t.adjoint() * m * t); };
        const Matrix a = on_boson(annihilation(d)).matrix();
        const Matrix ad = a.adjoint();
        const Matrix sx = on_qubit(sigma_x(), d).matrix();
        const Matrix sy = on_qubit(sigma_y(), d).matrix();
        const Matrix sz = on_qubit(sigma_z(), d).matrix();
        const Matrix id = Matrix::Identity(2 * d, 2 * d);
        const Matrix sp = tensor(sigma_plus(), displacement(d, 2.0 * alpha)).matrix();

        CHECK(qubit_displacement_T(d, alpha).unitarity_defect() < 1e-12);
        CHECK(interior(conj(ad * a), ad * a + std::norm(alpha) * id - sz * (a * std::conj(alpha) + ad * alpha), d,
                       cut) < 1e-10);
        CHECK(interior(conj(sx), -sz, d, cut) < 1e-10);
        CHECK(interior(conj(sy), Matrix(-I * sp + (I * sp.adjoint())), d, cut) < 1e-10);
        CHECK(interior(conj(sz), Matrix(sp + sp.adjoint()), d, cut) < 1e-10);
        CHECK(interior(conj(sx * (a + ad)), -sz * (a + ad) + 2.0 * alpha.real() * id, d, cut) < 1e-10);
    }
}

TEST_CASE("displaced frame differs from the lab Hamiltonian by -g^2/omega") {
    const int d = 40;
    const RabiParams p{1.0, 0.1};
    const DriveTones tones = tuning_for_gate(GateKind::nphot(3, 0.0), p, 0.2);
    const Matrix t = qubit_displacement_T(d, -p.g / p.omega).matrix();
    for (double time : {0.0, 0.37, 2.5}) {
        const Matrix lab = t.adjoint() * h_lab(p, tones, time, d).matrix() * t;
        const Matrix diff = lab - h_a(p, tones, time, d).matrix();
        const Matrix expect = -(p.g * p.g / p.omega) * Matrix::Identity(2 * d, 2 * d);
        CHECK(interior(diff, expect, d, d / 2) < 1e-8);
    }
}

TEST_CASE("frame transformation round trip") {
    const int d = 25;
    const RabiParams p{1.0, 0.1};
    Vector v(2 * d);
    for (Index i = 0; i < v.size(); ++i) v(i) = cplx(std::cos(0.3 * i), std::sin(0.7 * i)) * std::exp(-0.3 * (i % d));
    const QuantumState psi = QuantumState::normalized(v, Space::composite(d));
    const QuantumState back = to_nphot(to_lab(psi, p, 4.2), p, 4.2);
    CHECK((back.vector() - psi.vector()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THROWS_AS(to_lab(fock(d, 0), p, 0.0), Error);
}

TEST_CASE("projection onto a qubit outcome") {
    const int d = 8;
    const QuantumState s = product(plus_x(), coherent(d, 0.2));
    const Projection p0 = project_qubit_boson(s, QubitOutcome::qubit0);
    CHECK(p0.probability == doctest::Approx(0.5));
    const Projection px = project_qubit_boson(s, QubitOutcome::plus_x);
    CHECK(px.probability == doctest::Approx(1.0));
    CHECK_THROWS_AS(project_qubit_boson(s, QubitOutcome::minus_x), Error);
}

TEST_CASE("wrap_phase maps into [0, 2pi)") {
    CHECK(wrap_phase(-0.5) == doctest::Approx(2.0 * std::numbers::pi - 0.5));
    CHECK(wrap_phase(7.0) == doctest::Approx(7.0 - 2.0 * std::numbers::pi));
    CHECK(wrap_phase(0.0) == 0.0);
}
