#include "rabi/error.hpp"
#include "rabi/fock.hpp"

#include <doctest.h>

#include <cmath>

using namespace rabi;

TEST_CASE("ladder operators obey [a, a†] = I on the interior") {
    const int d = 12;
    const Matrix c = commutator(annihilation(d), creation(d)).matrix();
    CHECK((c.topLeftCorner(d - 1, d - 1) - Matrix::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(c(d - 1, d - 1) - cplx(1.0 - d)) < 1e-12);  // truncation artefact in the last level
    CHECK((number(d).matrix() - creation(d).matrix() * annihilation(d).matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("qubit conventions") {
    CHECK(sigma_z().matrix()(0, 0) == cplx(1.0));
    CHECK(sigma_z().matrix()(1, 1) == cplx(-1.0));
    CHECK(sigma_plus().matrix()(0, 1) == cplx(1.0));
    CHECK(sigma_minus().matrix()(1, 0) == cplx(1.0));
    const Vector px = plus_x().vector();
    CHECK((sigma_x().matrix() * px - px).norm() < 1e-15);
    CHECK((sigma_x().matrix() * minus_x().vector() + minus_x().vector()).norm() < 1e-15);
}

TEST_CASE("composite index is qubit * dim + boson level") {
    const int d = 5;
    const QuantumState s = product(qubit1(), fock(d, 3));
    CHECK(std::abs(s.vector()(1 * d + 3) - cplx(1.0)) < 1e-15);
    CHECK(s.space() == Space::composite(d));
    CHECK_THROWS_AS(tensor(annihilation(d), sigma_x()), Error);
}

TEST_CASE("tracing out the qubit of a product state returns the boson factor") {
    const int d = 6;
    const QuantumState b = coherent(d, cplx(0.3, -0.2));
    const QuantumState r = trace_out_qubit(product(plus_x(), b));
    const Matrix expect = b.vector() * b.vector().adjoint();
    CHECK((r.to_density() - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pure states must be normalized") {
    Vector v = Vector::Zero(4);
    v(0) = 2.0;
    CHECK_THROWS_AS(QuantumState::pure(v, Space::boson(4)), Error);
    CHECK(QuantumState::normalized(v, Space::boson(4)).vector().norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(QuantumState::normalized(Vector::Zero(4), Space::boson(4)), Error);
}

TEST_CASE("displacement and squeezing are unitary and agree between exponential routes") {
    const int d = 30;
    const Operator dm = displacement(d, cplx(0.4, 0.1));
    CHECK(dm.unitarity_defect() < 1e-12);
    const Operator a = annihilation(d);
    const Operator gen = cplx(0.4, 0.1) * a.adjoint() - cplx(0.4, -0.1) * a;
    const Matrix pade = matrix_exponential(gen, 1.0, ExpMethod::pade).matrix();
    CHECK((pade - dm.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(squeeze(d, cplx(0.3, 0.2)).unitarity_defect() < 1e-12);
}

TEST_CASE("coherent state has mean photon number |alpha|^2") {
    const QuantumState c = coherent(40, cplx(0.6, 0.8));
    const Eigen::VectorXd pop = fock_populations(c);
    double n = 0.0;
    for (Index m = 0; m < pop.size(); ++m) n += m * pop(m);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(leakage(c, 4) < 1e-12);
}

// Closed-form oracle: S(r)|0⟩ = cosh(r)^{-1/2} Σ_k (−tanh r)^k √((2k)!) / (2^k k!) |2k⟩ for real r.
TEST_CASE("squeezed vacuum matches the even-Fock closed form") {
    const int d = 80;
    const double r = 0.5;
    const Vector v = squeeze(d, r).matrix().col(0);
    double amp = 1.0 / std::sqrt(std::cosh(r));
    for (int k = 0; 2 * k < 30; ++k) {
        if (k > 0) amp *= -std::tanh(r) * std::sqrt((2.0 * k) * (2.0 * k - 1.0)) / (2.0 * k);
        CAPTURE(k);
        CHECK(std::abs(v(2 * k) - cplx(amp)) < 1e-10);
        CHECK(std::abs(v(2 * k + 1)) < 1e-12);
    }
}

TEST_CASE("matrix exponential of a Hermitian generator via the cached propagator") {
    const int d = 10;
    const Operator h = number(d) + annihilation(d) + creation(d);
    const HermitianPropagator prop(h);
    const Matrix u = matrix_exponential(h, cplx(0.0, -0.7)).matrix();
    CHECK((prop.unitary(0.7) - u).cwiseAbs().maxCoeff() < 1e-12);
}
