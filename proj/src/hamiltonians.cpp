#include "rabi/hamiltonians.hpp"

#include "rabi/error.hpp"

#include <cmath>
#include <numbers>

namespace rabi {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

Operator boson_power(const Operator& a, int n) {
    Operator p = Operator::identity(a.space());
    for (int k = 0; k < n; ++k) p = p * a;
    return p;
}

void check_order(int n, int dim) {
    if (n < 1) throw Error(ErrorKind::invalid_order, "photon order must be >= 1");
    if (n >= dim)
        throw Error(ErrorKind::invalid_order, "a^" + std::to_string(n) + " vanishes on a " +
                                                  std::to_string(dim) + "-level truncation");
}

// Σ_j (ε_j/2) e^{−i(Δ_j t + φ_j)}
cplx drive_phasor(const DriveTones& tones, double t) {
    cplx c{0.0, 0.0};
    for (const auto& tone : tones) c += 0.5 * tone.epsilon * std::exp(-I * (tone.delta * t + tone.phase));
    return c;
}

Operator composite_number(int dim, double omega) { return on_boson(omega * number(dim)); }

}  // namespace

void RabiParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorKind::validation, "omega must be positive");
    if (!std::isfinite(g)) throw Error(ErrorKind::validation, "g must be finite");
}

void DriveTone::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw Error(ErrorKind::validation, "drive amplitude must be >= 0");
    if (!std::isfinite(delta) || !std::isfinite(phase)) throw Error(ErrorKind::validation, "drive tone must be finite");
}

double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

EffectiveCoupling EffectiveCoupling::from(const RabiParams& params, int n, double epsilon) {
    params.validate();
    if (n < 0) throw Error(ErrorKind::invalid_order, "photon order must be >= 0");
    const double ratio = 2.0 * params.g / params.omega;
    return {n, 0.5 * epsilon * std::pow(ratio, n) / factorial(n)};
}

std::pair<double, double> drive_coefficients(const DriveTones& tones, double t) {
    double cz = 0.0;
    double cy = 0.0;
    for (const auto& tone : tones) {
        const double arg = tone.delta * t + tone.phase;
        cz += 0.5 * tone.epsilon * std::cos(arg);
        cy += 0.5 * tone.epsilon * std::sin(arg);
    }
    return {cz, cy};
}

Generator lab_generator(const RabiParams& params, const DriveTones& tones, int dim) {
    params.validate();
    for (const auto& tone : tones) tone.validate();
    const Operator a = annihilation(dim);
    Generator gen(Space::composite(dim));

    Eigen::VectorXd free(2 * dim);
    for (int q = 0; q < 2; ++q)
        for (int m = 0; m < dim; ++m) free(q * dim + m) = params.omega * m;
    gen.add_free_diagonal(free);

    if (params.g != 0.0) gen.add_term(params.g * tensor(sigma_x(), a + a.adjoint()));
    gen.add_term(on_qubit(sigma_z(), dim), [tones](double t) { return cplx(drive_coefficients(tones, t).first, 0.0); });
    gen.add_term(on_qubit(sigma_y(), dim), [tones](double t) { return cplx(drive_coefficients(tones, t).second, 0.0); });
    return gen;
}

Operator h_lab(const RabiParams& params, const DriveTones& tones, double t, int dim) {
    return lab_generator(params, tones, dim).op(t);
}

Operator qubit_displacement_T(int dim, cplx alpha) {
    const Matrix d = displacement(dim, alpha).matrix();
    const Matrix dd = d.adjoint();
    Matrix t(2 * dim, 2 * dim);
    t.topLeftCorner(dim, dim) = dd;
    t.topRightCorner(dim, dim) = d;
    t.bottomLeftCorner(dim, dim) = -dd;
    t.bottomRightCorner(dim, dim) = d;
    t *= M_SQRT1_2;
    return Operator(std::move(t), Space::composite(dim), kUnitary);
}

Operator h_a(const RabiParams& params, const DriveTones& tones, double t, int dim) {
    params.validate();
    // e^{2g(a−a†)/ω} = 𝒟(−2g/ω), evaluated as a full matrix exponential
    const Operator e = displacement(dim, -2.0 * params.g / params.omega);
    const cplx c = drive_phasor(tones, t);
    const Operator coupling = c * tensor(sigma_plus(), e);
    Matrix h = composite_number(dim, params.omega).matrix() + coupling.matrix() + coupling.matrix().adjoint();
    return Operator(std::move(h), Space::composite(dim), kHermitian);
}

Operator h_b(const RabiParams& params, const DriveTones& tones, double t, int dim) {
    params.validate();
    const Operator a = annihilation(dim);
    const cplx rot = std::exp(-I * (params.omega * t));
    // e^{2g(a(t) − a†(t))/ω} with a(t) = a e^{−iωt}
    const Operator gen = (2.0 * params.g / params.omega) * (rot * a - std::conj(rot) * a.adjoint());
    const Operator e = matrix_exponential(gen, 1.0);
    const cplx c = drive_phasor(tones, t);
    const Operator coupling = c * tensor(sigma_plus(), e);
    Matrix h = coupling.matrix() + coupling.matrix().adjoint();
    return Operator(std::move(h), Space::composite(dim), kHermitian);
}

Operator h_nphot(const RabiParams& params, int n, double phase, double epsilon, int dim) {
    check_order(n, dim);
    const double gn = EffectiveCoupling::from(params, n, epsilon).g_n;
    const Operator an = boson_power(annihilation(dim), n);
    const Operator x = std::exp(-I * phase) * an + std::exp(I * phase) * an.adjoint();
    Matrix h = gn * tensor(sigma_x(), x).matrix();
    return Operator(std::move(h), Space::composite(dim), kHermitian);
}

Operator h_nphot_s(const RabiParams& params, int n, double epsilon, int dim) {
    check_order(n, dim);
    const double gn = EffectiveCoupling::from(params, n, epsilon).g_n;
    const Operator an = boson_power(annihilation(dim), n);
    Matrix h = (I * gn) * tensor(sigma_y(), an.adjoint() - an).matrix();
    return Operator(std::move(h), Space::composite(dim), kHermitian);
}

Operator h_rotation(const RabiParams& params, double epsilon, int dim) {
    const double g0 = EffectiveCoupling::from(params, 0, epsilon).g_n;
    const double g2 = EffectiveCoupling::from(params, 2, epsilon).g_n;
    Matrix h = (g0 - g2) * on_qubit(sigma_x(), dim).matrix() - 2.0 * g2 * tensor(sigma_x(), number(dim)).matrix();
    return Operator(std::move(h), Space::composite(dim), kHermitian);
}

double rotation_angle(const RabiParams& params, double epsilon, double t, int sigma_x_sign) {
    // with σ_x → s the a†a part is −2 g_2 s a†a, i.e. e^{−iθ a†a} with θ = −2 s g_2 t
    const double g2 = EffectiveCoupling::from(params, 2, epsilon).g_n;
    return -2.0 * static_cast<double>(sigma_x_sign) * g2 * t;
}

Operator frame_lambda(const RabiParams& params, double t, int dim) {
    params.validate();
    const Operator tmat = qubit_displacement_T(dim, -params.g / params.omega);
    Vector u0(2 * dim);
    for (int q = 0; q < 2; ++q)
        for (int m = 0; m < dim; ++m) u0(q * dim + m) = std::exp(-I * (params.omega * t * m));
    Matrix lam = tmat.matrix() * u0.asDiagonal();
    return Operator(std::move(lam), Space::composite(dim), kUnitary);
}

namespace {

QuantumState conjugate_by(const QuantumState& s, const Matrix& u) {
    if (s.is_pure()) return QuantumState::normalized(u * s.vector(), s.space());
    Matrix r = u * s.density_matrix() * u.adjoint();
    r = 0.5 * (r + r.adjoint());
    return QuantumState::mixed(std::move(r), s.space());
}

void require_composite(const QuantumState& s, const char* where) {
    if (s.space().kind != SpaceKind::composite)
        throw Error(ErrorKind::usage, std::string(where) + " expects a composite qubit ⊗ boson state");
}

}  // namespace

QuantumState to_lab(const QuantumState& nphot, const RabiParams& params, double t) {
    require_composite(nphot, "to_lab");
    return conjugate_by(nphot, frame_lambda(params, t, nphot.space().boson_dim).matrix());
}

QuantumState to_nphot(const QuantumState& lab, const RabiParams& params, double t) {
    require_composite(lab, "to_nphot");
    return conjugate_by(lab, frame_lambda(params, t, lab.space().boson_dim).matrix().adjoint());
}

QuantumState qubit_state(QubitOutcome outcome) {
    switch (outcome) {
        case QubitOutcome::plus_x: return plus_x();
        case QubitOutcome::minus_x: return minus_x();
        case QubitOutcome::qubit0: return qubit0();
        case QubitOutcome::qubit1: return qubit1();
    }
    throw Error(ErrorKind::unknown_kind, "unknown qubit outcome");
}

Projection project_qubit_boson(const QuantumState& state, QubitOutcome outcome) {
    require_composite(state, "project_qubit");
    const Vector o = qubit_state(outcome).vector();
    const Index d = state.space().boson_dim;
    const Space bspace = Space::boson(static_cast<int>(d));
    constexpr double kMinProbability = 1e-12;
    if (state.is_pure()) {
        const Vector& v = state.vector();
        Vector phi = std::conj(o(0)) * v.head(d) + std::conj(o(1)) * v.tail(d);
        const double p = phi.squaredNorm();
        if (p <= kMinProbability) throw Error(ErrorKind::degenerate_projection, "outcome has vanishing probability");
        return {QuantumState::normalized(std::move(phi), bspace), p};
    }
    const Matrix& r = state.density_matrix();
    Matrix rb = Matrix::Zero(d, d);
    for (Index q = 0; q < 2; ++q)
        for (Index qq = 0; qq < 2; ++qq) rb += std::conj(o(q)) * o(qq) * r.block(q * d, qq * d, d, d);
    rb = 0.5 * (rb + rb.adjoint());
    const double p = rb.trace().real();
    if (p <= kMinProbability) throw Error(ErrorKind::degenerate_projection, "outcome has vanishing probability");
    rb /= p;
    return {QuantumState::mixed(std::move(rb), bspace), p};
}

Projection project_qubit(const QuantumState& state, QubitOutcome outcome) {
    Projection b = project_qubit_boson(state, outcome);
    const QuantumState q = qubit_state(outcome);
    if (b.state.is_pure()) return {product(q, b.state), b.probability};
    const Index d = b.state.dim();
    const Matrix pq = q.to_density();
    Matrix r(2 * d, 2 * d);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) r.block(i * d, j * d, d, d) = pq(i, j) * b.state.density_matrix();
    return {QuantumState::mixed(std::move(r), Space::composite(static_cast<int>(d))), b.probability};
}

DriveTones tuning_for_gate(const GateKind& kind, const RabiParams& params, double epsilon) {
    params.validate();
    if (!(epsilon >= 0.0)) throw Error(ErrorKind::validation, "drive amplitude must be >= 0");
    const double w = params.omega;
    const double pi = std::numbers::pi;
    DriveTones tones{};
    switch (kind.tag) {
        case GateKindTag::displacement:
            tones[0] = {-w, epsilon, wrap_phase(kind.phase)};
            tones[1] = {w, epsilon, wrap_phase(-kind.phase + pi)};
            return tones;
        case GateKindTag::squeeze:
            tones[0] = {-2.0 * w, epsilon, wrap_phase(kind.phase)};
            tones[1] = {2.0 * w, epsilon, wrap_phase(-kind.phase)};
            return tones;
        case GateKindTag::nphot: {
            if (kind.n < 1) throw Error(ErrorKind::invalid_order, "photon order must be >= 1");
            const double n = kind.n;
            tones[0] = {-n * w, epsilon, wrap_phase(kind.phase)};
            tones[1] = {n * w, epsilon, wrap_phase(-kind.phase + (kind.n % 2) * pi)};
            return tones;
        }
        case GateKindTag::nphot_s: {
            if (kind.n < 1) throw Error(ErrorKind::invalid_order, "photon order must be >= 1");
            const double n = kind.n;
            tones[0] = {-n * w, epsilon, pi};
            tones[1] = {n * w, epsilon, wrap_phase((kind.n % 2) * pi)};
            return tones;
        }
        case GateKindTag::rotation:
            tones[0] = {0.0, epsilon, 0.0};
            tones[1] = {0.0, 0.0, 0.0};
            return tones;
    }
    throw Error(ErrorKind::unknown_kind, "unknown gate kind");
}

}  // namespace rabi
