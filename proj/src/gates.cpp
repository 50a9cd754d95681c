#include "rabi/gates.hpp"

#include "rabi/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rabi {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Matrix power(const Matrix& a, int n) {
    Matrix p = Matrix::Identity(a.rows(), a.cols());
    for (int k = 0; k < n; ++k) p = p * a;
    return p;
}

double branch_sign(Branch b) { return b == Branch::plus_x ? -1.0 : 1.0; }

// Whether a gate needs the conjugate (|−_x⟩) realization.
bool is_conjugate(const GateSpec& g) { return (g.branch == Branch::minus_x) != (g.gamma < 0.0); }

double quadrature_sq(const QuantumState& boson) {
    const Index d = boson.dim();
    const Operator a = annihilation(static_cast<int>(d));
    const Operator x = a + a.adjoint();
    return boson.expectation(x * x).real();
}

QuantumState apply_unitary(const Matrix& u, const QuantumState& s) {
    if (s.is_pure()) return QuantumState::normalized(u * s.vector(), s.space());
    Matrix r = u * s.density_matrix() * u.adjoint();
    r = 0.5 * (r + r.adjoint());
    return QuantumState::mixed(std::move(r), s.space());
}

Vector u0_diagonal(int dim, double omega, double t, double sign) {
    Vector u(2 * dim);
    for (int q = 0; q < 2; ++q)
        for (int m = 0; m < dim; ++m) u(q * dim + m) = std::exp(sign * I * (omega * t * m));
    return u;
}

struct Evolved {
    QuantumState state;
    EvolutionStats stats;
    double t_end = 0.0;
};

void accumulate(EvolutionStats& total, const EvolutionStats& s) {
    total.steps += s.steps;
    total.rejected += s.rejected;
    total.rhs_evals += s.rhs_evals;
    if (std::abs(s.norm_drift) > std::abs(total.norm_drift)) total.norm_drift = s.norm_drift;
    if (std::abs(s.trace_drift) > std::abs(total.trace_drift)) total.trace_drift = s.trace_drift;
    total.min_eigenvalue = std::min(total.min_eigenvalue, s.min_eigenvalue);
}

Evolved evolve_schedule(const DriveSchedule& schedule, const RabiParams& params, QuantumState lab,
                        const SimulationOptions& options) {
    const int dim = lab.space().boson_dim;
    const bool noisy = options.noise.any();
    if (noisy && lab.is_pure()) lab = lab.to_mixed();
    EvolutionStats total;
    double t = 0.0;

    auto apply_pulses = [&](std::size_t index) {
        for (const auto& p : schedule.pulses)
            if (p.index == index) lab = apply_unitary(qubit_pulse(p, dim).matrix(), lab);
    };
    auto run = [&](const DriveTones& tones, double duration) {
        if (duration <= 0.0) return;
        const Generator gen = lab_generator(params, tones, dim);
        IntegratorSpec spec = IntegratorSpec::for_tones(tones, params.omega, options.rel_tol, options.abs_tol);
        spec.interaction_frame = options.interaction_frame;
        EvolutionStats st;
        lab = noisy ? evolve_lindblad(gen, lab, options.noise, t + duration, spec, t, &st)
                    : evolve_pure(gen, lab, t + duration, spec, t, &st);
        accumulate(total, st);
        t += duration;
    };

    for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
        apply_pulses(i);
        const Segment& seg = schedule.segments[i];
        run(seg.tones, seg.duration);
        run(DriveTones{}, seg.idle);
    }
    apply_pulses(schedule.segments.size());
    return {std::move(lab), total, t};
}

}  // namespace

// ---- gate specs -------------------------------------------------------------

void GateSpec::validate() const {
    if (n < 1) throw Error(ErrorKind::invalid_order, "gate order must be >= 1");
    if (!std::isfinite(gamma) || !std::isfinite(phase)) throw Error(ErrorKind::validation, "gate parameters must be finite");
}

GateSpec GateSpec::inverse() const {
    GateSpec g = *this;
    g.branch = branch == Branch::plus_x ? Branch::minus_x : Branch::plus_x;
    return g;
}

double check_leakage(const QuantumState& state, GuardMode mode, const char* what) {
    const int dim = state.space().boson_dim;
    const int k = std::max(1, dim / kLeakageWindowDivisor);
    const double leak = leakage(state, k);
    if (mode == GuardMode::enforce && leak > kLeakageThreshold)
        throw Error(ErrorKind::leakage_guard, std::string(what) + ": top-" + std::to_string(k) +
                                                  " population " + std::to_string(leak) + " exceeds 1e-6 at dim " +
                                                  std::to_string(dim));
    return leak;
}

Operator nphoton_quadrature(int dim, int n, double phase) {
    if (n < 1) throw Error(ErrorKind::invalid_order, "photon order must be >= 1");
    if (n >= dim) throw Error(ErrorKind::invalid_order, "aⁿ vanishes on this truncation");
    const Matrix an = power(annihilation(dim).matrix(), n);
    Matrix x = std::exp(-I * phase) * an;
    x += x.adjoint().eval();
    return Operator(std::move(x), Space::boson(dim), kHermitian);
}

Operator gate_matrix(const GateSpec& spec, int dim, GuardMode guard) {
    spec.validate();
    const Operator x = nphoton_quadrature(dim, spec.n, spec.phase);
    Operator u = matrix_exponential(x, cplx(0.0, branch_sign(spec.branch) * spec.gamma));
    check_leakage(QuantumState::pure(u.matrix().col(0), u.space()), guard, "gate_matrix");
    return u;
}

QuantumState multi_squeezed(int dim, int n, double gamma, GuardMode guard) {
    const Operator u = gate_matrix({n, 0.0, gamma, Branch::plus_x}, dim, guard);
    return QuantumState::normalized(u.matrix().col(0), Space::boson(dim));
}

MultiSqueezedFamily::MultiSqueezedFamily(int dim, int n, double phase)
    : dim_(dim), n_(n), prop_(nphoton_quadrature(dim, n, phase)), vacuum_(Vector::Unit(dim, 0)) {}

QuantumState MultiSqueezedFamily::state(double gamma) const {
    return QuantumState::normalized(prop_.apply(gamma, vacuum_), Space::boson(dim_));
}

double MultiSqueezedFamily::mean_photon(double gamma) const {
    const Vector v = prop_.apply(gamma, vacuum_);
    double e = 0.0;
    for (Index m = 0; m < v.size(); ++m) e += static_cast<double>(m) * std::norm(v(m));
    return e / v.squaredNorm();
}

double energy_to_gamma(int dim, int n, double target_energy) {
    if (!(target_energy >= 0.0) || target_energy > dim / 10.0)
        throw Error(ErrorKind::validation, "target energy must lie in [0, dim/10]");
    if (target_energy == 0.0) return 0.0;
    const MultiSqueezedFamily family(dim, n);

    constexpr double kStep = 1e-3;
    constexpr double kGammaMax = 10.0;
    double lo = 0.0;
    double e_lo = 0.0;
    double hi = -1.0;
    for (double g = kStep; g <= kGammaMax; g += kStep) {
        const double e = family.mean_photon(g);
        if (e < e_lo - 1e-12) throw Error(ErrorKind::bracket, "photon number is not monotone in γ below the target");
        if (e >= target_energy) {
            hi = g;
            break;
        }
        lo = g;
        e_lo = e;
    }
    if (hi < 0.0) throw Error(ErrorKind::bracket, "target energy not reached for γ <= 10");

    // bisection down to rounding; the energy tolerance then holds easily
    while (hi - lo > 1e-14 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (family.mean_photon(mid) < target_energy ? lo : hi) = mid;
    }
    const double gamma = 0.5 * (lo + hi);
    const double e = family.mean_photon(gamma);
    if (std::abs(e - target_energy) > 1e-6 * target_energy)
        throw Error(ErrorKind::bracket, "energy root did not converge");
    return gamma;
}

// ---- schedules --------------------------------------------------------------

double DriveSchedule::total_duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.span();
    return t;
}

double gate_time(const GateSpec& gate, const RabiParams& params, double epsilon) {
    gate.validate();
    const double gn = EffectiveCoupling::from(params, gate.n, epsilon).g_n;
    if (!(std::abs(gn) > 0.0)) throw Error(ErrorKind::validation, "effective coupling vanishes (g or ε is zero)");
    return std::abs(gate.gamma) / std::abs(gn);
}

Operator program_unitary(const std::vector<GateSpec>& program, int dim, GuardMode guard) {
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto& g : program) u = gate_matrix(g, dim, guard).matrix() * u;
    return Operator(std::move(u), Space::boson(dim));
}

Operator qubit_pulse(const QubitPulse& pulse, int dim) {
    const Operator s = pulse.axis == PulseAxis::x ? sigma_x() : pulse.axis == PulseAxis::y ? sigma_y() : sigma_z();
    const Operator r = matrix_exponential(s, cplx(0.0, -pulse.angle));
    return on_qubit(r, dim);
}

DriveSchedule compile_schedule(const std::vector<GateSpec>& program, const RabiParams& params, double epsilon,
                               const CompileOptions& options) {
    if (program.empty()) throw Error(ErrorKind::validation, "gate program is empty");
    params.validate();
    if (!(epsilon > 0.0)) throw Error(ErrorKind::validation, "drive amplitude must be positive");

    DriveSchedule out;
    // Lamb-Dicke guard from the ideal program on vacuum
    {
        const int d = options.guard_dim;
        QuantumState s = fock(d, 0);
        double x2 = quadrature_sq(s);
        for (const auto& g : program) {
            s = QuantumState::normalized(gate_matrix(g, d, GuardMode::report).matrix() * s.vector(), s.space());
            x2 = std::max(x2, quadrature_sq(s));
        }
        const double ld = std::abs(2.0 * params.g / params.omega) * std::sqrt(x2);
        if (ld > kLambDickeRefuse)
            throw Error(ErrorKind::lamb_dicke, "Lamb-Dicke parameter " + std::to_string(ld) + " exceeds 1");
        if (ld > kLambDickeWarn) out.warnings.push_back("Lamb-Dicke parameter " + std::to_string(ld) + " exceeds 0.5");
    }

    const double period = kTwoPi / params.omega;
    bool flipped = false;  // qubit currently in |−_x⟩ of the n-photon frame
    // n-photon-frame R_z(π/2) maps |+_x⟩ to |−_x⟩; in the lab frame it reads
    // T R_z(θ) T† = R_x(−θ).
    const QubitPulse flip{PulseAxis::x, -kPi / 2.0, 0};

    for (const auto& gate : program) {
        gate.validate();
        Segment seg;
        seg.gate = gate;
        const bool conj = is_conjugate(gate);
        double phase = gate.phase;
        if (conj && options.conjugation == ConjugationMethod::phase_shift) phase += kPi;
        const bool want_flip = conj && options.conjugation == ConjugationMethod::pi_pulse;
        if (want_flip != flipped) {
            QubitPulse p = flip;
            p.index = out.segments.size();
            out.pulses.push_back(p);
            flipped = want_flip;
        }
        seg.tones = tuning_for_gate(GateKind::nphot(gate.n, phase), params, epsilon);
        seg.duration = gate_time(gate, params, epsilon);
        if (options.snap_to_periods) {
            const double periods = std::ceil(seg.duration / period - 1e-9);
            seg.idle = std::max(0.0, periods * period - seg.duration);
        }
        out.segments.push_back(seg);
    }
    if (flipped) {
        QubitPulse p = flip;
        p.angle = kPi / 2.0;
        p.index = out.segments.size();
        out.pulses.push_back(p);
    }
    return out;
}

QuantumState prepare_lab_state(const QuantumState& boson, const RabiParams& params, FrameMode frame) {
    if (boson.space().kind != SpaceKind::boson) throw Error(ErrorKind::usage, "initial state must be bosonic");
    if (!boson.is_pure()) throw Error(ErrorKind::usage, "initial bosonic state must be pure");
    if (frame == FrameMode::approximate) return product(qubit0(), boson);
    return to_lab(product(plus_x(), boson), params, 0.0);
}

Projection read_out(const QuantumState& lab, const RabiParams& params, double t, FrameMode frame,
                    QubitReadout readout) {
    QuantumState s = lab;
    QubitOutcome outcome = QubitOutcome::plus_x;
    if (frame == FrameMode::exact) {
        s = to_nphot(lab, params, t);
    } else {
        // lab ≈ U_0 |ψ⟩|0⟩
        const Vector u0dag = u0_diagonal(lab.space().boson_dim, params.omega, t, +1.0);
        s = apply_unitary(Matrix(u0dag.asDiagonal()), lab);
        outcome = QubitOutcome::qubit0;
    }
    if (readout == QubitReadout::trace_out) return {trace_out_qubit(s), 1.0};
    return project_qubit_boson(s, outcome);
}

ScheduleRun simulate_schedule(const DriveSchedule& schedule, const RabiParams& params, const QuantumState& boson,
                              const SimulationOptions& options) {
    QuantumState lab0 = prepare_lab_state(boson, params, options.frame);
    Evolved ev = evolve_schedule(schedule, params, std::move(lab0), options);
    Projection p = read_out(ev.state, params, ev.t_end, options.frame, options.readout);
    return {std::move(p.state), std::move(ev.state), p.probability, ev.stats};
}

// ---- cubic-phase synthesis --------------------------------------------------

double CubicSpec::g1() const { return EffectiveCoupling::from(params, 1, epsilon).g_n; }
double CubicSpec::g2() const { return EffectiveCoupling::from(params, 2, epsilon).g_n; }
double CubicSpec::g4() const { return EffectiveCoupling::from(params, 4, epsilon).g_n; }

double CubicSpec::delta() const { return 8.0 * tau1 * g1() * tau2 * g2() * tau4 * g4(); }

void CubicSpec::validate() const {
    params.validate();
    if (!(epsilon >= 0.0)) throw Error(ErrorKind::validation, "drive amplitude must be >= 0");
    if (n_blocks < 0) throw Error(ErrorKind::validation, "block count must be >= 0");
    for (double tau : {tau1, tau2, tau4}) {
        if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::validation, "durations must be >= 0");
        const double periods = params.omega * tau / kTwoPi;
        if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods))
            throw Error(ErrorKind::validation, "durations must be whole oscillator periods so that U_0 = I");
    }
    if (std::abs(delta()) > kMaxTrotterDelta)
        throw Error(ErrorKind::trotter_regime, "δ = " + std::to_string(delta()) + " exceeds 1e-3");
}

CubicSpec CubicSpec::from_periods(double periods1, double periods2, double periods4, int n_blocks,
                                  const RabiParams& params, double epsilon) {
    const double period = kTwoPi / params.omega;
    CubicSpec s;
    s.tau1 = periods1 * period;
    s.tau2 = periods2 * period;
    s.tau4 = periods4 * period;
    s.n_blocks = n_blocks;
    s.params = params;
    s.epsilon = epsilon;
    s.validate();
    return s;
}

Operator cubic_h1s(const CubicSpec& spec, int dim) {
    const Matrix a = annihilation(dim).matrix();
    return Operator((I * spec.g1()) * (a.adjoint() - a), Space::boson(dim), kHermitian);
}

Operator cubic_h2s(const CubicSpec& spec, int dim) {
    const Matrix a2 = power(annihilation(dim).matrix(), 2);
    return Operator((I * spec.g2()) * (a2.adjoint() - a2), Space::boson(dim), kHermitian);
}

Operator cubic_h4(const CubicSpec& spec, int dim) {
    const Matrix a4 = power(annihilation(dim).matrix(), 4);
    return Operator(spec.g4() * (a4 + a4.adjoint()), Space::boson(dim), kHermitian);
}

Operator cubic_block_analytic(const CubicSpec& spec, int dim) {
    spec.validate();
    const Matrix u1 = matrix_exponential(cubic_h1s(spec, dim), cplx(0.0, -spec.tau1)).matrix();
    const Matrix u2 = matrix_exponential(cubic_h2s(spec, dim), cplx(0.0, -spec.tau2)).matrix();
    const Matrix u4 = matrix_exponential(cubic_h4(spec, dim), cplx(0.0, -spec.tau4)).matrix();
    const Matrix u1d = u1.adjoint();
    const Matrix u2d = u2.adjoint();
    const Matrix u4d = u4.adjoint();
    Matrix b = u1d * u4d;
    b = b * u2d;
    b = b * u4;
    b = b * u2;
    b = b * u1;
    b = b * u2d;
    b = b * u4d;
    b = b * u2;
    b = b * u4;
    return Operator(std::move(b), Space::boson(dim), kUnitary);
}

Operator cubic_sequence(const CubicSpec& spec, int dim) {
    const Matrix block = cubic_block_analytic(spec, dim).matrix();
    Matrix u = Matrix::Identity(dim, dim);
    for (int k = 0; k < spec.n_blocks; ++k) u = u * block;
    return Operator(std::move(u), Space::boson(dim), kUnitary);
}

Operator cubic_gate(int dim, double gamma_c, GuardMode guard) {
    if (!std::isfinite(gamma_c)) throw Error(ErrorKind::validation, "cubicity must be finite");
    const Matrix a = annihilation(dim).matrix();
    const Matrix x = a + a.adjoint();
    const Operator x3(x * x * x, Space::boson(dim), kHermitian);
    Operator u = matrix_exponential(x3, cplx(0.0, -gamma_c));
    check_leakage(QuantumState::pure(u.matrix().col(0), u.space()), guard, "cubic_gate");
    return u;
}

// ---- cat-like superpositions ------------------------------------------------

QuantumState cat_state(int dim, int n, double gamma, const RabiParams& params, CatConjugation conjugation,
                       GuardMode guard) {
    params.validate();
    const Matrix g = gate_matrix({n, 0.0, gamma, Branch::plus_x}, dim, GuardMode::report).matrix();
    Vector v = Vector::Unit(dim, 0);
    const bool exact = conjugation == CatConjugation::exact_D;
    const Matrix d = exact ? displacement(dim, -params.g / params.omega).matrix() : Matrix::Identity(dim, dim);
    v = d.adjoint() * v;
    v = (g * v + g.adjoint() * v).eval();
    v = d * v;
    if (v.norm() < 1e-12) throw Error(ErrorKind::degenerate_superposition, "G + G† annihilates the input state");
    QuantumState s = QuantumState::normalized(std::move(v), Space::boson(dim));
    check_leakage(s, guard, "cat_state");
    return s;
}

ScheduleRun cat_drive_level(int dim, int n, double gamma, const RabiParams& params, double epsilon, double rel_tol,
                            double abs_tol) {
    CompileOptions copt;
    copt.guard_dim = dim;
    const DriveSchedule schedule = compile_schedule({GateSpec{n, 0.0, gamma, Branch::plus_x}}, params, epsilon, copt);
    SimulationOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    Evolved ev = evolve_schedule(schedule, params, product(plus_x(), fock(dim, 0)), opt);
    // whole periods, so U_0 = I and the lab qubit is measured directly
    Projection p = project_qubit_boson(ev.state, QubitOutcome::plus_x);
    return {std::move(p.state), std::move(ev.state), p.probability, ev.stats};
}

}  // namespace rabi
