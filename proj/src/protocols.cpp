#include "rabi/protocols.hpp"

#include "rabi/error.hpp"

#include <cmath>
#include <numbers>

namespace rabi {

GenerationRun generate_multi_squeezed(int dim, int n, double gamma, const RabiParams& params, double epsilon,
                                      const SimulationOptions& options, const WignerGrid& grid) {
    CompileOptions copt;
    copt.guard_dim = dim;
    const GateSpec gate{n, 0.0, gamma, Branch::plus_x};
    const DriveSchedule schedule = compile_schedule({gate}, params, epsilon, copt);
    ScheduleRun run = simulate_schedule(schedule, params, fock(dim, 0), options);
    QuantumState target = multi_squeezed(dim, n, gamma, GuardMode::report);

    const double f = fidelity(run.boson, target);
    const double m_gen = mana(run.boson, grid).mana;
    const double m_tgt = mana(target, grid).mana;
    const double photons = mean_photon(run.boson);
    return GenerationRun{.n = n,
                         .gamma = gamma,
                         .duration = schedule.total_duration(),
                         .target = std::move(target),
                         .generated = std::move(run.boson),
                         .lab = std::move(run.composite),
                         .probability = run.probability,
                         .fidelity = f,
                         .mana_generated = m_gen,
                         .mana_target = m_tgt,
                         .mean_photon = photons,
                         .stats = run.stats,
                         .warnings = schedule.warnings};
}

GenerationRun generate_at_energy(int dim, int n, double energy, const RabiParams& params, double epsilon,
                                 const SimulationOptions& options, const WignerGrid& grid) {
    return generate_multi_squeezed(dim, n, energy_to_gamma(dim, n, energy), params, epsilon, options, grid);
}

NoisyRun noisy_generation(int dim, int n, double gamma, const RabiParams& params, double epsilon,
                          double bracket_lo, double bracket_hi, const SimulationOptions& options,
                          const WignerGrid& grid) {
    GenerationRun run = generate_multi_squeezed(dim, n, gamma, params, epsilon, options, grid);
    const AmplitudeFit fit = optimal_amplitude(run.generated, n, bracket_lo, bracket_hi);
    QuantumState ideal = multi_squeezed(dim, n, fit.gamma, GuardMode::report);
    const double m_ideal = mana(ideal, grid).mana;
    // F reported against the best-matching amplitude, not the programmed one
    run.fidelity = fit.fidelity;
    return NoisyRun{std::move(run), fit, std::move(ideal), m_ideal};
}

WignerCut wigner_cut(const QuantumState& state, double p, double q_min, double q_max, int points) {
    if (points < 2 || !(q_max > q_min)) throw Error(ErrorKind::grid, "cross section needs >= 2 points on an increasing range");
    WignerCut cut;
    cut.p = p;
    cut.q = Eigen::VectorXd::LinSpaced(points, q_min, q_max);
    cut.w = wigner_points(state, cut.q, Eigen::VectorXd::Constant(points, p));
    return cut;
}

CubicRun run_cubic(const CubicSpec& spec, int dim, const WignerGrid& grid) {
    spec.validate();
    const Matrix u = cubic_sequence(spec, dim).matrix();
    const Matrix g = cubic_gate(dim, spec.cubicity(), GuardMode::report).matrix();
    QuantumState produced = QuantumState::normalized(u.col(0), Space::boson(dim));
    QuantumState target = QuantumState::normalized(g.col(0), Space::boson(dim));
    const double f = fidelity(produced, target);
    const double m = mana(produced, grid).mana;
    const double mt = mana(target, grid).mana;
    const double photons = mean_photon(produced);
    return CubicRun{.delta = spec.delta(),
                    .gamma_c = spec.cubicity(),
                    .produced = std::move(produced),
                    .target = std::move(target),
                    .fidelity = f,
                    .mana = m,
                    .mana_target = mt,
                    .mean_photon = photons};
}

GateCheck check_gate(int dim, const GateSpec& gate, const RabiParams& params, double epsilon,
                     const QuantumState& input, const CompileOptions& compile, const SimulationOptions& options) {
    CompileOptions copt = compile;
    copt.guard_dim = dim;
    const DriveSchedule schedule = compile_schedule({gate}, params, epsilon, copt);
    const ScheduleRun run = simulate_schedule(schedule, params, input, options);
    const Matrix u = gate_matrix(gate, dim, GuardMode::report).matrix();
    const QuantumState expected = QuantumState::normalized(u * input.vector(), input.space());
    return {gate, schedule.total_duration(), fidelity(run.boson, expected), run.probability};
}

std::vector<GateCheck> check_cubic_species(const CubicSpec& spec, int dim) {
    spec.validate();
    constexpr double half_pi = std::numbers::pi / 2.0;
    const std::vector<GateSpec> species{
        {1, half_pi, spec.g1() * spec.tau1, Branch::plus_x},
        {2, half_pi, spec.g2() * spec.tau2, Branch::plus_x},
        {4, 0.0, spec.g4() * spec.tau4, Branch::plus_x},
    };
    std::vector<GateCheck> out;
    for (const auto& g : species) out.push_back(check_gate(dim, g, spec.params, spec.epsilon, fock(dim, 0)));
    return out;
}

CatRun run_cat(int dim, int n, double gamma, const RabiParams& params, double epsilon, const WignerGrid& grid) {
    ScheduleRun run = cat_drive_level(dim, n, gamma, params, epsilon);
    const double photons = mean_photon(run.boson);
    const double m = mana(run.boson, grid).mana;
    return CatRun{.n = n,
                  .gamma = gamma,
                  .state = std::move(run.boson),
                  .probability = run.probability,
                  .mean_photon = photons,
                  .mana = m};
}

}  // namespace rabi
