// gates.hpp: Analytic target gates, multi-squeezed and cat states, drive
// schedule compilation and the Trotterized cubic-phase sequence.
#pragma once

#include "rabi/evolution.hpp"
#include "rabi/fock.hpp"
#include "rabi/hamiltonians.hpp"

#include <string>
#include <vector>

namespace rabi {

// Qubit branch the gate is realized on. With the qubit in |+_x⟩ the
// effective Hamiltonian g_n σ_x X_φ acts as +g_n X_φ, so the gate carries
// the minus sign in its exponent.
enum class Branch { plus_x, minus_x };

// G_{n,φ} = exp(∓iγ (aⁿ e^{−iφ} + a†ⁿ e^{iφ})), minus for plus_x.
struct GateSpec {
    int n = 1;
    double phase = 0.0;
    double gamma = 0.0;
    Branch branch = Branch::plus_x;

    void validate() const;
    // Same gate, opposite branch.
    GateSpec inverse() const;
};

// Whether the truncation guard throws or only reports.
enum class GuardMode { enforce, report };

// Fraction of dim inspected by the truncation guard, and its threshold.
inline constexpr int kLeakageWindowDivisor = 10;
inline constexpr double kLeakageThreshold = 1e-6;

// Top-dim/10 population of a bosonic state; throws leakage_guard above the
// threshold when mode is enforce.
double check_leakage(const QuantumState& state, GuardMode mode, const char* what);

// aⁿ e^{−iφ} + a†ⁿ e^{iφ}
Operator nphoton_quadrature(int dim, int n, double phase);

Operator gate_matrix(const GateSpec& spec, int dim, GuardMode guard = GuardMode::enforce);

// |γ_n⟩ = G_{n,0}|0⟩
QuantumState multi_squeezed(int dim, int n, double gamma, GuardMode guard = GuardMode::enforce);

// Maps γ ↦ |γ_n⟩ quickly by diagonalizing the quadrature once.
class MultiSqueezedFamily {
public:
    MultiSqueezedFamily(int dim, int n, double phase = 0.0);

    QuantumState state(double gamma) const;
    double mean_photon(double gamma) const;
    int dim() const { return dim_; }
    int order() const { return n_; }

private:
    int dim_;
    int n_;
    HermitianPropagator prop_;
    Vector vacuum_;
};

// Smallest γ ≥ 0 with ⟨γ_n|a†a|γ_n⟩ = target (1e-6 relative). The energy is
// scanned upward from γ = 0 and must rise monotonically up to the crossing.
double energy_to_gamma(int dim, int n, double target_energy);

// ---- drive schedules --------------------------------------------------------

enum class ConjugationMethod { phase_shift, pi_pulse };

enum class PulseAxis { x, y, z };

// Instantaneous lab-frame qubit rotation e^{−iθ σ_axis}, applied before the
// segment at `index` (index == segments.size() means after the last one).
struct QubitPulse {
    PulseAxis axis = PulseAxis::x;
    double angle = 0.0;
    std::size_t index = 0;
};

// Drives are on for `duration` = γ/g_n, then off for `idle` so the segment
// spans a whole number of oscillator periods. With the drives off the lab
// Hamiltonian is ωa†a in the displaced frame, so the idle tail only
// contributes the free rotation that vanishes at whole periods.
struct Segment {
    DriveTones tones{};
    double duration = 0.0;
    double idle = 0.0;
    GateSpec gate{};

    double span() const { return duration + idle; }
};

struct DriveSchedule {
    std::vector<Segment> segments;
    std::vector<QubitPulse> pulses;
    std::vector<std::string> warnings;

    double total_duration() const;
};

struct CompileOptions {
    ConjugationMethod conjugation = ConjugationMethod::phase_shift;
    bool snap_to_periods = true;
    // Truncation used to evaluate the Lamb-Dicke guard from the analytic
    // program acting on vacuum.
    int guard_dim = 60;
};

// Lamb-Dicke thresholds on (2g/ω)·√⟨(a+a†)²⟩.
inline constexpr double kLambDickeWarn = 0.5;
inline constexpr double kLambDickeRefuse = 1.0;

// t_f = γ / g_n
double gate_time(const GateSpec& gate, const RabiParams& params, double epsilon);

DriveSchedule compile_schedule(const std::vector<GateSpec>& program, const RabiParams& params, double epsilon,
                               const CompileOptions& options = {});

// Product of the analytic gates in program order (last gate leftmost).
Operator program_unitary(const std::vector<GateSpec>& program, int dim, GuardMode guard = GuardMode::report);

// Lab-frame qubit rotation e^{−iθ σ_axis} on the composite space.
Operator qubit_pulse(const QubitPulse& pulse, int dim);

// Frame handling at the start and end of a drive-level run.
//   exact:       prepare Λ(0)|ψ⟩|+_x⟩, read out through Λ(t)†
//   approximate: prepare |ψ⟩|0⟩, read out through U_0(t) with the qubit in |0⟩
enum class FrameMode { exact, approximate };

// How the bosonic state is extracted after reading out the frame.
enum class QubitReadout { project, trace_out };

struct ScheduleRun {
    QuantumState boson;      // bosonic state after readout
    QuantumState composite;  // lab-frame state at the end of the schedule
    double probability = 1.0;  // projection probability (1 for trace_out)
    EvolutionStats stats;
};

struct SimulationOptions {
    FrameMode frame = FrameMode::exact;
    QubitReadout readout = QubitReadout::project;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    // Integrate in the frame of ωa†a; removes the stiff free rotation of
    // high Fock levels without changing the result.
    bool interaction_frame = true;
    NoiseConfig noise{};  // any() switches to the Lindblad integrator
};

// Prepared lab-frame initial state for a bosonic input.
QuantumState prepare_lab_state(const QuantumState& boson, const RabiParams& params, FrameMode frame);

// Bosonic state read out from a lab-frame state at time t.
Projection read_out(const QuantumState& lab, const RabiParams& params, double t, FrameMode frame,
                    QubitReadout readout);

ScheduleRun simulate_schedule(const DriveSchedule& schedule, const RabiParams& params, const QuantumState& boson,
                              const SimulationOptions& options = {});

// ---- cubic-phase synthesis --------------------------------------------------

struct CubicSpec {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double tau4 = 0.0;
    int n_blocks = 1;
    RabiParams params{1.0, 0.05};
    double epsilon = 0.01;

    // Couplings g_1, g_2, g_4 implied by params and epsilon.
    double g1() const;
    double g2() const;
    double g4() const;
    // δ = 8 τ_1 g_1 τ_2 g_2 τ_4 g_4
    double delta() const;
    double cubicity() const { return n_blocks * delta(); }

    // ωτ/2π must be a non-negative integer and δ ≤ 1e-3.
    void validate() const;

    // Durations given in oscillator periods; the result is validated.
    static CubicSpec from_periods(double periods1, double periods2, double periods4, int n_blocks,
                                  const RabiParams& params, double epsilon);
};

inline constexpr double kMaxTrotterDelta = 1e-3;

// i g_1 (a† − a), i g_2 (a†² − a²), g_4 (a⁴ + a†⁴)
Operator cubic_h1s(const CubicSpec& spec, int dim);
Operator cubic_h2s(const CubicSpec& spec, int dim);
Operator cubic_h4(const CubicSpec& spec, int dim);

// U_1† (U_4† U_2† U_4 U_2) U_1 (U_2† U_4† U_2 U_4): the group commutator of
// U_1† with the inner commutator, which is ≈ e^{−iδ(a+a†)³}. With U_1 and U_1†
// in the opposite places the same product approximates e^{+iδ(a+a†)³}.
Operator cubic_block_analytic(const CubicSpec& spec, int dim);

// (U_block)^N as a left-to-right fold.
Operator cubic_sequence(const CubicSpec& spec, int dim);

// G_c = exp(−iγ_c (a + a†)³)
Operator cubic_gate(int dim, double gamma_c, GuardMode guard = GuardMode::enforce);

// ---- cat-like superpositions ------------------------------------------------

enum class CatConjugation { exact_D, identity_D };

// 𝒟(G_n + G_n†)𝒟†|0⟩ normalized, 𝒟 = 𝒟(−g/ω) (or I).
QuantumState cat_state(int dim, int n, double gamma, const RabiParams& params,
                       CatConjugation conjugation = CatConjugation::exact_D, GuardMode guard = GuardMode::enforce);

// Drive-level cat preparation: lab |ψ⟩|+_x⟩ evolved under the n-photon
// tuning for γ/g_n, qubit projected on |+_x⟩ in the lab frame, then the free
// rotation U_0 undone. Returns the bosonic state.
ScheduleRun cat_drive_level(int dim, int n, double gamma, const RabiParams& params, double epsilon,
                            double rel_tol = 1e-8, double abs_tol = 1e-10);

}  // namespace rabi
