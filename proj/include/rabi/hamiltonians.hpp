// hamiltonians.hpp: The driven Rabi Hamiltonian, its displaced and
// interaction frames, the effective n-photon Hamiltonians, and the drive
// tuning rules that select them.
//
// Units: ω ≡ 1 is the convention the rest of the library assumes, but every
// function honors params.omega so the algebra stays checkable.
#pragma once

#include "rabi/fock.hpp"
#include "rabi/generator.hpp"

#include <array>
#include <utility>

namespace rabi {

struct RabiParams {
    double omega = 1.0;
    double g = 0.0;

    void validate() const;
};

struct DriveTone {
    double delta = 0.0;    // detuning Δ_j
    double epsilon = 0.0;  // amplitude ε_j ≥ 0
    double phase = 0.0;    // φ_j in [0, 2π)

    void validate() const;
};

using DriveTones = std::array<DriveTone, 2>;

// g_n = (ε/2) (2g/ω)^n / n!
struct EffectiveCoupling {
    int n = 1;
    double g_n = 0.0;

    static EffectiveCoupling from(const RabiParams& params, int n, double epsilon);
};

// Σ_j (ε_j/2) cos(Δ_j t + φ_j) and Σ_j (ε_j/2) sin(Δ_j t + φ_j)
std::pair<double, double> drive_coefficients(const DriveTones& tones, double t);

// H_lab = ω a†a + g σ_x (a + a†) + Σ_j (ε_j/2)[cos(Δ_j t+φ_j) σ_z + sin(Δ_j t+φ_j) σ_y]
Generator lab_generator(const RabiParams& params, const DriveTones& tones, int dim);
Operator h_lab(const RabiParams& params, const DriveTones& tones, double t, int dim);

// T(α) = (1/√2)[[𝒟†(α), 𝒟(α)], [−𝒟†(α), 𝒟(α)]] in the qubit basis.
Operator qubit_displacement_T(int dim, cplx alpha);

// Displaced frame: ω a†a + Σ_j (ε_j/2)[σ^+ e^{2g(a−a†)/ω} e^{−i(Δ_j t+φ_j)} + H.c.]
Operator h_a(const RabiParams& params, const DriveTones& tones, double t, int dim);

// Interaction frame of ω a†a: as h_a without ω a†a, with a → a e^{−iωt}.
Operator h_b(const RabiParams& params, const DriveTones& tones, double t, int dim);

// g_n σ_x (a^n e^{−iφ} + a†^n e^{iφ})
Operator h_nphot(const RabiParams& params, int n, double phase, double epsilon, int dim);

// i g_n σ_y (a†^n − a^n)
Operator h_nphot_s(const RabiParams& params, int n, double epsilon, int dim);

// (g_0 − g_2) σ_x − 2 g_2 σ_x a†a with g_0 = ε/2
Operator h_rotation(const RabiParams& params, double epsilon, int dim);

// Angle θ of the conditional rotation e^{−iθ a†a} produced by h_rotation
// after time t with the qubit in the σ_x eigenstate of the given sign.
double rotation_angle(const RabiParams& params, double epsilon, double t, int sigma_x_sign);

// Λ(t) = T(−g/ω) U_0(t), U_0(t) = e^{−iωt a†a}; |Ψ_lab⟩ = Λ |Ψ_n-phot⟩.
Operator frame_lambda(const RabiParams& params, double t, int dim);
QuantumState to_lab(const QuantumState& nphot, const RabiParams& params, double t);
QuantumState to_nphot(const QuantumState& lab, const RabiParams& params, double t);

enum class QubitOutcome { plus_x, minus_x, qubit0, qubit1 };

struct Projection {
    QuantumState state;  // composite, normalized
    double probability;
};

Projection project_qubit(const QuantumState& state, QubitOutcome outcome);

// Bosonic state conditioned on the qubit outcome, i.e. ⟨outcome| acting on
// the qubit factor, normalized. Mixed inputs yield mixed outputs.
Projection project_qubit_boson(const QuantumState& state, QubitOutcome outcome);

QuantumState qubit_state(QubitOutcome outcome);

enum class GateKindTag { displacement, squeeze, nphot, nphot_s, rotation };

struct GateKind {
    GateKindTag tag = GateKindTag::nphot;
    int n = 1;
    double phase = 0.0;

    static GateKind displacement(double phase) { return {GateKindTag::displacement, 1, phase}; }
    static GateKind squeeze(double phase) { return {GateKindTag::squeeze, 2, phase}; }
    static GateKind nphot(int n, double phase) { return {GateKindTag::nphot, n, phase}; }
    static GateKind nphot_s(int n) { return {GateKindTag::nphot_s, n, 0.0}; }
    static GateKind rotation() { return {GateKindTag::rotation, 0, 0.0}; }
};

DriveTones tuning_for_gate(const GateKind& kind, const RabiParams& params, double epsilon);

// Wraps an angle into [0, 2π).
double wrap_phase(double phi);

}  // namespace rabi
