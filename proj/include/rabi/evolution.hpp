// evolution.hpp: Adaptive Schrödinger and Lindblad integrators.
//
// Both integrators use the Dormand–Prince 5(4) embedded pair on the flattened
// state (ψ of size D, or ρ of size D²). Step size is bounded by
// IntegratorSpec::max_step, which callers derive from the fastest drive
// frequency (see IntegratorSpec::for_tones).
#pragma once

#include "rabi/fock.hpp"
#include "rabi/generator.hpp"
#include "rabi/hamiltonians.hpp"

#include <functional>
#include <vector>

namespace rabi {

struct NoiseConfig {
    double rate_a = 0.0;
    double rate_adag = 0.0;
    double rate_sz = 0.0;
    double rate_sminus = 0.0;

    void validate() const;
    bool any() const { return rate_a > 0.0 || rate_adag > 0.0 || rate_sz > 0.0 || rate_sminus > 0.0; }
};

struct IntegratorSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.05;
    int method_order = 5;
    // Integrate in the frame of the generator's free diagonal (ω a†a).
    bool interaction_frame = false;

    void validate() const;

    // max_step = 2π / (40 · max(|Δ_j|, ω))
    static IntegratorSpec for_tones(const DriveTones& tones, double omega, double rel_tol = 1e-8,
                                    double abs_tol = 1e-10);
};

struct EvolutionStats {
    long steps = 0;
    long rejected = 0;
    long rhs_evals = 0;
    double norm_drift = 0.0;      // pure: ‖ψ‖ − 1 before renormalization
    double trace_drift = 0.0;     // mixed: Tr ρ − 1
    double min_eigenvalue = 0.0;  // mixed only
};

// A jump operator with its rate; applied as Γ(AρA† − {A†A, ρ}/2).
struct JumpOperator {
    SparseMatrix op;
    double rate = 0.0;
};

// Jump operators a, a†, σ_z, σ^− lifted to the composite space (or a, a† for
// a bosonic space), skipping zero rates.
std::vector<JumpOperator> jump_operators(const NoiseConfig& noise, Space space);

// Γ(AρA† − {A†A, ρ}/2)
Operator dissipator_apply(const Operator& a, double gamma, const Matrix& rho);

QuantumState evolve_pure(const Generator& h, const QuantumState& psi0, double t_final,
                         const IntegratorSpec& spec, double t_start = 0.0,
                         EvolutionStats* stats = nullptr);

QuantumState evolve_pure(const std::function<Operator(double)>& h, const QuantumState& psi0,
                         double t_final, const IntegratorSpec& spec, double t_start = 0.0,
                         EvolutionStats* stats = nullptr);

// Pure inputs are promoted to density matrices.
QuantumState evolve_lindblad(const Generator& h, const QuantumState& rho0, const NoiseConfig& noise,
                             double t_final, const IntegratorSpec& spec, double t_start = 0.0,
                             EvolutionStats* stats = nullptr);

QuantumState evolve_lindblad(const std::function<Operator(double)>& h, const QuantumState& rho0,
                             const NoiseConfig& noise, double t_final, const IntegratorSpec& spec,
                             double t_start = 0.0, EvolutionStats* stats = nullptr);

}  // namespace rabi
