// protocols.hpp: End-to-end experiment recipes built on the gate compiler,
// the integrators and the metrics. Each returns plain numbers plus the
// states they were computed from, so callers can print or re-analyse them.
#pragma once

#include "rabi/gates.hpp"
#include "rabi/metrics.hpp"

#include <string>
#include <vector>

namespace rabi {

// One multi-squeezed generation run from vacuum: the compiled single-gate
// schedule simulated at drive level and compared with |γ_n⟩.
struct GenerationRun {
    int n = 3;
    double gamma = 0.0;
    double duration = 0.0;
    QuantumState target;
    QuantumState generated;
    QuantumState lab;  // lab-frame composite state at the end of the schedule
    double probability = 1.0;
    double fidelity = 0.0;
    double mana_generated = 0.0;
    double mana_target = 0.0;
    double mean_photon = 0.0;
    EvolutionStats stats;
    std::vector<std::string> warnings;
};

GenerationRun generate_multi_squeezed(int dim, int n, double gamma, const RabiParams& params, double epsilon,
                                      const SimulationOptions& options = {}, const WignerGrid& grid = {});

// Same, with γ chosen so the ideal state carries the requested ⟨a†a⟩.
GenerationRun generate_at_energy(int dim, int n, double energy, const RabiParams& params, double epsilon,
                                 const SimulationOptions& options = {}, const WignerGrid& grid = {});

// Noisy generation followed by the optimal-amplitude fit.
struct NoisyRun {
    GenerationRun run;
    AmplitudeFit fit;
    QuantumState ideal;  // |γ_n^m⟩
    double mana_ideal = 0.0;
};

NoisyRun noisy_generation(int dim, int n, double gamma, const RabiParams& params, double epsilon,
                          double bracket_lo, double bracket_hi, const SimulationOptions& options,
                          const WignerGrid& grid = {});

// W(q, p) along q at fixed p.
struct WignerCut {
    double p = 0.0;
    Eigen::VectorXd q;
    Eigen::VectorXd w;
    bool has_negative() const { return (w.array() < 0.0).any(); }
};

WignerCut wigner_cut(const QuantumState& state, double p, double q_min, double q_max, int points);

struct CubicRun {
    double delta = 0.0;
    double gamma_c = 0.0;
    QuantumState produced;  // (U_block)^N |0⟩
    QuantumState target;    // G_c |0⟩
    double fidelity = 0.0;
    double mana = 0.0;
    double mana_target = 0.0;
    double mean_photon = 0.0;
};

CubicRun run_cubic(const CubicSpec& spec, int dim, const WignerGrid& grid = {});

// Drive-level check of one gate: compiled schedule from `input`, exact frame,
// projected readout, compared with the analytic gate on the same input.
struct GateCheck {
    GateSpec gate;
    double duration = 0.0;
    double fidelity = 0.0;
    double probability = 1.0;
};

GateCheck check_gate(int dim, const GateSpec& gate, const RabiParams& params, double epsilon,
                     const QuantumState& input, const CompileOptions& compile = {},
                     const SimulationOptions& options = {});

// U_1, U_2, U_4 of the cubic block, each simulated once at drive level.
std::vector<GateCheck> check_cubic_species(const CubicSpec& spec, int dim);

struct CatRun {
    int n = 2;
    double gamma = 0.0;
    QuantumState state;
    double probability = 1.0;
    double mean_photon = 0.0;
    double mana = 0.0;
};

CatRun run_cat(int dim, int n, double gamma, const RabiParams& params, double epsilon, const WignerGrid& grid = {});

}  // namespace rabi
