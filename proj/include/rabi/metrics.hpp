// metrics.hpp: Wigner function, mana, fidelity, photon statistics and the
// optimal-amplitude search.
//
// Quadratures are q = (a + a†)/√2 and p = i(a† − a)/√2, so a coherent state
// |β⟩ peaks at (q, p) = √2 (Re β, Im β) and W integrates to one over dq dp.
#pragma once

#include "rabi/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace rabi {

struct WignerGrid {
    double q_min = -8.0;
    double q_max = 8.0;
    double p_min = -8.0;
    double p_max = 8.0;
    int n_q = 321;
    int n_p = 321;

    void validate() const;
    double dq() const { return (q_max - q_min) / (n_q - 1); }
    double dp() const { return (p_max - p_min) / (n_p - 1); }
    double q(int i) const { return q_min + i * dq(); }
    double p(int j) const { return p_min + j * dp(); }

    // Same spacing, twice the extent in each direction.
    WignerGrid doubled_extent() const;
    // Same extent, half the spacing.
    WignerGrid doubled_resolution() const;

    // Square grid reaching past the outer turning point √(2·dim + 1) of the
    // highest Fock level of a truncation, with the default extent as a floor.
    static WignerGrid covering(int dim, double spacing = 0.05);
};

// values(i, j) = W(q_i, p_j)
struct WignerMap {
    WignerGrid grid;
    Eigen::MatrixXd values;

    // Trapezoid-rule ∬ W dq dp
    double integral() const;
    // Trapezoid-rule ∬ |W| dq dp
    double abs_integral() const;
};

// W at arbitrary phase-space points through the Laguerre expansion of the
// Fock-basis matrix elements.
Eigen::VectorXd wigner_points(const QuantumState& state, const Eigen::VectorXd& q, const Eigen::VectorXd& p);

WignerMap wigner(const QuantumState& state, const WignerGrid& grid = {});

// (1/π) Tr[ρ 𝒟(β) Π 𝒟†(β)], β = (q + ip)/√2. Slow reference.
double wigner_parity(const QuantumState& state, double q, double p);

// Tolerance on ∬W for a grid to count as adequate.
inline constexpr double kWignerNormTol = 5e-3;
// Largest change of mana under grid doubling for an adequate grid.
inline constexpr double kManaGridTol = 2e-3;

struct ManaResult {
    double mana = 0.0;
    double norm = 0.0;  // ∬W
};

// log₂ ∬|W|; throws grid when ∬W misses one by more than kWignerNormTol.
ManaResult mana(const QuantumState& state, const WignerGrid& grid = {});
ManaResult mana(const WignerMap& map);

struct ManaAdequacy {
    ManaResult base;
    double extent_delta = 0.0;      // |M(doubled extent) − M|
    double resolution_delta = 0.0;  // |M(doubled resolution) − M|
    bool adequate() const {
        return std::abs(base.norm - 1.0) <= kWignerNormTol && extent_delta <= kManaGridTol &&
               resolution_delta <= kManaGridTol;
    }
    double error_estimate() const { return std::max(extent_delta, resolution_delta); }
};

// Mana with the grid-doubling adequacy protocol.
ManaAdequacy mana_checked(const QuantumState& state, const WignerGrid& grid = {});

// ⟨target|ρ|target⟩; the target must be pure.
double fidelity(const QuantumState& rho, const QuantumState& target);

double mean_photon(const QuantumState& state);

// Σ_{m ≥ m0} population
double fock_tail(const QuantumState& state, int m0);

struct AmplitudeFit {
    double gamma = 0.0;
    double fidelity = 0.0;
};

// argmax_γ ⟨γ_n|ρ|γ_n⟩ over [lo, hi]: 64-point scan, then golden section.
// Throws bracket when the best scan point is at an edge or the scan shows
// more than one local maximum.
AmplitudeFit optimal_amplitude(const QuantumState& rho, int n, double lo, double hi);

}  // namespace rabi
