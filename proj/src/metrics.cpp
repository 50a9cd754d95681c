#include "rabi/metrics.hpp"

#include "rabi/error.hpp"
#include "rabi/gates.hpp"
#include "rabi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rabi {
namespace {

constexpr double kInvPi = std::numbers::inv_pi;

Matrix boson_density(const QuantumState& state, const char* where) {
    if (state.space().kind != SpaceKind::boson)
        throw Error(ErrorKind::usage, std::string(where) + " needs a bosonic state (trace out or project the qubit)");
    return state.to_density();
}

double trapezoid(const WignerGrid& g, const Eigen::MatrixXd& v) {
    double s = 0.0;
    for (int i = 0; i < g.n_q; ++i) {
        const double wi = (i == 0 || i == g.n_q - 1) ? 0.5 : 1.0;
        for (int j = 0; j < g.n_p; ++j) {
            const double wj = (j == 0 || j == g.n_p - 1) ? 0.5 : 1.0;
            s += wi * wj * v(i, j);
        }
    }
    return s * g.dq() * g.dp();
}

}  // namespace

void WignerGrid::validate() const {
    if (!(q_max > q_min) || !(p_max > p_min)) throw Error(ErrorKind::grid, "grid bounds must be increasing");
    if (n_q < 64 || n_p < 64) throw Error(ErrorKind::grid, "grid needs at least 64 points per axis");
}

WignerGrid WignerGrid::doubled_extent() const {
    WignerGrid g = *this;
    const double cq = 0.5 * (q_min + q_max);
    const double cp = 0.5 * (p_min + p_max);
    g.q_min = cq - (q_max - q_min);
    g.q_max = cq + (q_max - q_min);
    g.p_min = cp - (p_max - p_min);
    g.p_max = cp + (p_max - p_min);
    g.n_q = 2 * (n_q - 1) + 1;
    g.n_p = 2 * (n_p - 1) + 1;
    return g;
}

WignerGrid WignerGrid::doubled_resolution() const {
    WignerGrid g = *this;
    g.n_q = 2 * (n_q - 1) + 1;
    g.n_p = 2 * (n_p - 1) + 1;
    return g;
}

WignerGrid WignerGrid::covering(int dim, double spacing) {
    if (dim < 1 || !(spacing > 0.0)) throw Error(ErrorKind::grid, "covering grid needs dim >= 1 and a positive spacing");
    WignerGrid g;
    const double half = std::max(g.q_max, std::sqrt(2.0 * dim + 1.0) + 4.0);
    const int points = static_cast<int>(std::ceil(2.0 * half / spacing)) + 1;
    g.q_min = g.p_min = -half;
    g.q_max = g.p_max = half;
    g.n_q = g.n_p = std::max(points, 64);
    return g;
}

double WignerMap::integral() const { return trapezoid(grid, values); }
double WignerMap::abs_integral() const { return trapezoid(grid, values.cwiseAbs()); }

Eigen::VectorXd wigner_points(const QuantumState& state, const Eigen::VectorXd& q, const Eigen::VectorXd& p) {
    const Matrix rho = boson_density(state, "wigner");
    if (q.size() != p.size()) throw Error(ErrorKind::invalid_dimension, "q and p point lists differ in length");
    const auto& kt = kernels::active();
    const Index d = rho.rows();
    const std::size_t n = static_cast<std::size_t>(q.size());

    // x = 4|β|² = 2(q² + p²); harmonic phase e^{iθ}
    Eigen::VectorXd x(q.size()), ur(q.size()), ui(q.size());
    for (Index i = 0; i < q.size(); ++i) {
        x(i) = 2.0 * (q(i) * q(i) + p(i) * p(i));
        const double th = std::atan2(p(i), q(i));
        ur(i) = std::cos(th);
        ui(i) = std::sin(th);
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(q.size());
    Eigen::VectorXd base = (-0.5 * x).array().exp().matrix();  // ℓ_0^k before the k-th factor
    Eigen::VectorXd c = Eigen::VectorXd::Ones(q.size());
    Eigen::VectorXd s = Eigen::VectorXd::Zero(q.size());
    Eigen::VectorXd sr(q.size()), si(q.size());
    Eigen::VectorXd l0(q.size()), l1(q.size()), l2(q.size());

    for (Index k = 0; k < d; ++k) {
        if (k > 0) kt.mul_sqrt_scaled(base.data(), x.data(), 1.0 / static_cast<double>(k), n);
        sr.setZero();
        si.setZero();
        // ℓ_m^k = √(m!/(m+k)!) x^{k/2} e^{−x/2} L_m^k(x), normalized recurrence in m
        double* prev = l0.data();
        double* cur = l1.data();
        double* next = l2.data();
        std::copy(base.data(), base.data() + n, cur);
        std::fill(prev, prev + n, 0.0);
        const double kd = static_cast<double>(k);
        for (Index m = 0; m + k < d; ++m) {
            const cplx r = rho(m, m + k) * ((m % 2 == 0) ? 1.0 : -1.0);
            kt.accumulate_complex(r.real(), r.imag(), cur, sr.data(), si.data(), n);
            if (m + k + 1 >= d) break;
            const double md = static_cast<double>(m);
            const double alpha = 2.0 * md + 1.0 + kd;
            const double beta = std::sqrt(md * (md + kd));
            const double inv = 1.0 / std::sqrt((md + 1.0) * (md + 1.0 + kd));
            kt.laguerre_step(next, cur, prev, x.data(), alpha, beta, inv, n);
            std::swap(prev, cur);
            std::swap(cur, next);
        }
        const double scale = (k == 0 ? 1.0 : 2.0) * kInvPi;
        kt.fold_harmonic(w.data(), sr.data(), si.data(), c.data(), s.data(), ur.data(), ui.data(), scale, n);
    }
    return w;
}

WignerMap wigner(const QuantumState& state, const WignerGrid& grid) {
    grid.validate();
    const Index total = static_cast<Index>(grid.n_q) * grid.n_p;
    Eigen::VectorXd q(total), p(total);
    for (int i = 0; i < grid.n_q; ++i)
        for (int j = 0; j < grid.n_p; ++j) {
            q(static_cast<Index>(i) * grid.n_p + j) = grid.q(i);
            p(static_cast<Index>(i) * grid.n_p + j) = grid.p(j);
        }
    const Eigen::VectorXd w = wigner_points(state, q, p);
    WignerMap map{grid, Eigen::MatrixXd(grid.n_q, grid.n_p)};
    for (int i = 0; i < grid.n_q; ++i)
        for (int j = 0; j < grid.n_p; ++j) map.values(i, j) = w(static_cast<Index>(i) * grid.n_p + j);
    return map;
}

double wigner_parity(const QuantumState& state, double q, double p) {
    const Matrix rho = boson_density(state, "wigner_parity");
    const int d = static_cast<int>(rho.rows());
    const cplx beta = cplx(q, p) * M_SQRT1_2;
    const Matrix dm = displacement(d, beta).matrix();
    const Matrix shifted = dm.adjoint() * rho * dm;
    double par = 0.0;
    for (int m = 0; m < d; ++m) par += ((m % 2 == 0) ? 1.0 : -1.0) * shifted(m, m).real();
    return par * kInvPi;
}

ManaResult mana(const WignerMap& map) {
    const double norm = map.integral();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kWignerNormTol)
        throw Error(ErrorKind::grid, "Wigner normalization " + std::to_string(norm) + " misses 1 by more than 5e-3");
    return {std::log2(map.abs_integral()), norm};
}

ManaResult mana(const QuantumState& state, const WignerGrid& grid) { return mana(wigner(state, grid)); }

ManaAdequacy mana_checked(const QuantumState& state, const WignerGrid& grid) {
    ManaAdequacy a;
    a.base = mana(state, grid);
    a.extent_delta = std::abs(mana(state, grid.doubled_extent()).mana - a.base.mana);
    a.resolution_delta = std::abs(mana(state, grid.doubled_resolution()).mana - a.base.mana);
    return a;
}

double fidelity(const QuantumState& rho, const QuantumState& target) {
    if (!target.is_pure()) throw Error(ErrorKind::usage, "fidelity target must be a pure state");
    if (!(rho.space() == target.space())) throw Error(ErrorKind::composition, "fidelity between different spaces");
    const Vector& t = target.vector();
    if (rho.is_pure()) return std::norm(t.dot(rho.vector()));
    return std::real(t.dot(rho.density_matrix() * t));
}

double mean_photon(const QuantumState& state) {
    const Eigen::VectorXd pop = fock_populations(state);
    double e = 0.0;
    for (Index m = 0; m < pop.size(); ++m) e += static_cast<double>(m) * pop(m);
    return e;
}

double fock_tail(const QuantumState& state, int m0) {
    const Eigen::VectorXd pop = fock_populations(state);
    if (m0 < 0 || m0 >= pop.size()) throw Error(ErrorKind::out_of_range, "tail start must satisfy 0 <= m0 < dim");
    return pop.tail(pop.size() - m0).sum();
}

AmplitudeFit optimal_amplitude(const QuantumState& rho, int n, double lo, double hi) {
    if (!(hi > lo)) throw Error(ErrorKind::validation, "amplitude bracket must be increasing");
    const Matrix r = boson_density(rho, "optimal_amplitude");
    const int d = static_cast<int>(r.rows());
    const MultiSqueezedFamily family(d, n);
    auto f = [&](double g) {
        const QuantumState s = family.state(g);
        return std::real(s.vector().dot(r * s.vector()));
    };

    constexpr int kScan = 64;
    std::vector<double> gs(kScan), fs(kScan);
    for (int i = 0; i < kScan; ++i) {
        gs[i] = lo + (hi - lo) * i / (kScan - 1);
        fs[i] = f(gs[i]);
    }
    const int best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
    if (best == 0 || best == kScan - 1)
        throw Error(ErrorKind::bracket, "fidelity maximum lies at the bracket edge");
    int peaks = 0;
    for (int i = 1; i + 1 < kScan; ++i)
        if (fs[i] > fs[i - 1] && fs[i] >= fs[i + 1]) ++peaks;
    if (peaks > 1) throw Error(ErrorKind::bracket, "bracket holds more than one fidelity maximum");

    // golden section on the scan cell pair around the best point
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = gs[best - 1];
    double b = gs[best + 1];
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    constexpr double kTol = 1e-8;
    while (b - a > kTol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double g = 0.5 * (a + b);
    return {g, f(g)};
}

}  // namespace rabi
