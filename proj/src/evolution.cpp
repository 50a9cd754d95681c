#include "rabi/evolution.hpp"

#include "rabi/error.hpp"
#include "rabi/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace rabi {

void NoiseConfig::validate() const {
    for (double r : {rate_a, rate_adag, rate_sz, rate_sminus})
        if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorKind::validation, "noise rates must be finite and >= 0");
}

void IntegratorSpec::validate() const {
    auto tol_ok = [](double v) { return v > 0.0 && v <= 1e-2; };
    if (!tol_ok(rel_tol) || !tol_ok(abs_tol)) throw Error(ErrorKind::validation, "integrator tolerances must lie in (0, 1e-2]");
    if (!(max_step > 0.0) || !std::isfinite(max_step)) throw Error(ErrorKind::validation, "max_step must be positive");
    if (method_order < 4 || method_order > 5)
        throw Error(ErrorKind::validation, "method_order must be 4 or 5 (Dormand–Prince 5(4))");
}

IntegratorSpec IntegratorSpec::for_tones(const DriveTones& tones, double omega, double rel_tol, double abs_tol) {
    double fastest = omega;
    for (const auto& tone : tones)
        if (tone.epsilon != 0.0) fastest = std::max(fastest, std::abs(tone.delta));
    IntegratorSpec spec;
    spec.rel_tol = rel_tol;
    spec.abs_tol = abs_tol;
    spec.max_step = 2.0 * std::numbers::pi / (40.0 * fastest);
    return spec;
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// b − b̂
constexpr std::array<double, 7> kE{71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200,
                                   22.0 / 525, -1.0 / 40};

double* as_doubles(Vector& v) { return reinterpret_cast<double*>(v.data()); }
const double* as_doubles(const Vector& v) { return reinterpret_cast<const double*>(v.data()); }

using Rhs = std::function<void(double, const Vector&, Vector&)>;

void dopri5(const Rhs& rhs, Vector& y, double t0, double t1, const IntegratorSpec& spec, EvolutionStats& st) {
    if (t1 < t0) throw Error(ErrorKind::validation, "t_final precedes the start time");
    if (t1 == t0) return;
    const auto& kt = kernels::active();
    const Index n = y.size();
    const std::size_t nd = static_cast<std::size_t>(2 * n);
    std::array<Vector, 7> k;
    for (auto& v : k) v = Vector::Zero(n);
    Vector ytmp(n), ynew(n), err(n);
    const Vector zeros = Vector::Zero(n);

    double t = t0;
    double h = std::min(spec.max_step, 0.1 * spec.max_step + 1e-3);
    h = std::min(h, t1 - t0);
    const double h_min = 1e-14 * std::max(1.0, std::abs(t1));
    rhs(t, y, k[0]);
    ++st.rhs_evals;
    double err_prev = 1e-4;

    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        if (h < h_min && t + h < t1) throw Error(ErrorKind::step_underflow, "step size underflow at t = " + std::to_string(t));

        std::array<const double*, 7> kp{};
        std::array<double, 7> coef{};
        for (int s = 1; s < 7; ++s) {
            for (int j = 0; j < s; ++j) {
                kp[j] = as_doubles(k[j]);
                coef[j] = h * kA[s][j];
            }
            Vector& dst = (s == 6) ? ynew : ytmp;
            kt.lincomb(as_doubles(dst), as_doubles(y), coef.data(), kp.data(), static_cast<std::size_t>(s), nd);
            rhs(t + kC[s] * h, dst, k[s]);
            ++st.rhs_evals;
        }
        for (int j = 0; j < 7; ++j) {
            kp[j] = as_doubles(k[j]);
            coef[j] = h * kE[j];
        }
        kt.lincomb(as_doubles(err), as_doubles(zeros), coef.data(), kp.data(), 7, nd);
        const double sq = kt.scaled_sq_error(as_doubles(err), as_doubles(y), as_doubles(ynew), spec.abs_tol,
                                             spec.rel_tol, nd);
        const double enorm = std::sqrt(sq / static_cast<double>(nd));
        if (!std::isfinite(enorm)) throw Error(ErrorKind::numeric, "non-finite error estimate");

        if (enorm <= 1.0) {
            t += h;
            y.swap(ynew);
            std::swap(k[0], k[6]);  // FSAL
            ++st.steps;
            // PI controller (Hairer & Wanner)
            const double e = std::max(enorm, 1e-10);
            double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            fac = std::clamp(fac, 0.2, 5.0);
            err_prev = std::max(enorm, 1e-4);
            h = std::min(h * fac, spec.max_step);
        } else {
            ++st.rejected;
            h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
        }
    }
}

// Phases e^{−i f t} of the free propagator.
Vector free_phases(const Eigen::VectorXd& f, double t) {
    Vector p(f.size());
    for (Index i = 0; i < f.size(); ++i) p(i) = std::exp(-I * (f(i) * t));
    return p;
}

Index pattern_position(const SparseMatrix& m, Index r, Index c) {
    const int* inner = m.innerIndexPtr();
    const int* first = inner + m.outerIndexPtr()[r];
    const int* last = inner + m.outerIndexPtr()[r + 1];
    const int* it = std::lower_bound(first, last, static_cast<int>(c));
    if (it == last || *it != c) throw Error(ErrorKind::numeric, "sparsity pattern lookup failed");
    return it - inner;
}

// H(t) − i·K in the requested frame, as a sparse matrix whose pattern is fixed
// at construction; each call refills the values in place. In the frame of the
// free diagonal f, entry (r, c) picks up the phase e^{i(f_r − f_c)t}.
class FrameHamiltonian {
public:
    FrameHamiltonian(const Generator& gen, bool frame, const SparseMatrix& damping)
        : gen_(gen), frame_(frame), free_(gen.free_diagonal()) {
        const Index d = gen.dim();
        if (free_.size() == 0) free_ = Eigen::VectorXd::Zero(d);
        damping_ = (-I) * damping;
        if (gen.is_dense_function()) return;
        compiled_ = true;

        std::vector<Eigen::Triplet<cplx>> pattern;
        auto mark = [&](const SparseMatrix& m) {
            for (Index r = 0; r < m.outerSize(); ++r)
                for (SparseMatrix::InnerIterator it(m, r); it; ++it) pattern.emplace_back(r, it.col(), 1.0);
        };
        for (const auto& term : gen.terms()) mark(term.op);
        mark(damping_);
        if (!frame_)
            for (Index k = 0; k < d; ++k)
                if (free_(k) != 0.0) pattern.emplace_back(k, k, 1.0);
        m_.resize(d, d);
        m_.setFromTriplets(pattern.begin(), pattern.end());
        m_.makeCompressed();
        const Index nnz = m_.nonZeros();

        auto scatter = [&](const SparseMatrix& src, Vector& dst) {
            for (Index r = 0; r < src.outerSize(); ++r)
                for (SparseMatrix::InnerIterator it(src, r); it; ++it)
                    dst(pattern_position(m_, r, it.col())) += it.value();
        };
        const_vals_ = Vector::Zero(nnz);
        for (const auto& term : gen.terms()) {
            if (!term.coeff) {
                scatter(term.op, const_vals_);
                continue;
            }
            Vector v = Vector::Zero(nnz);
            scatter(term.op, v);
            term_vals_.push_back(std::move(v));
            coeffs_.push_back(&term.coeff);
        }
        scatter(damping_, const_vals_);
        if (!frame_)
            for (Index k = 0; k < d; ++k)
                if (free_(k) != 0.0) const_vals_(pattern_position(m_, k, k)) += free_(k);

        if (frame_) {
            dphase_.resize(nnz);
            for (Index r = 0; r < d; ++r)
                for (Index k = m_.outerIndexPtr()[r]; k < m_.outerIndexPtr()[r + 1]; ++k)
                    dphase_(k) = free_(r) - free_(m_.innerIndexPtr()[k]);
        }
    }

    const SparseMatrix& at(double t) {
        if (!compiled_) {
            m_ = gen_.at(t, !frame_);
            if (damping_.nonZeros() > 0) m_ += damping_;
            m_.makeCompressed();
            if (frame_) {
                for (Index r = 0; r < m_.outerSize(); ++r)
                    for (SparseMatrix::InnerIterator it(m_, r); it; ++it)
                        it.valueRef() *= std::exp(I * ((free_(r) - free_(it.col())) * t));
            }
            return m_;
        }
        Eigen::Map<Vector> vals(m_.valuePtr(), m_.nonZeros());
        vals = const_vals_;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            const cplx c = (*coeffs_[k])(t);
            if (c != cplx(0.0, 0.0)) vals += c * term_vals_[k];
        }
        if (frame_)
            for (Index k = 0; k < vals.size(); ++k)
                if (dphase_(k) != 0.0) vals(k) *= cplx(std::cos(dphase_(k) * t), std::sin(dphase_(k) * t));
        return m_;
    }

    const Eigen::VectorXd& free() const { return free_; }

private:
    const Generator& gen_;
    bool frame_;
    bool compiled_ = false;
    Eigen::VectorXd free_;
    SparseMatrix damping_;
    SparseMatrix m_;
    Vector const_vals_;
    std::vector<Vector> term_vals_;
    std::vector<const Coefficient*> coeffs_;
    Eigen::VectorXd dphase_;
};

// A jump operator with at most one nonzero per row and column admits an
// O(D²) evaluation of AρA†.
struct PreparedJump {
    double rate = 0.0;
    SparseMatrix op;
    bool monomial = false;
    bool real_values = true;
    // A_I = e^{iκt} A in the frame, so AρA† is unchanged there
    bool frame_invariant = true;
    std::vector<Index> col;  // −1 for empty rows
    std::vector<cplx> val;
    std::vector<double> rval;
};

PreparedJump prepare(const JumpOperator& j, const Eigen::VectorXd& free) {
    PreparedJump p;
    p.rate = j.rate;
    p.op = j.op;
    const Index d = j.op.rows();
    p.col.assign(static_cast<std::size_t>(d), -1);
    p.val.assign(static_cast<std::size_t>(d), cplx{});
    p.rval.assign(static_cast<std::size_t>(d), 0.0);
    std::vector<int> col_count(static_cast<std::size_t>(d), 0);
    bool mono = true;
    bool have_kappa = false;
    double kappa = 0.0;
    for (Index r = 0; r < d; ++r) {
        int nnz = 0;
        for (SparseMatrix::InnerIterator it(j.op, r); it; ++it) {
            if (it.value() == cplx(0.0, 0.0)) continue;
            ++nnz;
            p.col[static_cast<std::size_t>(r)] = it.col();
            p.val[static_cast<std::size_t>(r)] = it.value();
            p.rval[static_cast<std::size_t>(r)] = it.value().real();
            if (it.value().imag() != 0.0) p.real_values = false;
            ++col_count[static_cast<std::size_t>(it.col())];
            if (free.size() > 0) {
                const double k = free(r) - free(it.col());
                if (!have_kappa) {
                    kappa = k;
                    have_kappa = true;
                } else if (std::abs(k - kappa) > 1e-12 * std::max(1.0, std::abs(kappa))) {
                    p.frame_invariant = false;
                }
            }
        }
        if (nnz > 1) mono = false;
    }
    for (int c : col_count)
        if (c > 1) mono = false;
    p.monomial = mono;
    return p;
}

// out += rate · A ρ A†  (ρ Hermitian)
void add_jump(const PreparedJump& j, const Eigen::Ref<const Matrix>& rho, Eigen::Ref<Matrix> out) {
    const Index d = rho.rows();
    if (j.monomial && j.real_values) {
        for (Index c = 0; c < d; ++c) {
            const Index pc = j.col[static_cast<std::size_t>(c)];
            if (pc < 0) continue;
            const double wc = j.rate * j.rval[static_cast<std::size_t>(c)];
            const cplx* src = rho.col(pc).data();
            cplx* dst = out.col(c).data();
            for (Index r = 0; r < d; ++r) {
                const Index pr = j.col[static_cast<std::size_t>(r)];
                if (pr >= 0) dst[r] += (wc * j.rval[static_cast<std::size_t>(r)]) * src[pr];
            }
        }
        return;
    }
    if (j.monomial) {
        for (Index c = 0; c < d; ++c) {
            const Index pc = j.col[static_cast<std::size_t>(c)];
            if (pc < 0) continue;
            const cplx vc = std::conj(j.val[static_cast<std::size_t>(c)]) * j.rate;
            for (Index r = 0; r < d; ++r) {
                const Index pr = j.col[static_cast<std::size_t>(r)];
                if (pr < 0) continue;
                out(r, c) += j.val[static_cast<std::size_t>(r)] * vc * rho(pr, pc);
            }
        }
        return;
    }
    const Matrix arho = j.op * rho;
    out += j.rate * (j.op * arho.adjoint());
}

// x = −i H ρ, column by column with explicit real arithmetic.
void neg_i_product(const SparseMatrix& h, const Eigen::Ref<const Matrix>& rho, Matrix& x) {
    const Index d = rho.rows();
    const int* outer = h.outerIndexPtr();
    const int* inner = h.innerIndexPtr();
    const double* hv = reinterpret_cast<const double*>(h.valuePtr());
    for (Index j = 0; j < d; ++j) {
        const double* col = reinterpret_cast<const double*>(rho.col(j).data());
        double* dst = reinterpret_cast<double*>(x.col(j).data());
        for (Index r = 0; r < d; ++r) {
            double re = 0.0;
            double im = 0.0;
            for (int k = outer[r]; k < outer[r + 1]; ++k) {
                const double hr = hv[2 * k];
                const double hi = hv[2 * k + 1];
                const double pr = col[2 * inner[k]];
                const double pi = col[2 * inner[k] + 1];
                re += hr * pr - hi * pi;
                im += hr * pi + hi * pr;
            }
            // −i (re + i im) = im − i re
            dst[2 * r] = im;
            dst[2 * r + 1] = -re;
        }
    }
}

// out = x + x†, in cache-sized tiles.
void add_hermitian_part(const Matrix& x, Eigen::Ref<Matrix> out) {
    const Index d = x.rows();
    constexpr Index kTile = 32;
    for (Index jb = 0; jb < d; jb += kTile)
        for (Index ib = 0; ib < d; ib += kTile) {
            const Index je = std::min(d, jb + kTile);
            const Index ie = std::min(d, ib + kTile);
            for (Index j = jb; j < je; ++j)
                for (Index i = ib; i < ie; ++i) out(i, j) = x(i, j) + std::conj(x(j, i));
        }
}

SparseMatrix damping_operator(const std::vector<PreparedJump>& jumps, Index d) {
    SparseMatrix k(d, d);
    for (const auto& j : jumps) {
        SparseMatrix ada = SparseMatrix(j.op.adjoint()) * j.op;
        k += (0.5 * j.rate) * ada;
    }
    k.makeCompressed();
    return k;
}

void check_state_space(const Generator& h, const QuantumState& s) {
    if (!(h.space() == s.space())) throw Error(ErrorKind::composition, "state and Hamiltonian live on different spaces");
}

}  // namespace

std::vector<JumpOperator> jump_operators(const NoiseConfig& noise, Space space) {
    noise.validate();
    std::vector<JumpOperator> out;
    if (!space.has_boson()) throw Error(ErrorKind::usage, "noise model needs a bosonic mode");
    const int d = space.boson_dim;
    const bool comp = space.kind == SpaceKind::composite;
    auto lift_b = [&](const Operator& b) { return comp ? on_boson(b) : b; };
    auto add = [&](const Operator& op, double rate) {
        if (rate > 0.0) out.push_back({op.matrix().sparseView(0.0, 0.0), rate});
    };
    const Operator a = annihilation(d);
    add(lift_b(a), noise.rate_a);
    add(lift_b(a.adjoint()), noise.rate_adag);
    if (comp) {
        add(on_qubit(sigma_z(), d), noise.rate_sz);
        add(on_qubit(sigma_minus(), d), noise.rate_sminus);
    } else if (noise.rate_sz > 0.0 || noise.rate_sminus > 0.0) {
        throw Error(ErrorKind::usage, "qubit noise on a boson-only space");
    }
    return out;
}

Operator dissipator_apply(const Operator& a, double gamma, const Matrix& rho) {
    if (rho.rows() != a.dim() || rho.cols() != a.dim()) throw Error(ErrorKind::invalid_dimension, "dissipator shape mismatch");
    const Matrix& m = a.matrix();
    const Matrix ada = m.adjoint() * m;
    Matrix out = gamma * (m * rho * m.adjoint() - 0.5 * (ada * rho + rho * ada));
    return Operator(std::move(out), a.space());
}

QuantumState evolve_pure(const Generator& h, const QuantumState& psi0, double t_final, const IntegratorSpec& spec,
                         double t_start, EvolutionStats* stats) {
    spec.validate();
    check_state_space(h, psi0);
    const bool frame = spec.interaction_frame && h.has_free_part();
    FrameHamiltonian hf(h, frame, SparseMatrix(h.dim(), h.dim()));
    const Eigen::VectorXd& f = hf.free();

    Rhs rhs = [&](double t, const Vector& y, Vector& dy) { dy.noalias() = (-I) * (hf.at(t) * y); };

    Vector y = psi0.vector();
    if (frame) y = free_phases(f, t_start).conjugate().cwiseProduct(y);
    EvolutionStats st;
    dopri5(rhs, y, t_start, t_final, spec, st);
    if (frame) y = free_phases(f, t_final).cwiseProduct(y);

    st.norm_drift = y.norm() - 1.0;
    if (stats) *stats = st;
    constexpr double kMaxDrift = 1e-6;
    if (std::abs(st.norm_drift) >= kMaxDrift)
        throw Error(ErrorKind::norm_drift, "norm drift " + std::to_string(st.norm_drift) + " exceeds 1e-6");
    return QuantumState::normalized(std::move(y), psi0.space());
}

QuantumState evolve_pure(const std::function<Operator(double)>& h, const QuantumState& psi0, double t_final,
                         const IntegratorSpec& spec, double t_start, EvolutionStats* stats) {
    const Generator gen = Generator::from_function(psi0.space(), [h](double t) { return h(t).matrix(); });
    return evolve_pure(gen, psi0, t_final, spec, t_start, stats);
}

QuantumState evolve_lindblad(const Generator& h, const QuantumState& rho0, const NoiseConfig& noise, double t_final,
                             const IntegratorSpec& spec, double t_start, EvolutionStats* stats) {
    spec.validate();
    check_state_space(h, rho0);
    const Index d = rho0.dim();
    const bool frame = spec.interaction_frame && h.has_free_part();
    const Eigen::VectorXd f = h.has_free_part() ? h.free_diagonal() : Eigen::VectorXd::Zero(d);
    std::vector<PreparedJump> jumps;
    for (const auto& j : jump_operators(noise, rho0.space())) jumps.push_back(prepare(j, f));
    const SparseMatrix damping = damping_operator(jumps, d);
    FrameHamiltonian hf(h, frame, damping);

    // X = −i H_eff ρ with H_eff = H − iK, K = ½ Σ Γ A†A; then
    // ρ̇ = X + X† + Σ Γ AρA†  (ρ Hermitian)
    Matrix x(d, d), lab(d, d), jump_lab(d, d);
    Rhs rhs = [&](double t, const Vector& y, Vector& dy) {
        dy.resize(d * d);
        Eigen::Map<const Matrix> rho(y.data(), d, d);
        Eigen::Map<Matrix> out(dy.data(), d, d);
        neg_i_product(hf.at(t), rho, x);
        add_hermitian_part(x, out);
        bool need_lab = false;
        for (const auto& j : jumps) {
            if (!frame || j.frame_invariant) add_jump(j, rho, out);
            else need_lab = true;
        }
        if (need_lab) {
            const Vector p = free_phases(f, t);
            lab = p.asDiagonal() * rho * p.conjugate().asDiagonal();
            jump_lab.setZero();
            for (const auto& j : jumps)
                if (!j.frame_invariant) add_jump(j, lab, jump_lab);
            out += p.conjugate().asDiagonal() * jump_lab * p.asDiagonal();
        }
    };

    Matrix r0 = rho0.to_density();
    if (frame) {
        const Vector p = free_phases(f, t_start);
        r0 = p.conjugate().asDiagonal() * r0 * p.asDiagonal();
    }
    Vector y = Eigen::Map<const Vector>(r0.data(), d * d);
    EvolutionStats st;
    dopri5(rhs, y, t_start, t_final, spec, st);

    Matrix rho = Eigen::Map<const Matrix>(y.data(), d, d);
    if (frame) {
        const Vector p = free_phases(f, t_final);
        rho = p.asDiagonal() * rho * p.conjugate().asDiagonal();
    }
    rho = 0.5 * (rho + rho.adjoint());
    st.trace_drift = rho.trace().real() - 1.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    st.min_eigenvalue = es.eigenvalues().minCoeff();
    if (stats) *stats = st;
    constexpr double kMaxTraceDrift = 1e-6;
    constexpr double kMinEigenvalue = -1e-5;
    if (std::abs(st.trace_drift) > kMaxTraceDrift)
        throw Error(ErrorKind::trace_drift, "trace drift " + std::to_string(st.trace_drift) + " exceeds 1e-6");
    if (st.min_eigenvalue < kMinEigenvalue)
        throw Error(ErrorKind::integrator_accuracy,
                    "density matrix eigenvalue " + std::to_string(st.min_eigenvalue) + " below -1e-5");
    rho /= rho.trace().real();
    // Clip the tiny negative spectrum left by truncation error before handing
    // the state to constructors that check positivity at 1e-7.
    if (st.min_eigenvalue < -1e-8) {
        Eigen::SelfAdjointEigenSolver<Matrix> full(rho);
        Eigen::VectorXd lam = full.eigenvalues().cwiseMax(0.0);
        lam /= lam.sum();
        rho = full.eigenvectors() * lam.cast<cplx>().asDiagonal() * full.eigenvectors().adjoint();
    }
    return QuantumState::mixed(std::move(rho), rho0.space());
}

QuantumState evolve_lindblad(const std::function<Operator(double)>& h, const QuantumState& rho0,
                             const NoiseConfig& noise, double t_final, const IntegratorSpec& spec, double t_start,
                             EvolutionStats* stats) {
    const Generator gen = Generator::from_function(rho0.space(), [h](double t) { return h(t).matrix(); });
    return evolve_lindblad(gen, rho0, noise, t_final, spec, t_start, stats);
}

}  // namespace rabi
