#include "rabi/acceptance.hpp"

#include "rabi/error.hpp"
#include "rabi/parallel.hpp"
#include "rabi/protocols.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

namespace rabi {
namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Band {
    double lo;
    double hi;
    bool contains(double v) const { return std::isfinite(v) && v >= lo && v <= hi; }
};

Band around(double c, double tol) { return {c - tol, c + tol}; }
Band relative(double c, double frac) { return {c * (1.0 - frac), c * (1.0 + frac)}; }
Band at_least(double v) { return {v, INFINITY}; }
Band at_most(double v) { return {-INFINITY, v}; }

// Accumulates named measurements; the criterion passes when all do.
class Tally {
public:
    explicit Tally(CriterionReport& r) : r_(r) {}

    bool check(const std::string& label, double v, Band b) {
        const bool ok = b.contains(v);
        std::string range;
        if (std::isinf(b.hi)) range = fmt(">= %.6g", b.lo);
        else if (std::isinf(b.lo)) range = fmt("<= %.6g", b.hi);
        else range = fmt("in [%.6g, %.6g]", b.lo, b.hi);
        r_.details.push_back(fmt("%s %s = %.6g (%s)", ok ? "ok  " : "MISS", label.c_str(), v, range.c_str()));
        return ok;
    }
    bool flag(const std::string& label, bool ok) {
        r_.details.push_back(fmt("%s %s", ok ? "ok  " : "MISS", label.c_str()));
        return ok;
    }
    void note(const std::string& s) { r_.details.push_back("     " + s); }

private:
    CriterionReport& r_;
};

struct Context {
    const AcceptanceOptions& options;

    std::vector<int> dims(int base) const {
        const int d = options.dim > 0 ? options.dim : base;
        if (!options.convergence) return {d};
        return {d, 2 * d};
    }
};

const char* readout_name(QubitReadout r) { return r == QubitReadout::project ? "project" : "trace-out"; }

constexpr QubitReadout kReadouts[] = {QubitReadout::project, QubitReadout::trace_out};

// ---- 1, 2: noiseless tri-squeezed generation at ⟨a†a⟩ = 1 ----------------------

void generation_point(const Context& ctx, CriterionReport& rep, FrameMode frame, Band fid, Band mana_band) {
    Tally t(rep);
    const RabiParams params{1.0, 0.1};
    const double eps = 0.2;
    const auto dims = ctx.dims(100);
    std::vector<std::optional<GenerationRun>> runs(dims.size());
    parallel_for(dims.size(), ctx.options.workers, [&](std::size_t i) {
        SimulationOptions opt;
        opt.frame = frame;
        runs[i] = generate_at_energy(dims[i], 3, 1.0, params, eps, opt);
    });
    bool any = false;
    for (QubitReadout ro : kReadouts) {
        bool ok = true;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            const GenerationRun& r = *runs[i];
            const Projection p = read_out(r.lab, params, r.duration, frame, ro);
            const std::string tag = fmt("dim=%d %s", dims[i], readout_name(ro));
            ok &= t.check(tag + " F", fidelity(p.state, r.target), fid);
            ok &= t.check(tag + " mana", mana(p.state).mana, mana_band);
            t.note(fmt("gamma_3=%.6f target mana=%.4f duration=%.2f steps=%ld", r.gamma, r.mana_target, r.duration,
                       r.stats.steps));
        }
        t.note(fmt("%s readout %s", readout_name(ro), ok ? "matches" : "misses"));
        any |= ok;
    }
    rep.pass = any;
}

void criterion1(const Context& ctx, CriterionReport& rep) {
    generation_point(ctx, rep, FrameMode::exact, at_least(0.98), around(0.63, 0.04));
}

void criterion2(const Context& ctx, CriterionReport& rep) {
    generation_point(ctx, rep, FrameMode::approximate, around(0.90, 0.03), around(0.53, 0.05));
}

// ---- 3: Fock tails ---------------------------------------------------------------

void criterion3(const Context& ctx, CriterionReport& rep) {
    Tally t(rep);
    bool ok = true;
    for (int d : ctx.dims(100)) {
        const QuantumState sq =
            QuantumState::normalized(squeeze(d, std::asinh(1.0)).matrix().col(0), Space::boson(d));
        const double sq_tail = fock_tail(sq, 20);
        for (int n : {3, 4}) {
            const double g = energy_to_gamma(d, n, 1.0);
            const double tail = fock_tail(multi_squeezed(d, n, g, GuardMode::report), 20);
            const std::string tag = fmt("dim=%d n=%d", d, n);
            ok &= t.check(tag + " tail(m>=20)", tail, {0.005, 0.02});
            ok &= t.check(tag + " squeezed-vacuum tail / tail", sq_tail / tail, at_most(1.0 / 50.0));
            t.note(fmt("gamma_%d=%.6f squeezed-vacuum tail=%.3e", n, g, sq_tail));
        }
    }
    rep.pass = ok;
}

// ---- 4: cubic-phase Trotter sequence -------------------------------------------

CubicSpec reference_cubic_spec() { return CubicSpec::from_periods(100, 200, 8000, 1200, RabiParams{1.0, 0.05}, 0.01); }

void criterion4(const Context& ctx, CriterionReport& rep) {
    Tally t(rep);
    const CubicSpec spec = reference_cubic_spec();
    bool ok = t.check("delta", spec.delta(), relative(8.27e-5, 0.01));
    ok &= t.check("gamma_c", spec.cubicity(), relative(1.0 / std::sqrt(32.0 * std::numbers::pi), 0.01));
    const auto dims = ctx.dims(80);
    std::vector<std::optional<CubicRun>> runs(dims.size());
    parallel_for(dims.size(), ctx.options.workers, [&](std::size_t i) { runs[i] = run_cubic(spec, dims[i]); });
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const CubicRun& r = *runs[i];
        const std::string tag = fmt("dim=%d", dims[i]);
        ok &= t.check(tag + " F", r.fidelity, at_least(0.985));
        ok &= t.check(tag + " mana", r.mana, around(0.14, 0.02));
        t.note(fmt("target mana=%.4f <n>=%.4f", r.mana_target, r.mean_photon));
    }
    // drive-level spot check of each gate species (reported, not gated)
    for (const GateCheck& g : check_cubic_species(spec, 30))
        t.note(fmt("drive-level U_%d: gamma=%.4e F=%.8f duration=%.1f", g.gate.n, g.gate.gamma, g.fidelity,
                   g.duration));
    rep.pass = ok;
}

// ---- 5, 6: noisy generation ------------------------------------------------------

NoiseConfig reference_noise() { return {3.5e-5, 3.5e-5, 5e-6, 2.5e-6}; }

struct NoisyTargets {
    int n;
    double gamma;
    double lo, hi;  // amplitude bracket
    Band gamma_m, fid, mana, ideal;
    bool cuts = false;
};

// One noisy run per truncation; both readouts evaluated on the same final
// state. Passes when either readout meets every target at every truncation.
bool noisy_point(const Context& ctx, Tally& t, const RabiParams& params, const NoisyTargets& tg) {
    const auto dims = ctx.dims(60);
    std::vector<std::optional<GenerationRun>> runs(dims.size());
    parallel_for(dims.size(), ctx.options.workers, [&](std::size_t i) {
        SimulationOptions opt;
        opt.noise = reference_noise();
        runs[i] = generate_multi_squeezed(dims[i], tg.n, tg.gamma, params, 1.0, opt, WignerGrid::covering(dims[i]));
    });
    bool any = false;
    for (QubitReadout ro : kReadouts) {
        bool ok = true;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            const GenerationRun& r = *runs[i];
            const QuantumState s = read_out(r.lab, params, r.duration, FrameMode::exact, ro).state;
            const WignerGrid grid = WignerGrid::covering(dims[i]);
            const AmplitudeFit fit = optimal_amplitude(s, tg.n, tg.lo, tg.hi);
            const QuantumState ideal = multi_squeezed(dims[i], tg.n, fit.gamma, GuardMode::report);
            const std::string tag = fmt("dim=%d n=%d %s", dims[i], tg.n, readout_name(ro));
            ok &= t.check(tag + " gamma_m", fit.gamma, tg.gamma_m);
            ok &= t.check(tag + " F", fit.fidelity, tg.fid);
            ok &= t.check(tag + " mana", mana(s, grid).mana, tg.mana);
            ok &= t.check(tag + " ideal mana", mana(ideal, grid).mana, tg.ideal);
            if (tg.cuts) {
                for (double p : {-1.6, 2.0})
                    ok &= t.flag(tag + fmt(" W(q, p=%.1f) has a negative region", p),
                                 wigner_cut(s, p, -6.0, 6.0, 241).has_negative());
            }
            t.note(fmt("duration=%.2f steps=%ld min eigenvalue=%.2e", r.duration, r.stats.steps,
                       r.stats.min_eigenvalue));
        }
        t.note(fmt("%s readout %s", readout_name(ro), ok ? "matches" : "misses"));
        any |= ok;
    }
    return any;
}

void criterion5(const Context& ctx, CriterionReport& rep) {
    Tally t(rep);
    const NoisyTargets tg{3,           0.2,
                          0.02,        0.3,
                          around(0.116, 0.008), around(0.94, 0.02),
                          around(0.14, 0.03),   around(0.22, 0.02),
                          true};
    rep.pass = noisy_point(ctx, t, RabiParams{1.0, 0.05}, tg);
}

void criterion6(const Context& ctx, CriterionReport& rep) {
    Tally t(rep);
    const RabiParams params{1.0, 0.1};
    const NoisyTargets tri{3,           0.2,
                           0.02,        0.3,
                           around(0.131, 0.008), around(0.95, 0.02),
                           around(0.31, 0.03),   around(0.33, 0.02)};
    const NoisyTargets quad{4,          0.0375,
                            0.005,      0.06,
                            around(0.025, 0.005), around(0.96, 0.02),
                            around(0.12, 0.03),   around(0.15, 0.02)};
    const bool a = noisy_point(ctx, t, params, tri);
    const bool b = noisy_point(ctx, t, params, quad);
    rep.pass = a && b;
}

// ---- 7: cat-like superpositions ------------------------------------------------

void criterion7(const Context& ctx, CriterionReport& rep) {
    Tally t(rep);
    const RabiParams params{1.0, 0.1};
    bool ok = true;
    for (int d : ctx.dims(40)) {
        const CatRun two = run_cat(d, 2, 0.5, params, 0.25);
        const CatRun three = run_cat(d, 3, 0.1, params, 0.25);
        ok &= t.check(fmt("dim=%d n=2 <n>", d), two.mean_photon, relative(2.0 / 3.0, 0.10));
        ok &= t.check(fmt("dim=%d n=2 mana", d), two.mana, around(0.50, 0.05));
        ok &= t.check(fmt("dim=%d n=3 <n>", d), three.mean_photon, relative(0.10, 0.10));
        ok &= t.check(fmt("dim=%d n=3 mana", d), three.mana, around(0.15, 0.03));
        t.note(fmt("projection probabilities %.4f, %.4f", two.probability, three.probability));
    }
    rep.pass = ok;
}

// ---- 8: property suites --------------------------------------------------------

// max |A_ij − B_ij| over composite or bosonic indices whose boson level is < cut
double interior_dev(const Matrix& a, const Matrix& b, int dim, int cut) {
    double dev = 0.0;
    for (Index r = 0; r < a.rows(); ++r) {
        if (r % dim >= cut) continue;
        for (Index c = 0; c < a.cols(); ++c) {
            if (c % dim >= cut) continue;
            dev = std::max(dev, std::abs(a(r, c) - b(r, c)));
        }
    }
    return dev;
}

double frame_relations_dev(int d, cplx alpha) {
    const Matrix tm = qubit_displacement_T(d, alpha).matrix();
    auto conj = [&](const Matrix& m) { return Matrix(tm.adjoint() * m * tm); };
    const Matrix a = on_boson(annihilation(d)).matrix();
    const Matrix ad = a.adjoint();
    const Matrix sx = on_qubit(sigma_x(), d).matrix();
    const Matrix sy = on_qubit(sigma_y(), d).matrix();
    const Matrix sz = on_qubit(sigma_z(), d).matrix();
    const Matrix id = Matrix::Identity(2 * d, 2 * d);
    const Matrix sp_d2 = tensor(sigma_plus(), displacement(d, 2.0 * alpha)).matrix();
    const int cut = d / 2;
    double dev = 0.0;
    dev = std::max(dev, interior_dev(conj(ad * a),
                                     ad * a + std::norm(alpha) * id - sz * (a * std::conj(alpha) + ad * alpha), d, cut));
    dev = std::max(dev, interior_dev(conj(sx), -sz, d, cut));
    dev = std::max(dev, interior_dev(conj(sy), -I * sp_d2 + Matrix((-I * sp_d2).adjoint()), d, cut));
    dev = std::max(dev, interior_dev(conj(sz), sp_d2 + Matrix(sp_d2.adjoint()), d, cut));
    dev = std::max(dev, interior_dev(conj(sx * (a + ad)), -sz * (a + ad) + 2.0 * alpha.real() * id, d, cut));
    return dev;
}

void criterion8(const Context& ctx, CriterionReport& rep) {
    Tally t(rep);
    bool ok = true;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto dims = ctx.dims(40);

    for (int d : dims) {
        const std::string tag = fmt("dim=%d", d);

        // unitarity of the analytic gates
        double udef = 0.0;
        for (int n = 1; n <= 4; ++n)
            udef = std::max(udef, gate_matrix({n, 0.3, 0.1, Branch::plus_x}, d, GuardMode::report).unitarity_defect());
        ok &= t.check(tag + " gate unitarity defect", udef, at_most(1e-10));

        // G_1 and G_2 against displacement and squeezing
        double gdev = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double gamma = 0.5 * uni(rng);
            const double phi = 2.0 * std::numbers::pi * uni(rng);
            const cplx e = std::exp(I * phi);
            const Matrix g1 = gate_matrix({1, phi, gamma, Branch::plus_x}, d, GuardMode::report).matrix();
            const Matrix g2 = gate_matrix({2, phi, gamma, Branch::plus_x}, d, GuardMode::report).matrix();
            gdev = std::max(gdev, (g1 - displacement(d, -I * gamma * e).matrix()).cwiseAbs().maxCoeff());
            gdev = std::max(gdev, (g2 - squeeze(d, 2.0 * I * gamma * e).matrix()).cwiseAbs().maxCoeff());
        }
        ok &= t.check(tag + " G_1/G_2 vs displacement/squeeze", gdev, at_most(1e-10));

        // displaced-frame relations
        double fdev = 0.0;
        for (cplx alpha : {cplx(-0.1, 0.0), cplx(0.05, 0.2)}) fdev = std::max(fdev, frame_relations_dev(d, alpha));
        ok &= t.check(tag + " frame relations (interior)", fdev, at_most(1e-10));

        // commutator identity
        const CubicSpec cs = CubicSpec::from_periods(1, 1, 1, 1, RabiParams{1.0, 0.05}, 0.01);
        const Matrix h1 = cubic_h1s(cs, d).matrix();
        const Matrix h2 = cubic_h2s(cs, d).matrix();
        const Matrix h4 = cubic_h4(cs, d).matrix();
        const Matrix inner = h4 * h2 - h2 * h4;
        const Matrix lhs = h1 * inner - inner * h1;
        const Matrix x = annihilation(d).matrix() + creation(d).matrix();
        const double scale = 8.0 * cs.g1() * cs.g2() * cs.g4();
        ok &= t.check(tag + " commutator identity (relative, interior)",
                      interior_dev(lhs, scale * x * x * x, d, d - 7) / scale, at_most(1e-8));

        // Λ round trip
        const RabiParams rp{1.0, 0.1};
        Vector v(2 * d);
        for (Index i = 0; i < v.size(); ++i) v(i) = cplx(uni(rng) - 0.5, uni(rng) - 0.5) * std::exp(-0.2 * (i % d));
        const QuantumState psi = QuantumState::normalized(v, Space::composite(d));
        const QuantumState back = to_nphot(to_lab(psi, rp, 1.3), rp, 1.3);
        ok &= t.check(tag + " frame round trip", (back.vector() - psi.vector()).cwiseAbs().maxCoeff(), at_most(1e-10));
    }

    // Gaussian states carry no mana
    const int gd = dims.front() * 2;
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const cplx beta(uni(rng) - 0.5, uni(rng) - 0.5);
        const cplx r = std::polar(0.5 * uni(rng), 2.0 * std::numbers::pi * uni(rng));
        const Vector v = displacement(gd, beta).matrix() * squeeze(gd, r).matrix().col(0);
        worst = std::max(worst, std::abs(mana(QuantumState::normalized(v, Space::boson(gd))).mana));
    }
    ok &= t.check("max |mana| over 10 random Gaussian states", worst, at_most(5e-3));

    // Trotter error slope: every duration scaled by s, so δ ∝ s³ and the
    // leading error term ∝ s⁴.
    {
        std::vector<double> ld, le;
        for (double s : {1.0, 2.0, 5.0, 10.0}) {
            const CubicSpec c = CubicSpec::from_periods(10 * s, 20 * s, 800 * s, 1, RabiParams{1.0, 0.05}, 0.01);
            const Matrix b = cubic_block_analytic(c, 60).matrix();
            const Matrix g = cubic_gate(60, c.delta(), GuardMode::report).matrix();
            ld.push_back(std::log(c.delta()));
            le.push_back(std::log((b.col(0) - g.col(0)).norm()));
        }
        const double n = static_cast<double>(ld.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ld.size(); ++i) {
            sx += ld[i];
            sy += le[i];
            sxx += ld[i] * ld[i];
            sxy += ld[i] * le[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        ok &= t.check("Trotter error log-log slope vs delta", slope, around(1.5, 0.3));
    }

    // Lindblad invariants and tolerance halving on a short noisy generation
    {
        const int d = 20;
        const RabiParams p{1.0, 0.1};
        SimulationOptions opt;
        opt.noise = reference_noise();
        opt.noise.rate_a = opt.noise.rate_adag = 1e-3;
        const GenerationRun a = generate_multi_squeezed(d, 2, 0.1, p, 0.5, opt);
        const Matrix& rho = a.lab.density_matrix();
        const double tr = std::abs(rho.trace() - 1.0);
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(rho).eigenvalues().minCoeff();
        ok &= t.check("Lindblad |Tr rho - 1|", tr, at_most(1e-8));
        ok &= t.check("Lindblad hermiticity defect", herm, at_most(1e-10));
        ok &= t.check("Lindblad min eigenvalue", min_eig, at_least(-1e-8));

        SimulationOptions tight = opt;
        tight.rel_tol *= 0.5;
        tight.abs_tol *= 0.5;
        const GenerationRun b = generate_multi_squeezed(d, 2, 0.1, p, 0.5, tight);
        ok &= t.check("tolerance halving max |delta rho|", (b.lab.density_matrix() - rho).cwiseAbs().maxCoeff(),
                      at_most(1e-6));
    }
    rep.pass = ok;
}

struct Entry {
    int id;
    const char* title;
    void (*run)(const Context&, CriterionReport&);
};

constexpr Entry kEntries[] = {
    {1, "exact-frame tri-squeezed generation at <n>=1", criterion1},
    {2, "approximate-frame tri-squeezed generation at <n>=1", criterion2},
    {3, "Fock tails of tri-/quadri-squeezed states", criterion3},
    {4, "cubic-phase Trotter sequence", criterion4},
    {5, "noisy tri-squeezed generation, g=0.05", criterion5},
    {6, "noisy tri-/quadri-squeezed generation, g=0.1", criterion6},
    {7, "cat-like superpositions", criterion7},
    {8, "property suites", criterion8},
};

}  // namespace

std::vector<CriterionReport> run_acceptance(const AcceptanceOptions& options, std::ostream& log) {
    for (int id : options.criteria)
        if (id < 1 || id > kCriterionCount) throw Error(ErrorKind::validation, "unknown criterion " + std::to_string(id));
    const Context ctx{options};
    std::vector<CriterionReport> out;
    for (const Entry& e : kEntries) {
        if (!options.criteria.empty() &&
            std::find(options.criteria.begin(), options.criteria.end(), e.id) == options.criteria.end())
            continue;
        CriterionReport rep;
        rep.id = e.id;
        rep.title = e.title;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.run(ctx, rep);
        } catch (const std::exception& ex) {
            rep.pass = false;
            rep.error = ex.what();
        }
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << (rep.pass ? "PASS" : "FAIL") << " criterion " << rep.id << ": " << rep.title << " ("
            << fmt("%.1f", rep.seconds) << " s)\n";
        for (const auto& d : rep.details) log << "    " << d << '\n';
        if (!rep.error.empty()) log << "    error: " << rep.error << '\n';
        log.flush();
        out.push_back(std::move(rep));
    }
    return out;
}

bool all_passed(const std::vector<CriterionReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CriterionReport& r) { return r.pass; });
}

}  // namespace rabi
