#include "rabi/cli/experiments.hpp"

#include "rabi/acceptance.hpp"
#include "rabi/cli/csv.hpp"
#include "rabi/parallel.hpp"
#include "rabi/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#ifndef RABI_VERSION
#define RABI_VERSION "unknown"
#endif

namespace rabi::cli {
namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

// Parameters shared by every experiment.
struct Common {
    std::string experiment;
    int dim = 60;
    bool convergence = false;
    RabiParams params;
    double epsilon = 0.2;
    SimulationOptions sim;
    WignerGrid grid;
    bool grid_check = true;
    std::optional<double> omega_si;  // angular frequency in rad/s
    int workers = 0;

    std::vector<int> dims() const { return convergence ? std::vector<int>{dim, 2 * dim} : std::vector<int>{dim}; }
};

struct Defaults {
    double g = 0.1;
    double epsilon = 0.2;
    NoiseConfig noise{};
};

Common read_common(const Config& c, const RunOptions& o, const Defaults& d) {
    Common k;
    k.experiment = c.get_choice("experiment", "", kExperiments);
    k.dim = c.get_int("dim", 60);
    if (o.dim) {
        k.dim = *o.dim;
        c.note_override("dim", std::to_string(k.dim));
    }
    if (k.dim < 8) throw Error(ErrorKind::validation, "dim must be >= 8");
    k.convergence = c.get_bool("convergence", false);
    k.params.omega = c.get_double("params.omega", 1.0);
    k.params.g = c.get_double("params.g", d.g);
    k.params.validate();
    k.epsilon = c.get_double("drive.epsilon", d.epsilon);
    if (!(k.epsilon > 0.0)) throw Error(ErrorKind::validation, "drive.epsilon must be positive");

    k.sim.frame = c.get_choice("frame.mode", "exact", {"exact", "approximate"}) == "exact" ? FrameMode::exact
                                                                                           : FrameMode::approximate;
    k.sim.readout = c.get_choice("readout.mode", "project", {"project", "trace_out"}) == "project"
                        ? QubitReadout::project
                        : QubitReadout::trace_out;
    k.sim.rel_tol = c.get_double("integrator.rel_tol", 1e-8);
    k.sim.abs_tol = c.get_double("integrator.abs_tol", 1e-10);
    k.sim.interaction_frame = c.get_bool("integrator.interaction_frame", true);
    k.sim.noise.rate_a = c.get_double("noise.rate_a", d.noise.rate_a);
    k.sim.noise.rate_adag = c.get_double("noise.rate_adag", d.noise.rate_adag);
    k.sim.noise.rate_sz = c.get_double("noise.rate_sz", d.noise.rate_sz);
    k.sim.noise.rate_sminus = c.get_double("noise.rate_sminus", d.noise.rate_sminus);
    k.sim.noise.validate();

    k.grid.q_min = c.get_double("grid.q_min", k.grid.q_min);
    k.grid.q_max = c.get_double("grid.q_max", k.grid.q_max);
    k.grid.p_min = c.get_double("grid.p_min", k.grid.p_min);
    k.grid.p_max = c.get_double("grid.p_max", k.grid.p_max);
    k.grid.n_q = c.get_int("grid.n_q", k.grid.n_q);
    k.grid.n_p = c.get_int("grid.n_p", k.grid.n_p);
    k.grid.validate();
    k.grid_check = c.get_bool("grid.check", true);

    if (c.has("omega_hz")) {
        k.omega_si = c.get_double("omega_hz", 0.0);
        if (!(*k.omega_si > 0.0)) throw Error(ErrorKind::validation, "omega_hz must be positive");
    }
    k.workers = o.workers;
    return k;
}

std::string real(double v) { return format_real(v); }

// Duration in units of 1/ω, plus seconds when the oscillator frequency is known.
void add_duration(Meta& m, const Common& k, const std::string& key, double t) {
    m.emplace_back(key, real(t));
    if (k.omega_si) m.emplace_back(key + "_seconds", real(t / (*k.omega_si / k.params.omega)));
}

void add_adequacy(Meta& m, const std::string& label, const ManaAdequacy& a) {
    m.emplace_back("grid_adequacy." + label, std::string(a.adequate() ? "adequate" : "INADEQUATE") +
                                                 " norm=" + real(a.base.norm) + " extent_delta=" +
                                                 real(a.extent_delta) + " resolution_delta=" +
                                                 real(a.resolution_delta));
}

// Opens the CSV and writes metadata: version, resolved config, then extras.
CsvWriter open_csv(const Config& c, const RunOptions& o, const std::string& name, const Meta& extra) {
    std::filesystem::create_directories(o.out_dir);
    CsvWriter w(o.out_dir / (name + ".csv"));
    w.meta("code_version", RABI_VERSION);
    for (const auto& [k, v] : c.resolved()) w.meta("config." + k, v);
    for (const auto& [k, v] : extra) w.meta(k, v);
    return w;
}

const char* readout_label(QubitReadout r) { return r == QubitReadout::project ? "project" : "trace_out"; }

// ---- experiments --------------------------------------------------------------

RunSummary fig1_sweep(const Config& c, const RunOptions& o) {
    const Common k = read_common(c, o, {});
    const int n = c.get_int("gate.n", 3);
    const std::vector<double> energies =
        c.get_doubles("sweep.energies", {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0});
    c.reject_unused();

    const auto dims = k.dims();
    const std::size_t rows = energies.size();
    std::vector<std::optional<GenerationRun>> runs(rows * dims.size());
    parallel_for(runs.size(), k.workers, [&](std::size_t i) {
        runs[i] = generate_at_energy(dims[i % dims.size()], n, energies[i / dims.size()], k.params, k.epsilon, k.sim,
                                     k.grid);
    });

    Meta meta{{"qubit_readout", readout_label(k.sim.readout)}};
    if (dims.size() > 1) {
        double df = 0.0, dm = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            df = std::max(df, std::abs(runs[r * 2]->fidelity - runs[r * 2 + 1]->fidelity));
            dm = std::max(dm, std::abs(runs[r * 2]->mana_generated - runs[r * 2 + 1]->mana_generated));
        }
        meta.emplace_back("dim_convergence", "dims=" + std::to_string(dims[0]) + "," + std::to_string(dims[1]) +
                                                 " max_abs_delta_fidelity=" + real(df) +
                                                 " max_abs_delta_mana=" + real(dm));
    }
    if (k.grid_check) {
        std::vector<std::optional<ManaAdequacy>> adequacy(rows);
        parallel_for(rows, k.workers,
                     [&](std::size_t r) { adequacy[r] = mana_checked(runs[r * dims.size()]->generated, k.grid); });
        for (std::size_t r = 0; r < rows; ++r) add_adequacy(meta, "energy_" + real(energies[r]), *adequacy[r]);
    }
    for (std::size_t r = 0; r < rows; ++r)
        add_duration(meta, k, "duration.energy_" + real(energies[r]), runs[r * dims.size()]->duration);

    CsvWriter w = open_csv(c, o, "fig1_sweep", meta);
    w.header({"energy", "gamma", "fidelity", "mana_generated", "mana_target"});
    RunSummary s;
    for (std::size_t r = 0; r < rows; ++r) {
        const GenerationRun& g = *runs[r * dims.size()];
        w.row({energies[r], g.gamma, g.fidelity, g.mana_generated, g.mana_target});
        s.notes.push_back("energy " + real(energies[r]) + ": F=" + real(g.fidelity) + " mana=" +
                          real(g.mana_generated));
    }
    s.files.push_back(w.path());
    return s;
}

RunSummary wigner_map_run(const Config& c, const RunOptions& o) {
    const Common k = read_common(c, o, {});
    const int n = c.get_int("gate.n", 3);
    const double energy = c.get_double("state.energy", 2.0);
    const bool generated = c.get_choice("map.state", "generated", {"generated", "target"}) == "generated";
    c.reject_unused();

    const auto dims = k.dims();
    std::vector<std::optional<GenerationRun>> runs(dims.size());
    parallel_for(dims.size(), k.workers, [&](std::size_t i) {
        runs[i] = generate_at_energy(dims[i], n, energy, k.params, k.epsilon, k.sim, k.grid);
    });
    const GenerationRun& g = *runs[0];
    const QuantumState& state = generated ? g.generated : g.target;
    const WignerMap map = wigner(state, k.grid);

    Meta meta{{"qubit_readout", readout_label(k.sim.readout)},
              {"gamma", real(g.gamma)},
              {"fidelity", real(g.fidelity)},
              {"mana", real(mana(map).mana)},
              {"wigner_integral", real(map.integral())}};
    add_duration(meta, k, "duration", g.duration);
    if (dims.size() > 1) {
        const double dm = generated ? runs[1]->mana_generated - g.mana_generated : runs[1]->mana_target - g.mana_target;
        meta.emplace_back("dim_convergence", "dims=" + std::to_string(dims[0]) + "," + std::to_string(dims[1]) +
                                                 " abs_delta_mana=" + real(std::abs(dm)));
    }
    if (k.grid_check) add_adequacy(meta, generated ? "generated" : "target", mana_checked(state, k.grid));

    CsvWriter w = open_csv(c, o, "wigner_map", meta);
    w.header({"q", "p", "W"});
    for (int i = 0; i < k.grid.n_q; ++i)
        for (int j = 0; j < k.grid.n_p; ++j) w.row({k.grid.q(i), k.grid.p(j), map.values(i, j)});
    RunSummary s;
    s.files.push_back(w.path());
    s.notes.push_back("mana=" + real(mana(map).mana) + " F=" + real(g.fidelity));
    return s;
}

RunSummary noisy_run(const Config& c, const RunOptions& o) {
    const Common k = read_common(c, o, {0.05, 1.0, {3.5e-5, 3.5e-5, 5e-6, 2.5e-6}});
    const int n = c.get_int("gate.n", 3);
    const double gamma = c.get_double("gate.gamma", 0.2);
    const double lo = c.get_double("fit.lo", n == 3 ? 0.02 : 0.005);
    const double hi = c.get_double("fit.hi", n == 3 ? 0.3 : 0.06);
    const std::vector<double> cut_p = c.get_doubles("cuts.p", {-1.6, 2.0});
    const double q_min = c.get_double("cuts.q_min", -6.0);
    const double q_max = c.get_double("cuts.q_max", 6.0);
    const int points = c.get_int("cuts.points", 241);
    c.reject_unused();

    const auto dims = k.dims();
    std::vector<std::optional<NoisyRun>> runs(dims.size());
    parallel_for(dims.size(), k.workers, [&](std::size_t i) {
        runs[i] = noisy_generation(dims[i], n, gamma, k.params, k.epsilon, lo, hi, k.sim, k.grid);
    });
    const NoisyRun& r = *runs[0];

    Meta meta{{"qubit_readout", readout_label(k.sim.readout)},
              {"gamma_m", real(r.fit.gamma)},
              {"fidelity", real(r.fit.fidelity)},
              {"mana_generated", real(r.run.mana_generated)},
              {"mana_ideal", real(r.mana_ideal)},
              {"min_eigenvalue", real(r.run.stats.min_eigenvalue)}};
    add_duration(meta, k, "duration", r.run.duration);
    if (dims.size() > 1) {
        const NoisyRun& b = *runs[1];
        meta.emplace_back("dim_convergence",
                          "dims=" + std::to_string(dims[0]) + "," + std::to_string(dims[1]) +
                              " abs_delta_gamma_m=" + real(std::abs(b.fit.gamma - r.fit.gamma)) +
                              " abs_delta_fidelity=" + real(std::abs(b.fit.fidelity - r.fit.fidelity)) +
                              " abs_delta_mana=" + real(std::abs(b.run.mana_generated - r.run.mana_generated)));
    }
    if (k.grid_check) {
        add_adequacy(meta, "generated", mana_checked(r.run.generated, k.grid));
        add_adequacy(meta, "ideal", mana_checked(r.ideal, k.grid));
    }

    CsvWriter w = open_csv(c, o, "noisy_run", meta);
    w.header({"p", "q", "W_ideal", "W_generated"});
    for (double p : cut_p) {
        const WignerCut ideal = wigner_cut(r.ideal, p, q_min, q_max, points);
        const WignerCut gen = wigner_cut(r.run.generated, p, q_min, q_max, points);
        for (int i = 0; i < points; ++i) w.row({p, ideal.q(i), ideal.w(i), gen.w(i)});
    }
    RunSummary s;
    s.files.push_back(w.path());
    s.notes.push_back("gamma_m=" + real(r.fit.gamma) + " F=" + real(r.fit.fidelity) + " mana=" +
                      real(r.run.mana_generated) + " ideal mana=" + real(r.mana_ideal));
    return s;
}

RunSummary cubic_run(const Config& c, const RunOptions& o) {
    const Common k = read_common(c, o, {0.05, 0.01, {}});
    const double p1 = c.get_double("cubic.periods1", 100);
    const double p2 = c.get_double("cubic.periods2", 200);
    const double p4 = c.get_double("cubic.periods4", 8000);
    const std::vector<int> blocks = c.get_ints("cubic.blocks", {1200});
    const bool species = c.get_bool("cubic.species_check", false);
    const int species_dim = c.get_int("cubic.species_dim", 30);
    c.reject_unused();
    if (blocks.empty()) throw Error(ErrorKind::validation, "cubic.blocks is empty");

    const auto dims = k.dims();
    std::vector<std::optional<CubicRun>> runs(blocks.size() * dims.size());
    parallel_for(runs.size(), k.workers, [&](std::size_t i) {
        const CubicSpec spec =
            CubicSpec::from_periods(p1, p2, p4, blocks[i / dims.size()], k.params, k.epsilon);
        runs[i] = run_cubic(spec, dims[i % dims.size()], k.grid);
    });

    const CubicSpec unit = CubicSpec::from_periods(p1, p2, p4, 1, k.params, k.epsilon);
    Meta meta{{"delta", real(unit.delta())}};
    add_duration(meta, k, "block_duration", 2 * unit.tau1 + 4 * unit.tau2 + 4 * unit.tau4);
    if (dims.size() > 1) {
        double df = 0.0;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            df = std::max(df, std::abs(runs[2 * b]->fidelity - runs[2 * b + 1]->fidelity));
        meta.emplace_back("dim_convergence", "dims=" + std::to_string(dims[0]) + "," + std::to_string(dims[1]) +
                                                 " max_abs_delta_fidelity=" + real(df));
    }
    if (k.grid_check) add_adequacy(meta, "last_row", mana_checked(runs[(blocks.size() - 1) * dims.size()]->produced, k.grid));
    if (species) {
        for (const GateCheck& g : check_cubic_species(unit, species_dim))
            meta.emplace_back("drive_level.U" + std::to_string(g.gate.n),
                              "gamma=" + real(g.gate.gamma) + " fidelity=" + real(g.fidelity));
    }

    CsvWriter w = open_csv(c, o, "cubic_run", meta);
    w.header({"blocks", "delta", "gamma_c", "fidelity", "mana", "mana_target", "mean_photon"});
    RunSummary s;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const CubicRun& r = *runs[b * dims.size()];
        w.row({static_cast<long>(blocks[b]), r.delta, r.gamma_c, r.fidelity, r.mana, r.mana_target, r.mean_photon});
        s.notes.push_back("N=" + std::to_string(blocks[b]) + ": F=" + real(r.fidelity) + " mana=" + real(r.mana));
    }
    s.files.push_back(w.path());
    return s;
}

RunSummary cat_run(const Config& c, const RunOptions& o) {
    const Common k = read_common(c, o, {0.1, 0.25, {}});
    const std::vector<int> ns = c.get_ints("cat.n", {2, 3});
    const std::vector<double> gammas = c.get_doubles("cat.gamma", {0.5, 0.1});
    c.reject_unused();
    if (ns.size() != gammas.size() || ns.empty())
        throw Error(ErrorKind::validation, "cat.n and cat.gamma must be non-empty lists of equal length");

    const auto dims = k.dims();
    std::vector<std::optional<CatRun>> runs(ns.size() * dims.size());
    parallel_for(runs.size(), k.workers, [&](std::size_t i) {
        const std::size_t r = i / dims.size();
        runs[i] = run_cat(dims[i % dims.size()], ns[r], gammas[r], k.params, k.epsilon, k.grid);
    });

    Meta meta{{"qubit_readout", "project_plus_x_lab"}};
    if (dims.size() > 1) {
        double dn = 0.0, dm = 0.0;
        for (std::size_t r = 0; r < ns.size(); ++r) {
            dn = std::max(dn, std::abs(runs[2 * r]->mean_photon - runs[2 * r + 1]->mean_photon));
            dm = std::max(dm, std::abs(runs[2 * r]->mana - runs[2 * r + 1]->mana));
        }
        meta.emplace_back("dim_convergence", "dims=" + std::to_string(dims[0]) + "," + std::to_string(dims[1]) +
                                                 " max_abs_delta_mean_photon=" + real(dn) +
                                                 " max_abs_delta_mana=" + real(dm));
    }
    for (std::size_t r = 0; r < ns.size(); ++r) {
        const GateSpec gate{ns[r], 0.0, gammas[r], Branch::plus_x};
        add_duration(meta, k, "duration.n" + std::to_string(ns[r]), gate_time(gate, k.params, k.epsilon));
        if (k.grid_check)
            add_adequacy(meta, "n" + std::to_string(ns[r]), mana_checked(runs[r * dims.size()]->state, k.grid));
    }

    CsvWriter w = open_csv(c, o, "cat_run", meta);
    w.header({"n", "gamma", "mean_photon", "mana", "probability"});
    RunSummary s;
    for (std::size_t r = 0; r < ns.size(); ++r) {
        const CatRun& x = *runs[r * dims.size()];
        w.row({static_cast<long>(ns[r]), gammas[r], x.mean_photon, x.mana, x.probability});
        s.notes.push_back("n=" + std::to_string(ns[r]) + ": <n>=" + real(x.mean_photon) + " mana=" + real(x.mana));
    }
    s.files.push_back(w.path());
    return s;
}

RunSummary schedule_check(const Config& c, const RunOptions& o) {
    const Common k = read_common(c, o, {});
    const std::vector<int> ns = c.get_ints("check.n", {1, 2, 3, 4});
    const double gamma = c.get_double("gate.gamma", 0.1);
    const double phase = c.get_double("gate.phase", 0.0);
    const std::string branch = c.get_choice("check.branch", "both", {"plus", "minus", "both"});
    CompileOptions copt;
    copt.conjugation = c.get_choice("check.conjugation", "phase_shift", {"phase_shift", "pi_pulse"}) == "phase_shift"
                           ? ConjugationMethod::phase_shift
                           : ConjugationMethod::pi_pulse;
    c.reject_unused();

    std::vector<GateSpec> gates;
    for (int n : ns) {
        if (branch != "minus") gates.push_back({n, phase, gamma, Branch::plus_x});
        if (branch != "plus") gates.push_back({n, phase, gamma, Branch::minus_x});
    }
    if (gates.empty()) throw Error(ErrorKind::validation, "check.n is empty");
    std::vector<std::optional<GateCheck>> out(gates.size());
    parallel_for(gates.size(), k.workers, [&](std::size_t i) {
        out[i] = check_gate(k.dim, gates[i], k.params, k.epsilon, fock(k.dim, 0), copt, k.sim);
    });

    CsvWriter w = open_csv(c, o, "schedule_check", {{"qubit_readout", readout_label(k.sim.readout)}});
    w.header({"n", "branch", "gamma", "fidelity", "probability", "duration"});
    RunSummary s;
    for (const auto& g : out) {
        const char* b = g->gate.branch == Branch::plus_x ? "plus_x" : "minus_x";
        w.row({static_cast<long>(g->gate.n), std::string(b), g->gate.gamma, g->fidelity, g->probability, g->duration});
        s.notes.push_back("n=" + std::to_string(g->gate.n) + " " + b + ": F=" + real(g->fidelity));
    }
    s.files.push_back(w.path());
    return s;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::numeric:
        case ErrorKind::leakage_guard:
        case ErrorKind::norm_drift:
        case ErrorKind::step_underflow:
        case ErrorKind::trace_drift:
        case ErrorKind::integrator_accuracy:
        case ErrorKind::grid:
        case ErrorKind::degenerate_projection:
        case ErrorKind::degenerate_superposition:
            return kExitNumeric;
        default:
            return kExitValidation;
    }
}

RunSummary run_experiment(const Config& config, const RunOptions& options) {
    const std::string e = config.get_choice("experiment", "", kExperiments);
    if (e == "fig1_sweep") return fig1_sweep(config, options);
    if (e == "wigner_map") return wigner_map_run(config, options);
    if (e == "noisy_run") return noisy_run(config, options);
    if (e == "cubic_run") return cubic_run(config, options);
    if (e == "cat_run") return cat_run(config, options);
    return schedule_check(config, options);
}

int run_accept(const Config& config, const RunOptions& options, std::ostream& log) {
    AcceptanceOptions a;
    a.criteria = config.get_ints("accept.criteria", {});
    a.convergence = config.get_bool("accept.convergence", true);
    a.dim = options.dim.value_or(config.get_int("accept.dim", 0));
    a.workers = options.workers;
    const auto reports = run_acceptance(a, log);

    std::filesystem::create_directories(options.out_dir);
    CsvWriter w(options.out_dir / "acceptance.csv");
    w.meta("code_version", RABI_VERSION);
    for (const auto& [k, v] : config.resolved()) w.meta("config." + k, v);
    w.header({"criterion", "title", "result", "error"});
    for (const auto& r : reports)
        w.row({static_cast<long>(r.id), r.title, std::string(r.pass ? "PASS" : "FAIL"), r.error});
    return all_passed(reports) ? kExitOk : kExitAcceptance;
}

}  // namespace rabi::cli
