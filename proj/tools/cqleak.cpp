// Command-line driver: eigenvalue sweeps, gate reports, optimisation sweeps,
// scaling fits, Bloch-sphere trajectories and the two-pulse scan.

#include "cli_support.hpp"

#include "cqleak/analysis.hpp"
#include "cqleak/bloch.hpp"
#include "cqleak/hamiltonian.hpp"
#include "cqleak/io.hpp"
#include "cqleak/optimizer.hpp"
#include "cqleak/propagator.hpp"
#include "cqleak/sequences.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>

namespace {

using namespace cqleak;
using io::Json;

constexpr double kUnitarityTol = 1e-10;

struct Common {
    std::string out;
    std::uint64_t seed = 1;
    double dt = 1e-4;
};

struct LevelsArgs {
    std::string axis = "eps_q";
    std::optional<double> lo, hi;  // default [-10, 10] for eps_q, [0, 10] for g
    int n = 401;
    double eps_q = 0.0, g = 3.0, xi = 0.3;
};

struct NoiseArgs {
    double d_eps_d = 0.0;
    double ratio = -1.0;  // d_eps_d / g; overrides d_eps_d when set
    double d_eps_q = 0.0;

    NoiseSample resolve(double g) const { return {ratio >= 0.0 ? ratio * g : d_eps_d, d_eps_q}; }
};

struct GateArgs {
    std::string kind = "rzxz";
    std::string theta = "2.5pi", phi = "2pi";
    double eps_q = 1.0, g = 3.0;
    NoiseArgs noise;
    std::string mode = "bang";
    double rise = 0.05;
    bool optimize = false;
    int budget = 3000, restarts = 4;
    std::string schedule_out;
};

struct SweepArgs {
    std::string grid = "0.01,0.02,0.03,0.05,0.1,0.2,0.3";
    double ratio_q = 0.0;
    double g = 3.0, rise = 0.05;
    int budget = 3000, restarts = 4;
};

struct ScalingArgs {
    std::string sequence = "rzxz";
    std::string theta = "2.5pi", phi = "2pi";
    double g = 3.0, eps_q = 1.0;
    double lo = 1e-3, hi = 1e-2;
    int n = 10;
    std::string csv;
};

struct TrajectoryArgs {
    std::string source = "optimized";
    std::string theta = "2.5pi", phi = "2pi";
    std::string schedule;
    double g = 3.0, rise = 0.05;
    double d_eps_d = 0.3, d_eps_q = 0.0;
    std::string chi0 = "pi/5";
    int budget = 3000, restarts = 4;
    std::string state_out, schedule_out;
};

struct NogoArgs {
    NogoOptions opts;
};

// Writes to the resolved path, or stdout when there is none.
void emit(const std::string& explicit_path, const std::string& default_name,
          const std::function<void(std::ostream&)>& write) {
    const auto path = cli::resolve_output(explicit_path, default_name);
    if (path.empty()) {
        write(std::cout);
        return;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file " + path.string());
    write(f);
    std::cerr << "wrote " << path.string() << '\n';
}

Json base_meta(const std::string& command, const Common& c) {
    return Json{{"tool", "cqleak"}, {"command", command}, {"seed", c.seed}, {"dt", c.dt}};
}

int checks_status(const Json& checks) {
    for (const auto& [k, v] : checks.items()) {
        if (!v.get<bool>()) {
            std::cerr << "invariant check failed: " << k << '\n';
            return 3;
        }
    }
    return 0;
}

int run_levels(const LevelsArgs& a, const Common& c) {
    const SweepAxis axis = a.axis == "g" ? SweepAxis::G : SweepAxis::EpsQ;
    if (a.axis != "g" && a.axis != "eps_q") throw std::invalid_argument("--axis must be eps_q or g");
    const double lo = a.lo.value_or(axis == SweepAxis::G ? 0.0 : -10.0);
    const double hi = a.hi.value_or(10.0);
    const auto rows = eigenvalue_sweep(axis, lo, hi, a.n, ModelParams{a.eps_q, a.g, a.xi});
    Json meta = base_meta("levels", c);
    meta["config"] = {{"axis", a.axis}, {"lo", lo}, {"hi", hi}, {"n", a.n},
                      {"eps_q", a.eps_q}, {"g", a.g},   {"xi", a.xi}, {"zeta", 1.0}};
    emit(c.out, "levels.csv", [&](std::ostream& os) { io::write_levels_csv(os, rows, meta); });
    return 0;
}

int run_gate(const GateArgs& a, const Common& c) {
    const NoiseSample noise = a.noise.resolve(a.g);
    Json meta = base_meta("gate", c);
    meta["config"] = {{"kind", a.kind},          {"theta", a.theta},   {"phi", a.phi},
                      {"eps_q", a.eps_q},        {"g", a.g},           {"d_eps_d", noise.d_eps_d},
                      {"d_eps_q", noise.d_eps_q}, {"mode", a.mode},    {"rise", a.rise},
                      {"optimize", a.optimize},  {"budget", a.budget}, {"restarts", a.restarts}};
    if (a.mode != "bang" && a.mode != "smooth") throw std::invalid_argument("--mode must be bang or smooth");
    if (a.optimize && (a.mode != "smooth" || a.kind != "rzxz")) {
        throw std::invalid_argument("--optimize needs 'rzxz' with --mode smooth");
    }
    const SequenceMode mode =
        a.mode == "smooth" ? SequenceMode::smooth(a.rise, c.dt) : SequenceMode::bang_bang();

    Unitary3 u;
    GateSpec target = GateSpec::identity();
    std::map<std::string, double> params;
    std::optional<PulseSchedule> sched;
    const double ratio = noise.d_eps_d / a.g;
    if (a.kind == "rzxz") {
        const RzxzSpec spec{cli::parse_angle(a.theta), cli::parse_angle(a.phi), a.g};
        target = spec.target();
        params = {{"theta", spec.theta}, {"phi", spec.phi}, {"g", spec.g},
                  {"eps_q", spec.eps_q()}, {"t_z", spec.t_z()}, {"t_x", spec.t_x()}};
        if (a.optimize) {
            OptimizationProblem prob;
            prob.shape = PulseShape::Composite;
            prob.target = target;
            prob.g_peak = a.g;
            prob.rise = a.rise;
            prob.noise = noise;
            prob.dt = c.dt;
            prob.seeds = {composite_seed(spec.theta, spec.phi, a.g)};
            const auto res = optimize_gate(prob, {a.budget, a.restarts, true}, c.seed);
            sched = make_schedule(prob, res.best);
            u = evolve_schedule(*sched, noise, {.dt = c.dt}).u;
            params["t_z"] = res.best.t_z;
            params["t_x"] = res.best.t_x;
            params["eps_q"] = res.best.eps_peak;
            params["initial_infidelity"] = res.initial_infidelity;
            params["evals"] = res.evals;
        } else {
            u = rzxz(spec, noise, mode);
            if (a.mode == "smooth") sched = build_smooth_schedule(rzxz_template(spec), mode.smoothing);
        }
        if (spec.theta > kTwoPi && spec.theta < 2.0 * kTwoPi && ratio > 0.0) {
            const auto cf = closed_form_rzxz_leakage(spec.theta, ratio);
            params["closed_form_p_lc"] = cf.p_lc;
            params["closed_form_p_le"] = cf.p_le;
        }
    } else if (a.kind == "identity") {
        u = identity_sequence(a.eps_q, a.g, noise, mode);
        params = {{"eps_q", a.eps_q}, {"g", a.g}};
        if (a.mode == "smooth") sched = build_smooth_schedule(identity_template(a.eps_q, a.g), mode.smoothing);
        const auto cf = closed_form_identity_errors(a.eps_q, a.g, ratio);
        params["closed_form_p_ec"] = cf.p_ec;
        params["closed_form_p_lc"] = cf.p_lc;
        params["closed_form_p_le"] = cf.p_le;
    } else {
        throw std::invalid_argument("gate kind must be rzxz or identity");
    }
    params["d_eps_d"] = noise.d_eps_d;
    params["d_eps_q"] = noise.d_eps_q;

    Json checks = {{"unitarity", unitarity_defect(u) < kUnitarityTol}};
    Json report = io::to_json(make_report(u, target, params));
    report["meta"] = meta;
    report["checks"] = checks;
    emit(c.out, "gate.json", [&](std::ostream& os) { os << report.dump(2) << '\n'; });
    if (!a.schedule_out.empty()) {
        if (!sched) throw std::invalid_argument("--schedule-out needs --mode smooth");
        emit(a.schedule_out, "", [&](std::ostream& os) {
            Json doc = io::to_json(*sched);
            doc["meta"] = meta;
            os << doc.dump(2) << '\n';
        });
    }
    return checks_status(checks);
}

int run_sweep(const SweepArgs& a, const Common& c) {
    const auto grid = cli::parse_list(a.grid);
    const auto composite = x_half_pi_problem(PulseShape::Composite, {}, a.g, a.rise);
    const auto single = x_half_pi_problem(PulseShape::SinglePulse, {}, a.g, a.rise);
    auto with_dt = [&](OptimizationProblem p) {
        p.dt = c.dt;
        return p;
    };
    const auto rows = sweep_optimize(grid, a.ratio_q, with_dt(composite), with_dt(single),
                                     {a.budget, a.restarts, true}, c.seed);
    Json meta = base_meta("sweep", c);
    meta["config"] = {{"grid", grid}, {"ratio_q", a.ratio_q}, {"g", a.g},        {"rise", a.rise},
                      {"budget", a.budget}, {"restarts", a.restarts}, {"target", "X_{-pi/2}"}};
    emit(c.out, "sweep.csv", [&](std::ostream& os) { io::write_sweep_csv(os, rows, meta); });
    return 0;
}

int run_scaling(const ScalingArgs& a, const Common& c) {
    if (a.n < 4 || !(a.lo > 0.0) || !(a.hi > a.lo)) throw std::invalid_argument("bad ratio range");
    std::vector<io::ScalingRow> rows;
    bool unitary = true;
    for (int i = 0; i < a.n; ++i) {
        const double ratio = a.lo * std::pow(a.hi / a.lo, static_cast<double>(i) / (a.n - 1));
        Unitary3 u;
        GateSpec target = GateSpec::identity();
        if (a.sequence == "rzxz") {
            const RzxzSpec spec{cli::parse_angle(a.theta), cli::parse_angle(a.phi), a.g};
            u = rzxz(spec, {ratio * a.g, 0.0});
            target = spec.target();
        } else if (a.sequence == "bare") {
            const double theta = cli::parse_angle(a.theta);
            u = bare_ux(a.g, {ratio * a.g, 0.0}, theta);
            target = GateSpec::x_rotation(theta);
        } else if (a.sequence == "identity") {
            u = identity_sequence(a.eps_q, a.g, {ratio * a.g, 0.0});
        } else {
            throw std::invalid_argument("--sequence must be rzxz, bare or identity");
        }
        unitary = unitary && unitarity_defect(u) < kUnitarityTol;
        const auto leak = leakage_probabilities(u);
        rows.push_back({ratio, computational_error(u, target), leak.p_lc, leak.p_le,
                        process_infidelity(u, target)});
    }
    std::vector<std::pair<double, double>> comp, leak, infid;
    for (const auto& r : rows) {
        comp.emplace_back(r.ratio, r.comp_error);
        leak.emplace_back(r.ratio, r.p_lc + r.p_le);
        infid.emplace_back(r.ratio, r.infidelity);
    }
    Json meta = base_meta("scaling", c);
    meta["config"] = {{"sequence", a.sequence}, {"theta", a.theta}, {"phi", a.phi}, {"g", a.g},
                      {"eps_q", a.eps_q},       {"lo", a.lo},       {"hi", a.hi},   {"n", a.n}};
    Json checks = {{"unitarity", unitary}};
    Json result = {{"slope_comp", scaling_exponent_fit(comp)},
                   {"slope_leak", scaling_exponent_fit(leak)},
                   {"slope_infidelity", scaling_exponent_fit(infid)},
                   {"meta", meta},
                   {"checks", checks}};
    emit(c.out, "scaling.json", [&](std::ostream& os) { os << result.dump(2) << '\n'; });
    if (!a.csv.empty()) {
        emit(a.csv, "", [&](std::ostream& os) { io::write_scaling_csv(os, rows, meta); });
    }
    return checks_status(checks);
}

int run_trajectory(const TrajectoryArgs& a, const Common& c) {
    const NoiseSample noise{a.d_eps_d, a.d_eps_q};
    Json meta = base_meta("trajectory", c);
    meta["config"] = {{"source", a.source}, {"theta", a.theta},     {"phi", a.phi},
                      {"schedule", a.schedule}, {"g", a.g},        {"rise", a.rise},
                      {"d_eps_d", a.d_eps_d}, {"d_eps_q", a.d_eps_q}, {"chi0", a.chi0},
                      {"budget", a.budget}, {"restarts", a.restarts}};
    PulseSchedule sched;
    if (a.source == "optimized") {
        auto prob = x_half_pi_problem(PulseShape::Composite, noise, a.g, a.rise);
        prob.dt = c.dt;
        const auto res = optimize_gate(prob, {a.budget, a.restarts, true}, c.seed);
        meta["optimized"] = {{"t_z", res.best.t_z}, {"t_x", res.best.t_x},
                             {"eps_q_peak", res.best.eps_peak}, {"infidelity", res.infidelity}};
        sched = make_schedule(prob, res.best);
    } else if (a.source == "rzxz") {
        const RzxzSpec spec{cli::parse_angle(a.theta), cli::parse_angle(a.phi), a.g};
        sched = build_smooth_schedule(rzxz_template(spec), {a.rise, -1.0});
    } else if (a.source == "file") {
        std::ifstream f(a.schedule);
        if (!f) throw std::invalid_argument("cannot read schedule file '" + a.schedule + "'");
        sched = io::schedule_from_json(Json::parse(f));
    } else {
        throw std::invalid_argument("--source must be optimized, rzxz or file");
    }

    const double chi0 = cli::parse_angle(a.chi0);
    State3 psi0 = State3::Zero();
    psi0(kC) = std::cos(0.5 * chi0);
    psi0(kE) = std::sin(0.5 * chi0);
    const auto evo = evolve_schedule(sched, noise, {.dt = c.dt, .record = true, .psi0 = psi0});
    std::vector<SpherePoint> spheres;
    bool normalized = true;
    for (const auto& p : *evo.trajectory) {
        const auto s = map_to_spheres(p.psi.normalized());
        const double p_log = std::norm(p.psi(kC)) + std::norm(p.psi(kE));
        normalized = normalized && std::abs(s.leakage() + p_log - 1.0) < 1e-10;
        spheres.push_back({p.t, s, s.leakage()});
    }
    Json checks = {{"unitarity", unitarity_defect(evo.u) < kUnitarityTol}, {"normalization", normalized}};
    meta["checks"] = checks;
    emit(c.out, "trajectory.csv", [&](std::ostream& os) { io::write_sphere_trajectory_csv(os, spheres, meta); });
    if (!a.state_out.empty()) {
        emit(a.state_out, "", [&](std::ostream& os) { io::write_state_trajectory_csv(os, *evo.trajectory, meta); });
    }
    if (!a.schedule_out.empty()) {
        emit(a.schedule_out, "", [&](std::ostream& os) { io::write_schedule_csv(os, sched, 1e-3, meta); });
    }
    return checks_status(checks);
}

int run_nogo(const NogoArgs& a, const Common& c) {
    const auto report = nogo_scan(a.opts);
    Json meta = base_meta("nogo", c);
    meta["config"] = {{"n_theta", a.opts.n_theta}, {"n_phi", a.opts.n_phi},       {"n_ratio", a.opts.n_ratio},
                      {"n_refine", a.opts.n_refine}, {"zero_tol", a.opts.zero_tol}, {"null_tol", a.opts.null_tol}};
    meta["points_scanned"] = report.points_scanned;
    meta["viable_zeros"] = report.viable_zeros;
    emit(c.out, "nogo.csv", [&](std::ostream& os) { io::write_nogo_csv(os, report, meta); });
    std::cerr << (report.no_go_confirmed() ? "no-go confirmed" : "viable two-pulse zero found") << ": "
              << report.points_scanned << " grid points, " << report.viable_zeros << " viable zeros\n";
    return 0;
}

void add_noise_flags(CLI::App* sub, NoiseArgs& n) {
    sub->add_option("--noise", n.d_eps_d, "Dipolar fluctuation d_eps_d (GHz)");
    sub->add_option("--noise-ratio", n.ratio, "d_eps_d / g; overrides --noise")->check(CLI::NonNegativeNumber);
    sub->add_option("--d-eps-q", n.d_eps_q, "Quadrupolar fluctuation d_eps_q (GHz)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leakage-suppressing composite pulses for a three-level qubit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Common common;
    app.add_option("--out", common.out, "Output path (default: $CQLEAK_OUT_DIR/<command>.*, else stdout)");
    app.add_option("--seed", common.seed, "Random seed for optimiser restarts");
    app.add_option("--dt", common.dt, "Integrator step (ns)")->check(CLI::PositiveNumber);

    LevelsArgs levels;
    auto* lv = app.add_subcommand("levels", "Eigenvalues along eps_q or g");
    lv->add_option("--axis", levels.axis, "eps_q or g");
    lv->add_option("--lo", levels.lo);
    lv->add_option("--hi", levels.hi);
    lv->add_option("--n", levels.n);
    lv->add_option("--eps-q", levels.eps_q, "Fixed eps_q (GHz)");
    lv->add_option("--g", levels.g, "Fixed g (GHz)");
    lv->add_option("--xi", levels.xi, "E-L coupling (GHz)");

    GateArgs gate;
    auto* gt = app.add_subcommand("gate", "Simulate one gate and report fidelity and leakage");
    gt->add_option("kind", gate.kind, "rzxz or identity")->required();
    gt->add_option("--theta", gate.theta, "Rotation angle, e.g. 2.5pi");
    gt->add_option("--phi", gate.phi, "Axis angle, e.g. 2pi");
    gt->add_option("--eps-q", gate.eps_q, "Identity sequence eps_q (GHz)");
    gt->add_option("--g", gate.g, "Tunnel coupling (GHz)");
    add_noise_flags(gt, gate.noise);
    gt->add_option("--mode", gate.mode, "bang or smooth");
    gt->add_option("--rise", gate.rise, "Erf rise time (ns)");
    gt->add_flag("--optimize", gate.optimize, "Optimise t_z, t_x and the eps_q peak");
    gt->add_option("--budget", gate.budget);
    gt->add_option("--restarts", gate.restarts);
    gt->add_option("--schedule-out", gate.schedule_out, "Write the smooth schedule as JSON");

    SweepArgs sweep;
    auto* sw = app.add_subcommand("sweep", "Optimised X_{-pi/2} infidelity, composite vs single pulse");
    sw->add_option("--grid", sweep.grid, "Comma-separated d_eps_d values (GHz), ascending");
    sw->add_option("--ratio-q", sweep.ratio_q, "d_eps_q / d_eps_d");
    sw->add_option("--g", sweep.g);
    sw->add_option("--rise", sweep.rise);
    sw->add_option("--budget", sweep.budget);
    sw->add_option("--restarts", sweep.restarts);

    ScalingArgs scaling;
    auto* sc = app.add_subcommand("scaling", "Error exponents over a range of d_eps_d / g");
    sc->add_option("--sequence", scaling.sequence, "rzxz, bare or identity");
    sc->add_option("--theta", scaling.theta);
    sc->add_option("--phi", scaling.phi);
    sc->add_option("--g", scaling.g);
    sc->add_option("--eps-q", scaling.eps_q, "Identity sequence eps_q (GHz)");
    sc->add_option("--lo", scaling.lo);
    sc->add_option("--hi", scaling.hi);
    sc->add_option("--n", scaling.n);
    sc->add_option("--csv", scaling.csv, "Also write the per-ratio table");

    TrajectoryArgs traj;
    auto* tr = app.add_subcommand("trajectory", "Two-sphere trajectory of a smooth gate");
    tr->add_option("--source", traj.source, "optimized, rzxz or file");
    tr->add_option("--theta", traj.theta);
    tr->add_option("--phi", traj.phi);
    tr->add_option("--schedule", traj.schedule, "Schedule JSON for --source file");
    tr->add_option("--g", traj.g);
    tr->add_option("--rise", traj.rise);
    tr->add_option("--noise", traj.d_eps_d);
    tr->add_option("--d-eps-q", traj.d_eps_q);
    tr->add_option("--chi0", traj.chi0, "Initial logical polar angle");
    tr->add_option("--budget", traj.budget);
    tr->add_option("--restarts", traj.restarts);
    tr->add_option("--state-out", traj.state_out, "Also write raw amplitudes");
    tr->add_option("--schedule-out", traj.schedule_out, "Also write the sampled controls");

    NogoArgs nogo;
    auto* ng = app.add_subcommand("nogo", "Search two-pulse sequences for first-order leakage zeros");
    ng->add_option("--n-theta", nogo.opts.n_theta);
    ng->add_option("--n-phi", nogo.opts.n_phi);
    ng->add_option("--n-ratio", nogo.opts.n_ratio);
    ng->add_option("--n-refine", nogo.opts.n_refine);
    ng->add_option("--zero-tol", nogo.opts.zero_tol);
    ng->add_option("--null-tol", nogo.opts.null_tol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (lv->parsed()) return run_levels(levels, common);
        if (gt->parsed()) return run_gate(gate, common);
        if (sw->parsed()) return run_sweep(sweep, common);
        if (sc->parsed()) return run_scaling(scaling, common);
        if (tr->parsed()) return run_trajectory(traj, common);
        if (ng->parsed()) return run_nogo(nogo, common);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
