#include "cqleak/optimizer.hpp"

#include "cqleak/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

namespace cqleak {

// ---- Nelder-Mead ----

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const Bounds& bounds,
                             const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0 || bounds.lo.size() != n || bounds.hi.size() != n) {
        throw std::invalid_argument("nelder_mead: dimension mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(bounds.lo[i] < bounds.hi[i])) throw std::invalid_argument("nelder_mead: bad bounds");
    }

    NelderMeadResult res;
    res.f = std::numeric_limits<double>::infinity();
    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], bounds.lo[i], bounds.hi[i]);
    };
    auto eval = [&](const std::vector<double>& x) {
        double v = f(x);
        if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
        ++res.evals;
        if (v < res.f) {
            res.f = v;
            res.x = x;
        }
        res.best_trace.push_back(res.f);
        return v;
    };

    clamp(x0);
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) {
        const double width = bounds.hi[i] - bounds.lo[i];
        const double step = std::max(opts.initial_step * std::abs(x0[i]), 0.01 * width);
        simplex[i + 1][i] = x0[i] + step <= bounds.hi[i] ? x0[i] + step : x0[i] - step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n && res.evals < opts.max_evals; ++i) fv[i] = eval(simplex[i]);
    if (res.x.empty()) res.x = x0;

    std::vector<std::size_t> order(n + 1);
    while (res.evals < opts.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double diameter = 0.0;
        for (std::size_t v = 0; v <= n; ++v) {
            for (std::size_t i = 0; i < n; ++i) {
                const double d = std::abs(simplex[v][i] - simplex[best][i]) / (bounds.hi[i] - bounds.lo[i]);
                diameter = std::max(diameter, d);
            }
        }
        if ((std::isfinite(fv[worst]) && fv[worst] - fv[best] <= opts.ftol) || diameter <= opts.xtol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i] / static_cast<double>(n);
        }
        auto along = [&](const std::vector<double>& from, double coef) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + coef * (from[i] - centroid[i]);
            clamp(x);
            return x;
        };

        const auto xr = along(simplex[worst], -1.0);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            if (res.evals >= opts.max_evals) {
                simplex[worst] = xr;
                fv[worst] = fr;
                break;
            }
            const auto xe = along(simplex[worst], -2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        if (res.evals >= opts.max_evals) break;
        const bool outside = fr < fv[worst];
        const auto xc = along(simplex[worst], outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < std::min(fr, fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t v = 0; v <= n && res.evals < opts.max_evals; ++v) {
            if (v == best) continue;
            for (std::size_t i = 0; i < n; ++i) {
                simplex[v][i] = simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
            }
            fv[v] = eval(simplex[v]);
        }
    }
    return res;
}

// ---- pulse schedules for the two approaches ----

std::string to_string(PulseShape s) { return s == PulseShape::Composite ? "composite" : "single"; }

PulseSchedule make_schedule(const OptimizationProblem& prob, const PulseParams& p) {
    const SmoothingOptions smoothing{prob.rise, prob.handover};
    if (prob.shape == PulseShape::Composite) {
        return build_smooth_schedule({{Channel::EpsQ, -p.eps_peak, p.t_z},
                                      {Channel::G, prob.g_peak, p.t_x},
                                      {Channel::EpsQ, p.eps_peak, p.t_z}},
                                     smoothing);
    }
    // Single pulse: the detuning pulse is centred on the x pulse and must fit inside it.
    if (p.t_x < prob.rise || p.t_z < prob.rise || p.t_z > p.t_x) {
        throw std::invalid_argument("make_schedule: infeasible single-pulse parameters");
    }
    const double start = 0.5 * prob.rise;
    const double centre = start + 0.5 * p.t_x;
    return PulseSchedule({{Channel::G, prob.g_peak, start, start + p.t_x, prob.rise},
                          {Channel::EpsQ, p.eps_peak, centre - 0.5 * p.t_z, centre + 0.5 * p.t_z, prob.rise}},
                         p.t_x + prob.rise);
}

double evaluate_infidelity(const OptimizationProblem& prob, const PulseParams& p) {
    try {
        const auto sched = make_schedule(prob, p);
        const auto u = evolve_schedule(sched, prob.noise, {.dt = prob.dt}).u;
        return process_infidelity(u, prob.target);
    } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::infinity();
    }
}

PulseParams composite_seed(double theta, double phi, double g) {
    const RzxzSpec spec{theta, phi, g, kDefaultGuard};
    return {spec.t_z(), spec.t_x(), spec.eps_q()};
}

OptimizationProblem x_half_pi_problem(PulseShape shape, const NoiseSample& noise, double g_peak,
                                      double rise) {
    OptimizationProblem prob;
    prob.shape = shape;
    prob.target = GateSpec::x_rotation(-kPi / 2.0);
    prob.g_peak = g_peak;
    prob.rise = rise;
    prob.noise = noise;
    if (shape == PulseShape::Composite) {
        prob.seeds = {composite_seed(kTwoPi + kPi / 2.0, kTwoPi, g_peak)};
    } else {
        // X_{-pi/2} equals a positive x rotation by 3pi/2 (or 7pi/2) up to phase.
        for (double theta : {1.5 * kPi, 3.5 * kPi}) {
            const double tx = theta / (2.0 * kTwoPi * g_peak);
            prob.seeds.push_back({0.5 * tx, tx, 0.0});
        }
    }
    return prob;
}

namespace {

std::vector<double> as_vector(const PulseParams& p) { return {p.t_z, p.t_x, p.eps_peak}; }
PulseParams as_params(const std::vector<double>& x) { return {x[0], x[1], x[2]}; }

struct RestartOutcome {
    NelderMeadResult nm;
    double initial;
};

RestartOutcome run_restart(const OptimizationProblem& prob, const Bounds& box, int budget,
                           std::size_t k, std::uint64_t seed) {
    std::vector<double> x0;
    if (k < prob.seeds.size()) {
        x0 = as_vector(prob.seeds[k]);
    } else {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(k)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> jitter(-0.25, 0.25);
        x0 = as_vector(prob.seeds[k % prob.seeds.size()]);
        for (double& v : x0) v *= 1.0 + jitter(rng);
        if (x0[2] == 0.0) x0[2] = 0.5 * jitter(rng);
    }
    auto objective = [&prob](const std::vector<double>& x) {
        return evaluate_infidelity(prob, as_params(x));
    };

    NelderMeadResult total;
    total.f = std::numeric_limits<double>::infinity();
    double initial = std::numeric_limits<double>::infinity();
    // Re-seed the simplex around the incumbent until a round stops improving.
    while (total.evals < budget) {
        NelderMeadOptions nm;
        nm.max_evals = budget - total.evals;
        nm.ftol = 1e-17;
        nm.xtol = 1e-13;
        nm.initial_step = total.evals == 0 ? 0.1 : 0.02;
        const auto round = nelder_mead(objective, total.evals == 0 ? x0 : total.x, box, nm);
        if (total.evals == 0 && !round.best_trace.empty()) initial = round.best_trace.front();
        const double before = total.f;
        for (double v : round.best_trace) total.best_trace.push_back(std::min(v, total.f));
        total.evals += round.evals;
        if (round.f < total.f) {
            total.f = round.f;
            total.x = round.x;
        }
        total.converged = round.converged;
        if (!(round.f < before - 1e-3 * std::abs(before)) && before != std::numeric_limits<double>::infinity()) {
            break;
        }
        if (!round.converged) break;
    }
    return {std::move(total), initial};
}

}  // namespace

OptimizationResult optimize_gate(const OptimizationProblem& prob, const OptimizerOptions& opts,
                                 std::uint64_t seed) {
    if (opts.budget < 50) throw std::invalid_argument("optimize_gate: budget must be at least 50");
    if (opts.restarts < 1) throw std::invalid_argument("optimize_gate: need at least one restart");
    if (prob.seeds.empty()) throw std::invalid_argument("optimize_gate: no initial guess");
    const Bounds box{as_vector(prob.lower), as_vector(prob.upper)};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!std::isfinite(box.lo[i]) || !std::isfinite(box.hi[i]) || !(box.lo[i] < box.hi[i])) {
            throw std::invalid_argument("optimize_gate: bounds must be finite and ordered");
        }
    }

    const auto n = static_cast<std::size_t>(opts.restarts);
    const int per_restart = opts.budget / opts.restarts;
    std::vector<RestartOutcome> outcomes;
    outcomes.reserve(n);
    if (opts.parallel && n > 1) {
        std::vector<std::future<RestartOutcome>> jobs;
        for (std::size_t k = 0; k < n; ++k) {
            jobs.push_back(std::async(std::launch::async, run_restart, std::cref(prob), std::cref(box),
                                      per_restart, k, seed));
        }
        for (auto& j : jobs) outcomes.push_back(j.get());
    } else {
        for (std::size_t k = 0; k < n; ++k) outcomes.push_back(run_restart(prob, box, per_restart, k, seed));
    }

    OptimizationResult out;
    out.seed = seed;
    out.infidelity = std::numeric_limits<double>::infinity();
    out.initial_infidelity = outcomes.front().initial;
    for (const auto& o : outcomes) {
        for (double v : o.nm.best_trace) {
            out.best_trace.push_back(out.best_trace.empty() ? v : std::min(v, out.best_trace.back()));
        }
        out.evals += o.nm.evals;
        if (o.nm.f < out.infidelity) {
            out.infidelity = o.nm.f;
            out.best = as_params(o.nm.x);
            out.converged = o.nm.converged;
        }
    }
    if (!std::isfinite(out.infidelity)) {
        throw std::runtime_error("optimize_gate: every evaluation failed (infeasible bounds?)");
    }
    return out;
}

std::vector<SweepRow> sweep_optimize(const std::vector<double>& noise_grid, double ratio_q,
                                     const OptimizationProblem& composite,
                                     const OptimizationProblem& single,
                                     const OptimizerOptions& opts, std::uint64_t seed) {
    if (noise_grid.empty()) throw std::invalid_argument("sweep_optimize: empty noise grid");
    for (std::size_t i = 0; i < noise_grid.size(); ++i) {
        if (!(noise_grid[i] > 0.0) || (i > 0 && !(noise_grid[i] > noise_grid[i - 1]))) {
            throw std::invalid_argument("sweep_optimize: grid must be positive and ascending");
        }
    }
    std::vector<SweepRow> rows;
    for (const OptimizationProblem* base : {&composite, &single}) {
        // Walk from strong to weak noise: the optimum moves smoothly, and at
        // weak noise the objective is too flat to find it from the analytic seed.
        std::vector<SweepRow> block;
        std::optional<PulseParams> previous;
        for (auto it = noise_grid.rbegin(); it != noise_grid.rend(); ++it) {
            OptimizationProblem prob = *base;
            prob.noise = {*it, ratio_q * *it};
            if (previous) prob.seeds.insert(prob.seeds.begin(), *previous);
            const auto res = optimize_gate(prob, opts, seed);
            previous = res.best;
            block.push_back({*it, ratio_q * *it, base->shape, res});
        }
        rows.insert(rows.end(), block.rbegin(), block.rend());
    }
    return rows;
}

}  // namespace cqleak
