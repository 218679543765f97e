#pragma once

// Derivative-free tuning of smooth pulse parameters, and the bounded simplex
// search it runs on.

#include "cqleak/analysis.hpp"
#include "cqleak/propagator.hpp"
#include "cqleak/pulse.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cqleak {

struct Bounds {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct NelderMeadOptions {
    int max_evals = 500;
    double ftol = 1e-16;  // spread of objective values across the simplex
    double xtol = 1e-12;  // simplex diameter, in units of the bound widths
    double initial_step = 0.1;  // relative to |x|, floored at 1% of the bound width
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
    std::vector<double> best_trace;  // best objective after each evaluation
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Nelder-Mead simplex search with trial points projected onto the box.
/// Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const Bounds& bounds,
                             const NelderMeadOptions& opts = {});

// ---- smooth gate optimisation ----

enum class PulseShape {
    Composite,    // z(-eps) x(g) z(+eps), the R_zxz layout
    SinglePulse,  // one x pulse with a concurrent, centred eps_q pulse
};

std::string to_string(PulseShape s);

// The three free pulse parameters.
struct PulseParams {
    double t_z = 0.0;       // ns; z-pulse length (single pulse: concurrent eps_q pulse length)
    double t_x = 0.0;       // ns; x-pulse length
    double eps_peak = 0.0;  // GHz; eps_q level
};

struct OptimizationProblem {
    PulseShape shape = PulseShape::Composite;
    GateSpec target = GateSpec::x_rotation(-kPi / 2.0);
    double g_peak = 3.0;   // GHz, fixed
    double rise = 0.05;    // ns, fixed
    double handover = -1.0;  // see SmoothingOptions
    NoiseSample noise{};
    double dt = 1e-4;
    PulseParams lower{0.0, 0.0, -50.0};
    PulseParams upper{10.0, 10.0, 50.0};
    std::vector<PulseParams> seeds;  // restarts cycle through these first
};

struct OptimizationResult {
    PulseParams best;
    double infidelity = 1.0;
    double initial_infidelity = 1.0;
    int evals = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    std::vector<double> best_trace;
};

struct OptimizerOptions {
    int budget = 3000;  // total objective evaluations over all restarts
    int restarts = 4;
    bool parallel = true;
};

/// Smooth schedule for the given shape and parameters.
/// Throws std::invalid_argument for infeasible parameters.
PulseSchedule make_schedule(const OptimizationProblem& prob, const PulseParams& p);

/// Infidelity of the gate produced by p; +inf if the schedule is infeasible.
double evaluate_infidelity(const OptimizationProblem& prob, const PulseParams& p);

/// Bang-bang analytic seed for a composite rotation by theta about the
/// cos(phi/2) x + sin(phi/2) y axis.
PulseParams composite_seed(double theta, double phi, double g);

/// Composite X_{-pi/2} problem seeded from R_zxz(2pi + pi/2, 2pi).
OptimizationProblem x_half_pi_problem(PulseShape shape, const NoiseSample& noise,
                                      double g_peak = 3.0, double rise = 0.05);

/// Bounded simplex search with restarts. Restart k starts from seeds[k] when
/// available, otherwise from a random perturbation of the best seed. Results
/// are merged in restart order, so the outcome only depends on (prob, opts, seed).
/// Throws std::invalid_argument for bad bounds or budget < 50, and
/// std::runtime_error if every evaluation failed.
OptimizationResult optimize_gate(const OptimizationProblem& prob, const OptimizerOptions& opts,
                                 std::uint64_t seed);

struct SweepRow {
    double d_eps_d;
    double d_eps_q;
    PulseShape approach;
    OptimizationResult result;
};

/// Optimises both approaches at every noise amplitude, with d_eps_q =
/// ratio_q * d_eps_d. Grid points are optimised from the largest noise down,
/// each warm-started from its neighbour; rows come back in grid order.
/// Throws std::invalid_argument unless the grid is non-empty, positive and ascending.
std::vector<SweepRow> sweep_optimize(const std::vector<double>& noise_grid, double ratio_q,
                                     const OptimizationProblem& composite,
                                     const OptimizationProblem& single,
                                     const OptimizerOptions& opts, std::uint64_t seed);

}  // namespace cqleak
