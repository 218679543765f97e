#include "cqleak/optimizer.hpp"
#include "cqleak/sequences.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace cqleak;
using Catch::Matchers::WithinAbs;

TEST_CASE("bounded Nelder-Mead") {
    SECTION("quadratic bowl") {
        auto f = [](const std::vector<double>& x) {
            return (x[0] - 1.0) * (x[0] - 1.0) + 10.0 * (x[1] + 2.0) * (x[1] + 2.0);
        };
        const auto r = nelder_mead(f, {0.0, 0.0}, {{-5.0, -5.0}, {5.0, 5.0}}, {2000, 1e-20, 1e-12, 0.1});
        CHECK(r.converged);
        CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-5));
        CHECK_THAT(r.x[1], WithinAbs(-2.0, 1e-5));
    }
    SECTION("Rosenbrock") {
        auto f = [](const std::vector<double>& x) {
            return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
        };
        const auto r = nelder_mead(f, {-1.2, 1.0}, {{-5.0, -5.0}, {5.0, 5.0}}, {5000, 1e-24, 1e-14, 0.1});
        CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-4));
        CHECK_THAT(r.x[1], WithinAbs(1.0, 1e-4));
    }
    SECTION("optimum on the boundary") {
        auto f = [](const std::vector<double>& x) { return x[0]; };
        const auto r = nelder_mead(f, {0.5}, {{0.2}, {1.0}}, {});
        CHECK_THAT(r.x[0], WithinAbs(0.2, 1e-12));
    }
    SECTION("trial points stay inside the box") {
        auto f = [](const std::vector<double>& x) {
            if (x[0] < -1.0 || x[0] > 1.0 || x[1] < -1.0 || x[1] > 1.0) throw std::logic_error("left the box");
            return std::pow(x[0] - 3.0, 2) + std::pow(x[1] + 3.0, 2);
        };
        const auto r = nelder_mead(f, {0.0, 0.0}, {{-1.0, -1.0}, {1.0, 1.0}}, {});
        CHECK_THAT(r.x[0], WithinAbs(1.0, 1e-8));
        CHECK_THAT(r.x[1], WithinAbs(-1.0, 1e-8));
    }
    SECTION("non-finite values count as worst") {
        auto f = [](const std::vector<double>& x) { return x[0] < 0.3 ? NAN : (x[0] - 0.5) * (x[0] - 0.5); };
        const auto r = nelder_mead(f, {0.9}, {{0.0}, {1.0}}, {});
        CHECK_THAT(r.x[0], WithinAbs(0.5, 1e-6));
    }
    SECTION("budget and running best") {
        int calls = 0;
        auto f = [&](const std::vector<double>& x) {
            ++calls;
            return std::cos(3.0 * x[0]) + x[1] * x[1];
        };
        const auto r = nelder_mead(f, {0.1, 0.4}, {{-2.0, -2.0}, {2.0, 2.0}}, {37, 0.0, 0.0, 0.1});
        CHECK(r.evals == 37);
        CHECK(calls == 37);
        CHECK(r.best_trace.size() == 37);
        for (std::size_t k = 1; k < r.best_trace.size(); ++k) CHECK(r.best_trace[k] <= r.best_trace[k - 1]);
        CHECK(r.f == r.best_trace.back());
        CHECK_FALSE(r.converged);
    }
    SECTION("argument errors") {
        auto f = [](const std::vector<double>&) { return 0.0; };
        CHECK_THROWS_AS(nelder_mead(f, {}, {{}, {}}), std::invalid_argument);
        CHECK_THROWS_AS(nelder_mead(f, {0.0}, {{1.0}, {0.0}}), std::invalid_argument);
        CHECK_THROWS_AS(nelder_mead(f, {0.0, 1.0}, {{0.0}, {1.0}}), std::invalid_argument);
    }
}

TEST_CASE("pulse parametrisations") {
    const auto comp = x_half_pi_problem(PulseShape::Composite, {});
    const auto single = x_half_pi_problem(PulseShape::SinglePulse, {});
    SECTION("composite seed is the bang-bang X_{-pi/2}") {
        REQUIRE(comp.seeds.size() == 1);
        const auto& s = comp.seeds.front();
        const RzxzSpec spec{2.5 * kPi, kTwoPi, 3.0};
        CHECK_THAT(s.t_z, WithinAbs(spec.t_z(), 1e-15));
        CHECK_THAT(s.t_x, WithinAbs(spec.t_x(), 1e-15));
        CHECK_THAT(s.eps_peak, WithinAbs(spec.eps_q(), 1e-15));
        // The smooth version of the seed is exact without noise.
        CHECK(evaluate_infidelity(comp, s) < 1e-12);
    }
    SECTION("single-pulse layout") {
        const auto sched = make_schedule(single, {0.1, 0.3, 2.0});
        REQUIRE(sched.segments().size() == 2);
        const auto& g = sched.segments()[0];
        const auto& z = sched.segments()[1];
        CHECK_THAT(0.5 * (g.start + g.end), WithinAbs(0.5 * (z.start + z.end), 1e-15));
        CHECK_THAT(sched.duration(), WithinAbs(0.35, 1e-15));
        CHECK_THROWS_AS(make_schedule(single, {0.4, 0.3, 2.0}), std::invalid_argument);
        CHECK(std::isinf(evaluate_infidelity(single, {0.4, 0.3, 2.0})));
        CHECK(std::isinf(evaluate_infidelity(comp, {0.01, 0.3, 2.0})));
    }
    SECTION("seed sanity at moderate noise", "[property]") {
        for (double d : {0.03, 0.1, 0.3}) {
            const auto p = x_half_pi_problem(PulseShape::Composite, {d, 0.0});
            const double f0 = evaluate_infidelity(p, p.seeds.front());
            if (d / 3.0 <= 0.1) CHECK(f0 < 1e-2);
        }
    }
}

TEST_CASE("gate optimisation") {
    SECTION("noise off stays exact near the seed") {
        const auto prob = x_half_pi_problem(PulseShape::Composite, {});
        const auto r = optimize_gate(prob, {200, 1, false}, 3);
        CHECK(r.infidelity < 1e-10);
        CHECK(r.infidelity <= r.initial_infidelity);
    }
    SECTION("determinism and independence from threading", "[property]") {
        const auto prob = x_half_pi_problem(PulseShape::Composite, {0.3, 0.0});
        const OptimizerOptions opts{600, 3, true};
        const auto a = optimize_gate(prob, opts, 12345);
        const auto b = optimize_gate(prob, opts, 12345);
        const auto c = optimize_gate(prob, {600, 3, false}, 12345);
        CHECK(a.best.t_z == b.best.t_z);
        CHECK(a.best.t_x == b.best.t_x);
        CHECK(a.best.eps_peak == b.best.eps_peak);
        CHECK(a.infidelity == b.infidelity);
        CHECK(a.evals == b.evals);
        CHECK(a.best.t_z == c.best.t_z);
        CHECK(a.best.eps_peak == c.best.eps_peak);
        CHECK(a.seed == 12345);
        for (std::size_t k = 1; k < a.best_trace.size(); ++k) REQUIRE(a.best_trace[k] <= a.best_trace[k - 1]);
        CHECK(a.infidelity <= a.initial_infidelity);
    }
    SECTION("argument errors") {
        auto prob = x_half_pi_problem(PulseShape::Composite, {});
        CHECK_THROWS_AS(optimize_gate(prob, {49, 1, false}, 1), std::invalid_argument);
        CHECK_THROWS_AS(optimize_gate(prob, {100, 0, false}, 1), std::invalid_argument);
        auto bad = prob;
        bad.lower.t_x = 20.0;
        CHECK_THROWS_AS(optimize_gate(bad, {100, 1, false}, 1), std::invalid_argument);
        auto infeasible = prob;
        infeasible.upper = {0.01, 0.01, 50.0};
        infeasible.seeds = {{0.005, 0.005, 1.0}};
        CHECK_THROWS_AS(optimize_gate(infeasible, {100, 1, false}, 1), std::runtime_error);
        auto none = prob;
        none.seeds.clear();
        CHECK_THROWS_AS(optimize_gate(none, {100, 1, false}, 1), std::invalid_argument);
    }
}

TEST_CASE("noise sweeps") {
    const auto comp = x_half_pi_problem(PulseShape::Composite, {});
    const auto single = x_half_pi_problem(PulseShape::SinglePulse, {});
    SECTION("grid validation") {
        CHECK_THROWS_AS(sweep_optimize({}, 0.0, comp, single, {}, 1), std::invalid_argument);
        CHECK_THROWS_AS(sweep_optimize({0.1, 0.05}, 0.0, comp, single, {}, 1), std::invalid_argument);
        CHECK_THROWS_AS(sweep_optimize({0.0, 0.1}, 0.0, comp, single, {}, 1), std::invalid_argument);
    }
    SECTION("rows in grid order for both approaches") {
        const auto rows = sweep_optimize({0.1, 0.3}, 0.02, comp, single, {300, 1, false}, 1);
        REQUIRE(rows.size() == 4);
        CHECK(rows[0].approach == PulseShape::Composite);
        CHECK(rows[0].d_eps_d == 0.1);
        CHECK(rows[1].d_eps_d == 0.3);
        CHECK(rows[2].approach == PulseShape::SinglePulse);
        CHECK_THAT(rows[1].d_eps_q, WithinAbs(0.006, 1e-15));
        CHECK(to_string(rows[3].approach) == "single");
    }
    SECTION("single pulse degrades quadratically, composite stays at roundoff", "[slow]") {
        const std::vector<double> grid{0.01, 0.03, 0.1, 0.3};
        const auto rows = sweep_optimize(grid, 0.0, comp, single, {}, 1);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(rows[k].result.infidelity < 1e-11);
            pts.emplace_back(grid[k], rows[grid.size() + k].result.infidelity);
        }
        const double slope = scaling_exponent_fit(pts);
        CHECK(slope > 1.8);
        CHECK(slope < 2.2);
    }
}
