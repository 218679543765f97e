#pragma once

// Two-sphere picture of a three-level pure state: a logical sphere for the
// C/E superposition and a leakage sphere for the weight on L.

#include "cqleak/propagator.hpp"
#include "cqleak/pulse.hpp"
#include "cqleak/types.hpp"

#include <vector>

namespace cqleak {

// psi = (cos(vt/2) cos(chi/2), cos(vt/2) sin(chi/2) e^{i varrho}, sin(vt/2) e^{i varsigma})
struct TwoSphereState {
    double chi = 0.0;       // logical polar angle, [0, pi]
    double varrho = 0.0;    // logical azimuth, [-pi, pi)
    double vartheta = 0.0;  // leakage polar angle, [0, pi]
    double varsigma = 0.0;  // leakage azimuth, [-pi, pi)
    bool logical_degenerate = false;  // chi at a pole, varrho reported as 0
    bool leakage_degenerate = false;  // vartheta at a pole, varsigma reported as 0

    double leakage() const;  // sin^2(vartheta / 2)
};

/// Throws std::invalid_argument if |psi| differs from 1 by more than 1e-12.
/// The global phase is fixed so that <C|psi> is real and non-negative, or
/// <E|psi> when <C|psi> vanishes.
TwoSphereState map_to_spheres(const State3& psi);

State3 spheres_to_state(const TwoSphereState& s);

struct SpherePoint {
    double t;
    TwoSphereState state;
    double p_leak;
};

std::vector<SpherePoint> record_trajectory(const PulseSchedule& sched, const NoiseSample& noise,
                                           const State3& psi0, double dt = 1e-4);

}  // namespace cqleak
