#pragma once

// Time evolution for the three-level model. Hamiltonians are in GHz, times in
// ns, and every propagator is exp(-i 2 pi H t).

#include "cqleak/hamiltonian.hpp"
#include "cqleak/pulse.hpp"
#include "cqleak/types.hpp"

#include <optional>
#include <vector>

namespace cqleak {

// Quasistatic charge noise, constant over one gate.
struct NoiseSample {
    double d_eps_d = 0.0;  // dipolar fluctuation, couples E and L (GHz)
    double d_eps_q = 0.0;  // quadrupolar fluctuation, shifts eps_q (GHz)
};

/// exp(-i 2 pi h t) from the spectral decomposition of h.
/// Throws std::invalid_argument if h is not Hermitian to 1e-12.
Unitary3 expm_hermitian(const Hamiltonian3& h, double t);

/// z-rotation by phi. Gate time phi / (2 pi eps_q) must be positive.
/// Throws std::invalid_argument if eps_q == 0 or sign(phi) != sign(eps_q).
Unitary3 bare_uz(double eps_q, const NoiseSample& noise, double phi);

/// x-rotation by theta. Gate time theta / (4 pi g).
/// Throws std::invalid_argument unless g > 0 and theta > 0.
Unitary3 bare_ux(double g, const NoiseSample& noise, double theta);

struct TrajectoryPoint {
    double t;
    State3 psi;
};

struct EvolveOptions {
    double dt = 1e-4;  // ns
    bool record = false;
    State3 psi0 = State3::UnitX();  // initial state for the recorded trajectory
};

struct Evolution {
    Unitary3 u;
    std::optional<std::vector<TrajectoryPoint>> trajectory;
};

/// Product of midpoint-sampled piecewise-constant exponentials. Steps are
/// aligned to the schedule breakpoints; between breakpoints an interval of
/// length L is split into ceil(L/dt) equal steps. Intervals with constant
/// controls are exponentiated in one step unless a trajectory is recorded.
/// Throws std::invalid_argument for an empty schedule or dt <= 0.
Evolution evolve_schedule(const PulseSchedule& sched, const NoiseSample& noise,
                          const EvolveOptions& opts = {});

double unitarity_defect(const Unitary3& u);

}  // namespace cqleak
