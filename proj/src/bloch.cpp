#include "cqleak/bloch.hpp"

#include <cmath>
#include <stdexcept>

namespace cqleak {

namespace {

// Zero amplitudes below this are treated as poles.
constexpr double kPoleTol = 1e-15;

double wrap_azimuth(double a) {
    double w = std::remainder(a, kTwoPi);  // [-pi, pi]
    if (w >= kPi) w -= kTwoPi;
    return w;
}

}  // namespace

double TwoSphereState::leakage() const {
    const double s = std::sin(0.5 * vartheta);
    return s * s;
}

TwoSphereState map_to_spheres(const State3& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("map_to_spheres: state is not normalized");
    }
    const double ac = std::abs(psi(kC));
    const double ae = std::abs(psi(kE));
    const double al = std::abs(psi(kL));

    // Gauge reference: first amplitude that does not vanish among C, E.
    double ref = 0.0;
    if (ac > kPoleTol) {
        ref = std::arg(psi(kC));
    } else if (ae > kPoleTol) {
        ref = std::arg(psi(kE));
    }

    TwoSphereState s;
    s.vartheta = 2.0 * std::atan2(al, std::hypot(ac, ae));
    s.chi = 2.0 * std::atan2(ae, ac);
    s.logical_degenerate = ac <= kPoleTol || ae <= kPoleTol;
    s.leakage_degenerate = al <= kPoleTol || std::hypot(ac, ae) <= kPoleTol;
    s.varrho = s.logical_degenerate ? 0.0 : wrap_azimuth(std::arg(psi(kE)) - ref);
    if (al <= kPoleTol || (ac <= kPoleTol && ae <= kPoleTol)) {
        s.varsigma = 0.0;
    } else {
        s.varsigma = wrap_azimuth(std::arg(psi(kL)) - ref);
    }
    return s;
}

State3 spheres_to_state(const TwoSphereState& s) {
    const double cv = std::cos(0.5 * s.vartheta);
    State3 psi;
    psi(kC) = cv * std::cos(0.5 * s.chi);
    psi(kE) = cv * std::sin(0.5 * s.chi) * std::polar(1.0, s.varrho);
    psi(kL) = std::sin(0.5 * s.vartheta) * std::polar(1.0, s.varsigma);
    return psi;
}

std::vector<SpherePoint> record_trajectory(const PulseSchedule& sched, const NoiseSample& noise,
                                           const State3& psi0, double dt) {
    const auto evo = evolve_schedule(sched, noise, {.dt = dt, .record = true, .psi0 = psi0});
    std::vector<SpherePoint> out;
    out.reserve(evo.trajectory->size());
    for (const auto& p : *evo.trajectory) {
        const auto s = map_to_spheres(p.psi.normalized());
        out.push_back({p.t, s, s.leakage()});
    }
    return out;
}

}  // namespace cqleak
