#pragma once

// Composite pulse sequences built from bare z- and x-rotations.

#include "cqleak/analysis.hpp"
#include "cqleak/propagator.hpp"
#include "cqleak/pulse.hpp"

#include <utility>
#include <vector>

namespace cqleak {

inline constexpr double kDefaultGuard = 1e-3;  // rad, kept clear of theta = 2pi, 4pi

/// eps_q = -(g phi / 2) cot(theta / 4), the condition that removes the
/// first-order leakage of R_zxz.
/// Throws std::invalid_argument unless 2pi + guard <= theta <= 4pi - guard,
/// g > 0 and phi != 0.
double constraint_eps_q(double theta, double phi, double g, double guard = kDefaultGuard);

// Parameters of R_zxz(theta, phi): a rotation by theta about
// cos(phi/2) x + sin(phi/2) y in the logical subspace.
struct RzxzSpec {
    double theta = 0.0;  // rad, in (2pi, 4pi)
    double phi = 0.0;    // rad
    double g = 3.0;      // GHz
    double guard = kDefaultGuard;

    double eps_q() const { return constraint_eps_q(theta, phi, g, guard); }
    double t_z() const;  // duration of each z pulse, ns
    double t_x() const;  // duration of the x pulse, ns
    GateSpec target() const { return GateSpec::xy_rotation(theta, phi); }
};

struct SequenceMode {
    enum class Kind { BangBang, Smooth } kind = Kind::BangBang;
    SmoothingOptions smoothing{};
    double dt = 1e-4;

    static SequenceMode bang_bang() { return {}; }
    static SequenceMode smooth(double rise, double dt = 1e-4, double handover = -1.0) {
        return {Kind::Smooth, {rise, handover}, dt};
    }
};

/// Bang-bang steps of R_zxz in time order: z(-eps_q), x(g), z(+eps_q).
std::vector<TemplateStep> rzxz_template(const RzxzSpec& spec);

/// U_z(eps_q, phi/2) U_x(g, theta) U_z(-eps_q, -phi/2); the right-most factor
/// acts first.
Unitary3 rzxz(const RzxzSpec& spec, const NoiseSample& noise,
              const SequenceMode& mode = SequenceMode::bang_bang());

/// Bang-bang steps of [U_z(eps_q, 2pi) U_x(g, 2pi)]^2 in time order.
std::vector<TemplateStep> identity_template(double eps_q, double g);

/// [U_z(eps_q, 2pi) U_x(g, 2pi)]^2. Throws unless eps_q > 0 and g > 0.
Unitary3 identity_sequence(double eps_q, double g, const NoiseSample& noise,
                           const SequenceMode& mode = SequenceMode::bang_bang());

/// Two R_zxz factors (first, second) whose product second * first equals
/// the target up to global phase. Throws std::runtime_error if no feasible
/// pair is found.
std::pair<RzxzSpec, RzxzSpec> arbitrary_rotation(const GateSpec& target, double g,
                                                 double guard = kDefaultGuard);

// ---- two-pulse sequences ----

enum class TwoPulseOrder { ZX, XZ };

/// Leading-order coefficients of <L|U|C> and <L|U|E> for the two-pulse
/// compositions U_z U_x (ZX) and U_x U_z (XZ).
std::pair<double, double> two_pulse_leakage_coeffs(TwoPulseOrder order, double theta, double phi,
                                                   double eps_q, double g);

struct NogoOptions {
    int n_theta = 64;
    int n_phi = 64;
    int n_ratio = 33;       // eps_q / g samples over [-20, 20]
    int n_refine = 40;      // best grid points refined locally, per order
    double zero_tol = 1e-8; // residual below which a point counts as a zero
    // |eps_q/g|, |phi| or distance of theta from {0, 4pi} for a null rotation.
    // Near theta = 0 the xz residual is ~theta^2/8, so this must be at least
    // sqrt(8 zero_tol) for the two tolerances to agree.
    double null_tol = 1e-3;
};

struct NogoCandidate {
    TwoPulseOrder order;
    double theta, phi, eps_q, g;
    double c1, c2;
    double min_abs;  // max(|c1|, |c2|): joint residual at the refined point
    bool is_zero;
    bool is_null;
};

struct NogoReport {
    long points_scanned = 0;
    std::vector<NogoCandidate> candidates;
    int viable_zeros = 0;  // zeros that are not null rotations
    bool no_go_confirmed() const { return viable_zeros == 0; }
};

/// Dense grid over theta in (0, 4pi), phi in (-4pi, 4pi), eps_q/g in [-20, 20]
/// for both orders, followed by local refinement of the best points.
NogoReport nogo_scan(const NogoOptions& opts = {});

bool is_null_rotation(double theta, double phi, double eps_q, double g, double tol);

}  // namespace cqleak
