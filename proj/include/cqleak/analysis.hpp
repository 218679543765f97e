#pragma once

// Gate metrics on the projected logical subspace and the leading-order error
// laws of the composite sequences.

#include "cqleak/types.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cqleak {

// Target gate on the logical subspace {C, E}.
struct GateSpec {
    Matrix2 target;
    std::string label;

    /// Throws std::invalid_argument if target is not unitary to 1e-12.
    GateSpec(Matrix2 u, std::string name);

    /// exp(-i angle/2 n.sigma) with n = (nx, ny, nz) normalised internally.
    static GateSpec rotation(double angle, double nx, double ny, double nz, std::string name = {});
    /// Rotation by theta about cos(phi/2) x + sin(phi/2) y.
    static GateSpec xy_rotation(double theta, double phi);
    static GateSpec x_rotation(double angle);
    static GateSpec identity();
};

/// Embeds a logical operator into the three-level space with <L|u|L> = 1.
Unitary3 embed(const Matrix2& u);

/// [Tr(P P^dag) + |Tr(T^dag P)|^2] / 6 with P the logical block of u_sim.
double process_fidelity(const Unitary3& u_sim, const GateSpec& target);

/// 1 - process_fidelity, evaluated without forming F first.
double process_infidelity(const Unitary3& u_sim, const GateSpec& target);

struct LeakageProbabilities {
    double p_lc;  // |<L|U|C>|^2
    double p_le;  // |<L|U|E>|^2
};

LeakageProbabilities leakage_probabilities(const Unitary3& u);

/// || e^{i a} P - T ||_F^2 with the phase a maximising Re Tr(T^dag e^{ia} P).
double computational_error(const Unitary3& u, const GateSpec& target);

/// Same alignment, returns || e^{ia} A - B ||_F for two logical operators.
double phase_aligned_distance(const Matrix2& a, const Matrix2& b);

struct GateReport {
    double fidelity = 0.0;
    double infidelity = 0.0;
    double p_lc = 0.0;
    double p_le = 0.0;
    double comp_error = 0.0;
    std::map<std::string, double> params;
};

GateReport make_report(const Unitary3& u, const GateSpec& target,
                       std::map<std::string, double> params = {});

// ---- leading-order error laws of the bang-bang sequences ----

/// Sixth-order leakage of R_zxz(theta, phi) under the first-order constraint.
/// Throws std::invalid_argument outside 2pi < theta < 4pi.
LeakageProbabilities closed_form_rzxz_leakage(double theta, double ratio);

/// Second-order logical-block coefficients of R_zxz under the constraint.
double second_order_a(double theta);
double second_order_b(double theta);

/// d R_zxz / d(d_eps_d) at d_eps_d = 0 for arbitrary eps_q (constraint not
/// imposed). Vanishes when eps_q = -(g phi / 2) cot(theta / 4).
Unitary3 rzxz_first_order_derivative(double theta, double phi, double eps_q, double g);

struct IdentityErrors {
    double p_ec;
    double p_lc;
    double p_le;
};

/// Leading-order errors of the four-pulse identity sequence.
/// Throws std::invalid_argument unless eps_q > 0 and g > 0.
IdentityErrors closed_form_identity_errors(double eps_q, double g, double ratio);

/// Least-squares slope of log(y) against log(x).
/// Throws std::invalid_argument with fewer than 4 points, non-positive values
/// or an x-range spanning less than one decade.
double scaling_exponent_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace cqleak
