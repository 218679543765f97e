#include "cqleak/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqleak {

namespace {

const cplx I{0.0, 1.0};

Matrix2 pauli_x() { return (Matrix2() << 0, 1, 1, 0).finished(); }
Matrix2 pauli_y() { return (Matrix2() << 0, -I, I, 0).finished(); }
Matrix2 pauli_z() { return (Matrix2() << 1, 0, 0, -1).finished(); }

}  // namespace

GateSpec::GateSpec(Matrix2 u, std::string name) : target(std::move(u)), label(std::move(name)) {
    if ((target.adjoint() * target - Matrix2::Identity()).norm() > 1e-12) {
        throw std::invalid_argument("GateSpec: target is not unitary");
    }
}

GateSpec GateSpec::rotation(double angle, double nx, double ny, double nz, std::string name) {
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (norm == 0.0) throw std::invalid_argument("GateSpec::rotation: zero axis");
    const Matrix2 ns = (nx * pauli_x() + ny * pauli_y() + nz * pauli_z()) / norm;
    Matrix2 u = std::cos(0.5 * angle) * Matrix2::Identity() - I * std::sin(0.5 * angle) * ns;
    return GateSpec(u, std::move(name));
}

GateSpec GateSpec::xy_rotation(double theta, double phi) {
    return rotation(theta, std::cos(0.5 * phi), std::sin(0.5 * phi), 0.0, "R_xy");
}

GateSpec GateSpec::x_rotation(double angle) { return rotation(angle, 1.0, 0.0, 0.0, "X"); }

GateSpec GateSpec::identity() { return GateSpec(Matrix2::Identity(), "I"); }

Unitary3 embed(const Matrix2& u) {
    Unitary3 out = Unitary3::Identity();
    out.topLeftCorner<2, 2>() = u;
    return out;
}

double process_infidelity(const Unitary3& u_sim, const GateSpec& target) {
    const Matrix2 p = u_sim.topLeftCorner<2, 2>();
    const double norm_term = p.squaredNorm();  // Tr(P P^dag)
    const double overlap = std::norm((target.target.adjoint() * p).trace());
    return (6.0 - norm_term - overlap) / 6.0;
}

double process_fidelity(const Unitary3& u_sim, const GateSpec& target) {
    const Matrix2 p = u_sim.topLeftCorner<2, 2>();
    return (p.squaredNorm() + std::norm((target.target.adjoint() * p).trace())) / 6.0;
}

LeakageProbabilities leakage_probabilities(const Unitary3& u) {
    return {std::norm(u(kL, kC)), std::norm(u(kL, kE))};
}

double phase_aligned_distance(const Matrix2& a, const Matrix2& b) {
    const cplx tr = (b.adjoint() * a).trace();
    const cplx phase = std::abs(tr) > 0.0 ? std::conj(tr) / std::abs(tr) : cplx{1.0, 0.0};
    return (phase * a - b).norm();
}

double computational_error(const Unitary3& u, const GateSpec& target) {
    const double d = phase_aligned_distance(u.topLeftCorner<2, 2>(), target.target);
    return d * d;
}

GateReport make_report(const Unitary3& u, const GateSpec& target,
                       std::map<std::string, double> params) {
    GateReport r;
    r.infidelity = process_infidelity(u, target);
    r.fidelity = process_fidelity(u, target);
    const auto leak = leakage_probabilities(u);
    r.p_lc = leak.p_lc;
    r.p_le = leak.p_le;
    r.comp_error = computational_error(u, target);
    r.params = std::move(params);
    return r;
}

LeakageProbabilities closed_form_rzxz_leakage(double theta, double ratio) {
    if (!(theta > kTwoPi && theta < 2.0 * kTwoPi)) {
        throw std::invalid_argument("closed_form_rzxz_leakage: theta outside (2pi, 4pi)");
    }
    const double q = 0.25 * theta;
    const double s = std::sin(q);
    const double t = std::tan(q);
    const double r6 = std::pow(ratio, 6);
    const double a_lc = s * s / 3.0 - q * t + 2.0 / 3.0 * t * t;
    const double a_le = 2.0 / 3.0 * t - q + std::sin(0.5 * theta) / 6.0;
    return {r6 * a_lc * a_lc, r6 * a_le * a_le};
}

double second_order_a(double theta) {
    const double q = 0.25 * theta;
    return 2.0 * std::sin(q) * (std::sin(q) - q * std::cos(q));
}

double second_order_b(double theta) {
    const double q = 0.25 * theta;
    return std::sin(0.5 * theta) - q * std::cos(0.5 * theta) - std::tan(q);
}

Unitary3 rzxz_first_order_derivative(double theta, double phi, double eps_q, double g) {
    const double q = 0.25 * theta;
    const double coeff = -(g * phi * std::cos(q) / eps_q + 2.0 * std::sin(q));
    const cplx em = std::polar(1.0, -0.5 * phi);
    const cplx ep = std::polar(1.0, 0.5 * phi);
    Unitary3 m = Unitary3::Zero();
    m(0, 2) = em * std::sin(q);
    m(1, 2) = I * std::cos(q);
    m(2, 0) = ep * std::sin(q);
    m(2, 1) = I * std::cos(q);
    return m * (coeff / g);
}

IdentityErrors closed_form_identity_errors(double eps_q, double g, double ratio) {
    if (!(eps_q > 0.0) || !(g > 0.0)) {
        throw std::invalid_argument("closed_form_identity_errors: eps_q and g must be positive");
    }
    const double k = std::pow(kPi + 4.0 * kPi * g / eps_q, 2);
    const double r4 = std::pow(ratio, 4);
    const double r6 = std::pow(ratio, 6);
    const double lc = std::pow(kPi * g / eps_q, 2);
    return {k * r4, lc * k * r6, k * r6};
}

double scaling_exponent_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4) throw std::invalid_argument("scaling_exponent_fit: need at least 4 points");
    double xmin = points.front().first, xmax = xmin;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            throw std::invalid_argument("scaling_exponent_fit: values must be positive");
        }
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    if (std::log10(xmax / xmin) < 1.0 - 1e-12) {
        throw std::invalid_argument("scaling_exponent_fit: x-range spans less than one decade");
    }
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    return sxy / sxx;
}

}  // namespace cqleak
