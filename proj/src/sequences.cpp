#include "cqleak/sequences.hpp"

#include "cqleak/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqleak {

double constraint_eps_q(double theta, double phi, double g, double guard) {
    if (!(theta >= kTwoPi + guard && theta <= 2.0 * kTwoPi - guard)) {
        throw std::invalid_argument("constraint_eps_q: theta outside the feasible window (2pi, 4pi)");
    }
    if (!(g > 0.0)) throw std::invalid_argument("constraint_eps_q: g must be positive");
    if (phi == 0.0) throw std::invalid_argument("constraint_eps_q: phi must be non-zero");
    return -(g * phi / 2.0) / std::tan(theta / 4.0);
}

double RzxzSpec::t_z() const { return (0.5 * phi) / (kTwoPi * eps_q()); }

double RzxzSpec::t_x() const { return theta / (2.0 * kTwoPi * g); }

std::vector<TemplateStep> rzxz_template(const RzxzSpec& spec) {
    const double eq = spec.eps_q();
    const double tz = spec.t_z();
    return {{Channel::EpsQ, -eq, tz}, {Channel::G, spec.g, spec.t_x()}, {Channel::EpsQ, eq, tz}};
}

Unitary3 rzxz(const RzxzSpec& spec, const NoiseSample& noise, const SequenceMode& mode) {
    if (mode.kind == SequenceMode::Kind::Smooth) {
        const auto sched = build_smooth_schedule(rzxz_template(spec), mode.smoothing);
        return evolve_schedule(sched, noise, {.dt = mode.dt}).u;
    }
    const double eq = spec.eps_q();
    return bare_uz(eq, noise, 0.5 * spec.phi) * bare_ux(spec.g, noise, spec.theta) *
           bare_uz(-eq, noise, -0.5 * spec.phi);
}

std::vector<TemplateStep> identity_template(double eps_q, double g) {
    const TemplateStep x{Channel::G, g, 1.0 / (2.0 * g)};
    const TemplateStep z{Channel::EpsQ, eps_q, 1.0 / eps_q};
    return {x, z, x, z};
}

Unitary3 identity_sequence(double eps_q, double g, const NoiseSample& noise,
                           const SequenceMode& mode) {
    if (!(eps_q > 0.0) || !(g > 0.0)) {
        throw std::invalid_argument("identity_sequence: eps_q and g must be positive");
    }
    if (mode.kind == SequenceMode::Kind::Smooth) {
        const auto sched = build_smooth_schedule(identity_template(eps_q, g), mode.smoothing);
        return evolve_schedule(sched, noise, {.dt = mode.dt}).u;
    }
    const Unitary3 half = bare_uz(eps_q, noise, kTwoPi) * bare_ux(g, noise, kTwoPi);
    return half * half;
}

// ---- arbitrary rotations ----

namespace {

// Unit quaternion (w, x, y, z) of U = w - i (x sx + y sy + z sz).
using Quat = std::array<double, 4>;

Quat to_quaternion(const Matrix2& u) {
    const Matrix2 su = u / std::sqrt(u.determinant());
    Quat q{su(0, 0).real(), -su(0, 1).imag(), -su(0, 1).real(), -su(0, 0).imag()};
    double n = 0.0;
    for (double v : q) n += v * v;
    n = std::sqrt(n);
    for (double& v : q) v /= n;
    return q;
}

Quat multiply(const Quat& a, const Quat& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + b[0] * a[1] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] + b[0] * a[2] + a[3] * b[1] - a[1] * b[3],
            a[0] * b[3] + b[0] * a[3] + a[1] * b[2] - a[2] * b[1]};
}

struct PlanarRotation {
    double alpha;  // in [0, 2pi]
    double psi;    // azimuth of the axis in the x-y plane
};

// Reads angle and in-plane axis from a quaternion whose z component vanishes.
PlanarRotation planar_from(const Quat& q) {
    const double v = std::hypot(q[1], q[2]);
    return {2.0 * std::atan2(v, q[0]), std::atan2(q[2], q[1])};
}

// Lifts a rotation by alpha in (0, 2pi) into the R_zxz window, theta = alpha + 2pi.
// The extra 2pi only flips the global sign.
RzxzSpec lift(const PlanarRotation& r, double g, double guard) {
    double phi = 2.0 * r.psi;
    if (std::abs(phi) < 1e-3) phi += 2.0 * kTwoPi;
    return RzxzSpec{r.alpha + kTwoPi, phi, g, guard};
}

double window_margin(double alpha) { return std::min(alpha, kTwoPi - alpha); }

}  // namespace

std::pair<RzxzSpec, RzxzSpec> arbitrary_rotation(const GateSpec& target, double g, double guard) {
    if (!(g > 0.0)) throw std::invalid_argument("arbitrary_rotation: g must be positive");
    const Quat u = to_quaternion(target.target);

    // Second factor R2 = (cos a/2, sin a/2 (cos psi, sin psi, 0)); the first
    // factor R2^-1 U lies in the x-y plane iff cos(a/2) u_z = sin(a/2) D(psi).
    // This leaves one free parameter, searched on a bounded grid.
    constexpr int kPsi = 72;
    constexpr int kAlpha = 24;
    std::vector<double> psis;
    for (int k = 0; k < kPsi; ++k) psis.push_back(kTwoPi * k / kPsi);
    const double psi0 = std::atan2(u[2], u[1]);
    psis.push_back(psi0);
    psis.push_back(psi0 + kPi);

    double best_margin = -1.0;
    std::pair<PlanarRotation, PlanarRotation> best{};
    auto consider = [&](double alpha2, double psi) {
        if (!(alpha2 > 0.0 && alpha2 < kTwoPi)) return;
        const Quat r2inv{std::cos(0.5 * alpha2), -std::sin(0.5 * alpha2) * std::cos(psi),
                         -std::sin(0.5 * alpha2) * std::sin(psi), 0.0};
        const Quat q1 = multiply(r2inv, u);
        if (std::abs(q1[3]) > 1e-12) return;
        const PlanarRotation first = planar_from(q1);
        const double margin = std::min(window_margin(first.alpha), window_margin(alpha2));
        if (margin > best_margin) {
            best_margin = margin;
            best = {first, PlanarRotation{alpha2, psi}};
        }
    };
    for (double psi : psis) {
        const double d = std::cos(psi) * u[2] - std::sin(psi) * u[1];
        if (std::abs(d) > 1e-9) {
            double half = std::atan2(u[3], d);
            if (half < 0.0) half += kPi;
            consider(2.0 * half, psi);
        } else if (std::abs(u[3]) < 1e-12) {
            for (int k = 1; k < kAlpha; ++k) consider(kTwoPi * k / kAlpha, psi);
        } else {
            consider(kPi, psi);  // cos(a/2) must vanish
        }
    }
    if (best_margin <= guard) {
        throw std::runtime_error("arbitrary_rotation: no feasible two-step decomposition found");
    }

    auto result = std::make_pair(lift(best.first, g, guard), lift(best.second, g, guard));
    const Unitary3 product = rzxz(result.second, {}) * rzxz(result.first, {});
    if (phase_aligned_distance(product.topLeftCorner<2, 2>(), target.target) > 1e-9) {
        throw std::runtime_error("arbitrary_rotation: decomposition failed the product check");
    }
    return result;
}

// ---- two-pulse no-go ----

std::pair<double, double> two_pulse_leakage_coeffs(TwoPulseOrder order, double theta, double phi,
                                                   double eps_q, double g) {
    const double s2 = std::sin(theta / 2.0);
    const double c2 = std::cos(theta / 2.0);
    if (order == TwoPulseOrder::ZX) {
        const double s4 = std::sin(theta / 4.0);
        return {2.0 * eps_q * s4 * s4 + g * phi * s2, eps_q * s2 + g * phi * c2};
    }
    return {c2 - 1.0, eps_q * s2 + g * phi};
}

bool is_null_rotation(double theta, double phi, double eps_q, double g, double tol) {
    const bool z_null = std::abs(eps_q / g) < tol || std::abs(phi) < tol;
    const bool x_null = theta < tol || 2.0 * kTwoPi - theta < tol;
    return z_null || x_null || g == 0.0;
}

NogoReport nogo_scan(const NogoOptions& opts) {
    if (opts.n_theta < 2 || opts.n_phi < 2 || opts.n_ratio < 2 || opts.n_refine < 0) {
        throw std::invalid_argument("nogo_scan: grid too small");
    }
    if (!(opts.zero_tol > 0.0) || opts.null_tol < std::sqrt(8.0 * opts.zero_tol)) {
        throw std::invalid_argument("nogo_scan: null_tol must be at least sqrt(8 zero_tol)");
    }
    constexpr double g = 1.0;
    constexpr double kRatioMax = 20.0;
    const double theta_max = 2.0 * kTwoPi;
    const double phi_max = 2.0 * kTwoPi;

    NogoReport report;
    for (TwoPulseOrder order : {TwoPulseOrder::ZX, TwoPulseOrder::XZ}) {
        struct GridPoint {
            double residual;
            double theta, phi, eps;
        };
        std::vector<GridPoint> grid;
        grid.reserve(static_cast<std::size_t>(opts.n_theta) * opts.n_phi * opts.n_ratio);
        for (int i = 0; i < opts.n_theta; ++i) {
            const double th = theta_max * (i + 0.5) / opts.n_theta;
            for (int j = 0; j < opts.n_phi; ++j) {
                const double ph = -phi_max + 2.0 * phi_max * (j + 0.5) / opts.n_phi;
                for (int k = 0; k < opts.n_ratio; ++k) {
                    const double eq = -kRatioMax + 2.0 * kRatioMax * k / (opts.n_ratio - 1);
                    const auto [c1, c2] = two_pulse_leakage_coeffs(order, th, ph, eq, g);
                    grid.push_back({std::max(std::abs(c1), std::abs(c2)), th, ph, eq});
                }
            }
        }
        report.points_scanned += static_cast<long>(grid.size());

        const auto n_best = std::min<std::size_t>(static_cast<std::size_t>(opts.n_refine), grid.size());
        std::partial_sort(grid.begin(), grid.begin() + static_cast<long>(n_best), grid.end(),
                          [](const GridPoint& a, const GridPoint& b) { return a.residual < b.residual; });

        const Bounds box{{0.0, -phi_max, -kRatioMax}, {theta_max, phi_max, kRatioMax}};
        for (std::size_t n = 0; n < n_best; ++n) {
            auto objective = [order](const std::vector<double>& x) {
                const auto [c1, c2] = two_pulse_leakage_coeffs(order, x[0], x[1], x[2], g);
                return c1 * c1 + c2 * c2;
            };
            NelderMeadOptions nm;
            nm.max_evals = 2000;
            nm.ftol = 1e-30;
            nm.xtol = 1e-14;
            const auto local = nelder_mead(objective, {grid[n].theta, grid[n].phi, grid[n].eps}, box, nm);
            const auto& x = local.x;
            const auto [c1, c2] = two_pulse_leakage_coeffs(order, x[0], x[1], x[2], g);
            NogoCandidate c{order, x[0], x[1], x[2], g, c1, c2, std::max(std::abs(c1), std::abs(c2)),
                            false, false};
            c.is_zero = c.min_abs < opts.zero_tol;
            c.is_null = is_null_rotation(c.theta, c.phi, c.eps_q, c.g, opts.null_tol);
            if (c.is_zero && !c.is_null) ++report.viable_zeros;
            report.candidates.push_back(c);
        }
    }
    return report;
}

}  // namespace cqleak
