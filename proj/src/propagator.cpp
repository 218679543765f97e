#include "cqleak/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace cqleak {

namespace {

// exp(-i 2 pi h t) for a real symmetric h.
Unitary3 expm_real_symmetric(const Eigen::Matrix3d& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
    const Eigen::Matrix3d& v = es.eigenvectors();
    Eigen::Vector3cd phases;
    for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -kTwoPi * es.eigenvalues()(k) * t);
    return v.cast<cplx>() * phases.asDiagonal() * v.transpose().cast<cplx>();
}

Eigen::Matrix3d model_real(double eps_q, double g, double xi) {
    Eigen::Matrix3d h;
    // clang-format off
    h << 0.5 * eps_q, g,            0.0,
         g,           -0.5 * eps_q, xi,
         0.0,         xi,           -0.5 * eps_q;
    // clang-format on
    return h;
}

}  // namespace

Unitary3 expm_hermitian(const Hamiltonian3& h, double t) {
    if (!is_hermitian(h, 1e-12)) {
        throw std::invalid_argument("expm_hermitian: generator is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("expm_hermitian: eigensolver failed");
    const Eigen::Matrix3cd& v = es.eigenvectors();
    Eigen::Vector3cd phases;
    for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -kTwoPi * es.eigenvalues()(k) * t);
    return v * phases.asDiagonal() * v.adjoint();
}

Unitary3 bare_uz(double eps_q, const NoiseSample& noise, double phi) {
    if (eps_q == 0.0) throw std::invalid_argument("bare_uz: eps_q must be non-zero");
    if (phi != 0.0 && std::signbit(phi) != std::signbit(eps_q)) {
        throw std::invalid_argument("bare_uz: phi must have the same sign as eps_q");
    }
    const double t = phi / (kTwoPi * eps_q);
    return expm_real_symmetric(model_real(eps_q + noise.d_eps_q, 0.0, noise.d_eps_d), t);
}

Unitary3 bare_ux(double g, const NoiseSample& noise, double theta) {
    if (!(g > 0.0)) throw std::invalid_argument("bare_ux: g must be positive");
    if (!(theta > 0.0)) throw std::invalid_argument("bare_ux: theta must be positive");
    const double t = theta / (2.0 * kTwoPi * g);
    return expm_real_symmetric(model_real(noise.d_eps_q, g, noise.d_eps_d), t);
}

Evolution evolve_schedule(const PulseSchedule& sched, const NoiseSample& noise,
                          const EvolveOptions& opts) {
    if (sched.empty()) throw std::invalid_argument("evolve_schedule: empty schedule");
    if (!(opts.dt > 0.0)) throw std::invalid_argument("evolve_schedule: dt must be positive");

    Evolution out{Unitary3::Identity(), std::nullopt};
    std::vector<TrajectoryPoint> traj;
    if (opts.record) traj.push_back({0.0, opts.psi0});

    const auto bp = sched.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double a = bp[i];
        const double b = bp[i + 1];
        const bool flat = sched.is_flat(a, b);
        long n = static_cast<long>(std::ceil((b - a) / opts.dt - 1e-9));
        if (n < 1 || (flat && !opts.record)) n = 1;
        const double h = (b - a) / static_cast<double>(n);

        if (flat) {
            const auto c = sched.sample(0.5 * (a + b));
            const Unitary3 step =
                expm_real_symmetric(model_real(c.eps_q + noise.d_eps_q, c.g, noise.d_eps_d), h);
            for (long k = 0; k < n; ++k) {
                out.u = step * out.u;
                if (opts.record) traj.push_back({a + h * (k + 1), out.u * opts.psi0});
            }
            continue;
        }
        for (long k = 0; k < n; ++k) {
            const auto c = sched.sample(a + h * (k + 0.5));
            out.u = expm_real_symmetric(model_real(c.eps_q + noise.d_eps_q, c.g, noise.d_eps_d), h) *
                    out.u;
            if (opts.record) traj.push_back({a + h * (k + 1), out.u * opts.psi0});
        }
    }
    if (opts.record) out.trajectory = std::move(traj);
    return out;
}

double unitarity_defect(const Unitary3& u) {
    return (u.adjoint() * u - Unitary3::Identity()).norm();
}

}  // namespace cqleak
