#include "cqleak/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace cqleak {

Hamiltonian3 build_model(const ModelParams& p) {
    if (p.g < 0.0) {
        throw std::invalid_argument("build_model: tunnel coupling g must be non-negative");
    }
    Hamiltonian3 h = Hamiltonian3::Zero();
    h(0, 0) = 0.5 * p.eps_q;
    h(1, 1) = -0.5 * p.eps_q;
    h(2, 2) = -0.5 * p.zeta * p.eps_q;
    h(0, 1) = h(1, 0) = p.g;
    h(1, 2) = h(2, 1) = p.xi;
    return h;
}

void require_unit_zeta(const ModelParams& p) {
    if (p.zeta != 1.0) {
        throw std::invalid_argument("only zeta = 1 is supported by the pulse sequences");
    }
}

Hamiltonian3 build_cq_localized(const CqLocalizedParams& p) {
    const double eps_d = p.eps_d();
    const double eps_q = p.eps_q();
    Hamiltonian3 h = Hamiltonian3::Zero();
    h(0, 0) = eps_d;
    h(1, 1) = eps_q;
    h(2, 2) = -eps_d;
    h(0, 1) = h(1, 0) = p.tA;
    h(1, 2) = h(2, 1) = p.tB;
    h += Hamiltonian3::Identity() * (0.5 * (p.U1 + p.U3));
    return h;
}

Eigen::Matrix3d cel_basis_vectors() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3d v;
    // clang-format off
    v << 0.0,  r,  r,
         1.0, 0.0, 0.0,
         0.0,  r, -r;
    // clang-format on
    return v;
}

Hamiltonian3 to_cel_basis(const Hamiltonian3& h_localized) {
    const Eigen::Matrix3cd v = cel_basis_vectors().cast<cplx>();
    Hamiltonian3 h = v.adjoint() * h_localized * v;
    const double shift = 0.5 * (h(0, 0).real() + 0.5 * (h(1, 1).real() + h(2, 2).real()));
    h -= Hamiltonian3::Identity() * shift;
    return h;
}

bool is_hermitian(const Eigen::Matrix3cd& h, double tol) {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (std::abs(h(i, j) - std::conj(h(j, i))) > tol) return false;
        }
    }
    return true;
}

std::vector<LevelRow> eigenvalue_sweep(SweepAxis axis, double lo, double hi, int n,
                                       const ModelParams& fixed) {
    if (n < 2) throw std::invalid_argument("eigenvalue_sweep: need at least 2 samples");
    if (!(lo < hi)) throw std::invalid_argument("eigenvalue_sweep: invalid range (lo >= hi)");

    std::vector<LevelRow> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
        ModelParams p = fixed;
        if (axis == SweepAxis::EpsQ) {
            p.eps_q = x;
        } else {
            p.g = x;
        }
        // The model is real symmetric; the real solver is exact enough and cheaper.
        const Eigen::Matrix3d h = build_model(p).real();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        rows.push_back({x, {ev(0), ev(1), ev(2)}});
    }
    return rows;
}

}  // namespace cqleak
