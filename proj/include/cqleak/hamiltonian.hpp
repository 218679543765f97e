#pragma once

// Three-level model Hamiltonian of a qubit with one leakage level, and the
// charge-quadrupole (triple-dot) Hamiltonian it is derived from.

#include "cqleak/types.hpp"

#include <array>
#include <vector>

namespace cqleak {

// Control/noise parameters of the {C,E,L} model. All energies in GHz.
struct ModelParams {
    double eps_q = 0.0;  // quadrupolar detuning
    double g = 0.0;      // tunnel-coupling control, g >= 0
    double xi = 0.0;     // E-L coupling (the dipolar fluctuation)
    double zeta = 1.0;   // scaled leakage-level energy
};

// Localized-basis parameters of the triple-dot device.
struct CqLocalizedParams {
    double U1 = 0.0, U2 = 0.0, U3 = 0.0;  // on-site potentials
    double tA = 0.0, tB = 0.0;            // tunnel couplings

    double eps_d() const { return 0.5 * (U1 - U3); }
    double eps_q() const { return U2 - 0.5 * (U1 + U3); }
};

/// H = H_z + H_x + H_leak in the {C,E,L} basis.
/// Throws std::invalid_argument for g < 0.
Hamiltonian3 build_model(const ModelParams& p);

/// Throws std::invalid_argument unless p.zeta == 1. Sequence builders only
/// support the CQ case.
void require_unit_zeta(const ModelParams& p);

/// Localized-basis Hamiltonian in {|100>,|010>,|001>}, identity shift included.
Hamiltonian3 build_cq_localized(const CqLocalizedParams& p);

/// Change of basis from localized to {C,E,L}. The identity offset is removed
/// so that the E and L diagonal entries sit at minus the C entry, which is
/// the form of build_model.
Hamiltonian3 to_cel_basis(const Hamiltonian3& h_localized);

/// Columns are |C>, |E>, |L> expressed in the localized basis.
Eigen::Matrix3d cel_basis_vectors();

bool is_hermitian(const Eigen::Matrix3cd& h, double tol = 1e-14);

enum class SweepAxis { EpsQ, G };

struct LevelRow {
    double param;
    std::array<double, 3> energies;  // ascending
};

/// Eigenvalues of build_model while sweeping one control over [lo, hi].
/// Throws std::invalid_argument when n < 2 or lo >= hi.
std::vector<LevelRow> eigenvalue_sweep(SweepAxis axis, double lo, double hi, int n,
                                       const ModelParams& fixed);

}  // namespace cqleak
