#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace cqleak {

using cplx = std::complex<double>;

// Operators on the three-level space, ordered {|C>, |E>, |L>}.
using Hamiltonian3 = Eigen::Matrix3cd;  // entries in GHz (E/h)
using Unitary3 = Eigen::Matrix3cd;      // dimensionless
using State3 = Eigen::Vector3cd;

// Operators on the logical {|C>, |E>} subspace.
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum Level : int { kC = 0, kE = 1, kL = 2 };

}  // namespace cqleak
