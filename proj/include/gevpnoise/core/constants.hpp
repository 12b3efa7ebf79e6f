#pragma once

#include <string_view>

namespace gevpnoise {

inline constexpr std::string_view kVersion = "0.1.0";

namespace units {
// 1 Å in Bohr.
inline constexpr double kAngstromToBohr = 1.8897259886;
inline constexpr double kHartreeToEv = 27.211386;
}  // namespace units

namespace tol {
// Pauli terms with |c| below this are dropped.
inline constexpr double kPrune = 1e-12;
inline constexpr double kHermitian = 1e-10;
// Overlap eigenvalues at or below this are treated as singular when no threshold is set.
inline constexpr double kPositiveDefinite = 1e-12;
// Condition numbers with sigma_min below this are reported as infinite.
inline constexpr double kSingularValueFloor = 1e-30;
}  // namespace tol

}  // namespace gevpnoise
