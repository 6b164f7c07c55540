// correlations.hpp: intermode first- and second-order correlation functions

#pragma once

#include <array>

#include "kerrchain/states.hpp"

namespace kerrchain {

// Pair order used by every per-pair array: (1,2), (2,3), (1,3).
inline constexpr std::array<std::pair<int, int>, 3> kModePairs{{{1, 2}, {2, 3}, {1, 3}}};

// Mean occupations below this count as an empty mode.
inline constexpr double kEmptyModeThreshold = 1e-12;

struct CorrelationReport {
    std::array<double, 3> g1{};
    std::array<double, 3> g2{};
    std::array<double, 3> occupations{};
};

// |<a_j^dag a_k>| / sqrt(<n_j><n_k>); 0 when either mode is empty.
double g1(const DensityMatrix& rho, int j, int k);
// <a_j^dag a_k^dag a_j a_k> / (<n_j><n_k>); 1 when either mode is empty.
double g2(const DensityMatrix& rho, int j, int k);
double mean_occupation(const DensityMatrix& rho, int mode);

// Same quantities evaluated from amplitudes without forming rho.
double g1(const PureState& psi, int j, int k);
double g2(const PureState& psi, int j, int k);
double mean_occupation(const PureState& psi, int mode);

CorrelationReport correlation_report(const DensityMatrix& rho);
CorrelationReport correlation_report(const PureState& psi);

} // namespace kerrchain
