#pragma once

// Frozen output of tests/oracles/compute_oracles.py (mpmath, 40 digits,
// integrands evaluated at 400 digits). Regenerate by running the script.
namespace hh::oracle {

inline constexpr double kMuIntegralN1 = 0.2628844198707539643357773;
inline constexpr double kMuIntegralN2 = 0.183276717630312300016127;
inline constexpr double kKoranyiUpperN1 = 0.7982750382205193249393211;
inline constexpr double kKoranyiUpperN2 = 3.547535825867975838280327;
inline constexpr double kKoranyiUpperN3 = 8.295603332000012918356054;
inline constexpr double kPhiAt1em6 = 11999999.9999996;
inline constexpr double kPhiAt2piMinus1em3 = 0.0000003183098596664111379272853;
// Weighted perp quotient of chi * (r w mu)^gamma, cutoff width 0.1 * (2pi - rho).
inline constexpr double kSharpnessN1RhoHalfPiGamma0 = 8.179243097412068344057051;
inline constexpr double kSharpnessN1RhoHalfPiGammaM0p25 = 4.233977771431695368499328;
inline constexpr double kSharpnessN2RhoPiGammaM0p25 = 6.492737099279762121560265;

}  // namespace hh::oracle
