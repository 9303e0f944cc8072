#pragma once

// Every comparison tolerance used by the library lives here.

namespace cfq::tol {

/// Algebraic identities that hold exactly in real arithmetic.
inline constexpr double algebraic = 1e-12;
/// Spectral checks: idempotence, unitarity, eigenvalue signs, completeness.
inline constexpr double spectral = 1e-10;
/// Normalization of pure states.
inline constexpr double norm = 1e-12;
/// Below this norm a vector is treated as zero.
inline constexpr double zero_vector = 1e-14;
/// Raw probabilities outside [0,1] by more than this raise the warning flag.
inline constexpr double probability_warning = 1e-10;
/// Strict inequalities (gain condition, guess verdicts) need to clear this band.
inline constexpr double tie_band = 1e-12;
/// Most negative eigenvalue accepted for a density matrix.
inline constexpr double psd = 1e-10;
/// Slack allowed on upper bounds checked against numerically found values.
inline constexpr double bound_slack = 1e-9;
/// Bound saturation flag for the optimizer.
inline constexpr double saturation = 1e-9;

}  // namespace cfq::tol
