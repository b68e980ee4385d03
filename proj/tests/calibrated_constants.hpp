#pragma once

// Written by the calibrate tool (seed 1001, 1000 instances per suite).
// Upper constants carry a factor 1.25, lower constants 0.80.

namespace geovar::calibrated {

// count_lattice <= C (sqrt(delta(delta+1)) Im w + 1): measured 10.1065
inline constexpr double kDensityC = 12.63;

// min_spacing >= c min(rho(w,i), rho(w,j), rho(w,j'), 1/Im w): measured 0.985303
inline constexpr double kMinSpacingC = 0.7882;

// Theta <= C1 (R-r) log(2R/(R-r)) for D < 2R: measured 9.06465
inline constexpr double kThetaC1 = 11.33;

// Theta <= C2 R(R-r)/D for 2R <= D < 1: measured 6.33478
inline constexpr double kThetaC2 = 7.918;

// Theta <= C3 R(R-r) e^-D for D >= 1: measured 13.8535
inline constexpr double kThetaC3 = 17.32;

// e Theta(D=3) / Theta(D=2), lower: measured 0.983667
inline constexpr double kThetaDecayLo = 0.7869;

// e Theta(D=3) / Theta(D=2), upper: measured 0.984124
inline constexpr double kThetaDecayHi = 1.23;

// |correlation| <= C (|t|+1) e^{-|t|/2} |phi| |psi| + allowance for Monte Carlo error, C >= 1 at t = 0: measured 0.53394
inline constexpr double kMixingC = 1.25;

// G(w) >= kappa (1-w)^2 log(2/(1-w)) on [0, 1): measured 1.03423
inline constexpr double kGKappa = 0.8274;

// |h| <= C R^2 for |t| <= 1/R: measured 3.14375
inline constexpr double kShcSmallC = 3.93;

// |h - asymptotic| <= C R^4 for |t| <= 1/R: measured 0.163665
inline constexpr double kShcErrSmallC = 0.2046;

// |h| <= C sqrt(R)/|t|^{3/2} for |t| >= 1/R: measured 8.42122
inline constexpr double kShcLargeC = 10.53;

// |h - asymptotic| <= C R^{7/2}/sqrt|t| for |t| >= 1/R: measured 0.143042
inline constexpr double kShcErrLargeC = 0.1788;

// |P - sqrt(rho/sinh rho) J0(rho t)| <= C rho^2 for rho t <= 1: measured 0.0208332
inline constexpr double kHilbC = 0.02604;

}  // namespace geovar::calibrated
