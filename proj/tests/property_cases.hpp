#pragma once

// Randomized instances for the calibrated property suites. The calibration
// tool and the tests share these generators but use different seeds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "geovar/geovar.hpp"

namespace geovar::cases {

inline constexpr std::uint64_t kCalibrationSeed = 1001;
inline constexpr std::uint64_t kTestSeed = 2024;
inline constexpr std::size_t kInstances = 1000;

/// Point at hyperbolic distance D from z in direction theta.
inline PointH point_at(PointH z, double theta, double D) {
    return geodesic_flow(Tangent{z, theta}, D).base;
}

// ---------------------------------------------------------------------------
// Density of lattice points

struct DensityCase {
    PointH z, w;
    double delta;
};

inline DensityCase density_case(std::uint64_t seed, std::size_t i) {
    SampleRng rng(seed, i);
    const PointH z = sample_point_F(20.0, rng);
    const PointH w = sample_point_F(20.0, rng);
    return {z, w, 4.0 * rng.uniform()};
}

inline double density_ratio(const DensityCase& c) {
    const double n = static_cast<double>(count_lattice(c.z, c.w, c.delta));
    return n / (std::sqrt(c.delta * (c.delta + 1.0)) * c.w.y + 1.0);
}

// ---------------------------------------------------------------------------
// Minimum spacing

inline PointH spacing_case(std::uint64_t seed, std::size_t i) {
    SampleRng rng(seed, i);
    return sample_point_F(20.0, rng);
}

inline double spacing_scale(PointH w) {
    const double y0 = std::numbers::sqrt3 / 2.0;
    return std::min({dist(w, PointH{0.0, 1.0}), dist(w, PointH{0.5, y0}), dist(w, PointH{-0.5, y0}), 1.0 / w.y});
}

/// min_spacing(w) / scale(w); infinite when the scale vanishes.
inline double spacing_ratio(PointH w) {
    const double s = spacing_scale(w);
    return s > 0.0 ? min_spacing(w) / s : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Theta regimes: 0 for D < 2R, 1 for 2R <= D < 1, 2 for D >= 1

struct ThetaCase {
    PointH z, w;
    AnnulusSpec ann;
    double D;
};

inline ThetaCase theta_case(int regime, std::uint64_t seed, std::size_t i) {
    SampleRng rng(seed + 7919 * static_cast<std::uint64_t>(regime), i);
    const double R = std::lerp(0.005, 0.2, rng.uniform());
    const double r = R * (rng.uniform() < 0.3 ? 0.0 : std::lerp(0.0, 0.95, rng.uniform()));
    double D = 0.0;
    if (regime == 0) D = 2.0 * R * rng.uniform();
    else if (regime == 1) D = std::lerp(2.0 * R, 1.0, rng.uniform());
    else D = std::lerp(1.0, 6.0, rng.uniform());
    const PointH z = sample_point_F(5.0, rng);
    const PointH w = point_at(z, kTwoPi * rng.uniform(), D);
    return {z, w, AnnulusSpec(r, R), D};
}

inline double theta_envelope(int regime, const ThetaCase& c) {
    const double R = c.ann.R, gap = c.ann.R - c.ann.r;
    if (regime == 0) return gap * std::log(2.0 * R / gap);
    if (regime == 1) return R * gap / c.D;
    return R * gap * std::exp(-c.D);
}

inline double theta_ratio(int regime, const ThetaCase& c) {
    return theta_average(c.z, c.w, c.ann) / theta_envelope(regime, c);
}

/// Theta at distance 3 over Theta at distance 2 (same annulus), times e.
inline double theta_decay_ratio(const AnnulusSpec& ann) {
    const PointH z{0.0, 1.0};
    return std::numbers::e * theta_average(z, PointH{0.0, std::exp(3.0)}, ann) /
           theta_average(z, PointH{0.0, std::exp(2.0)}, ann);
}

// ---------------------------------------------------------------------------
// Mixing

struct MixingCase {
    BallObservable phi, psi;
    double t;
};

inline constexpr std::size_t kMixingSamples = 2000;

inline MixingCase mixing_case(std::uint64_t seed, std::size_t i) {
    SampleRng rng(seed + 31, i);
    const double rp = std::lerp(0.1, 0.5, rng.uniform());
    const double rq = std::lerp(0.1, 0.5, rng.uniform());
    const PointH cp = sample_point_F(3.0, rng);
    const PointH cq = rng.uniform() < 0.3 ? cp : sample_point_F(3.0, rng);
    return {{cp, rp}, {cq, rq}, std::lerp(0.0, 10.0, rng.uniform())};
}

inline MixingEstimate run_mixing(const MixingCase& c, std::uint64_t seed, std::size_t i) {
    return mixing_correlation(c.phi, c.psi, c.t, kMixingSamples, seed * 1000003 + i);
}

/// Part of |correlation| not explained by three standard errors, per unit envelope.
inline double mixing_ratio(const MixingEstimate& m) {
    const double excess = std::max(0.0, std::abs(m.correlation.mean) - 3.0 * m.correlation.std_error);
    return m.envelope > 0.0 ? excess / m.envelope : 0.0;
}

// ---------------------------------------------------------------------------
// Special-function envelopes

struct ShcCase {
    AnnulusSpec ann;
    double t;
};

/// large = false: |t| <= 1/R; large = true: 1/R <= |t| <= 50/R.
inline ShcCase shc_case(bool large, std::uint64_t seed, std::size_t i) {
    SampleRng rng(seed + (large ? 53 : 59), i);
    const double R = std::lerp(0.005, 0.2, rng.uniform());
    const double r = R * std::lerp(0.0, 0.5, rng.uniform());
    const double t = large ? std::exp(std::lerp(std::log(1.0 / R), std::log(50.0 / R), rng.uniform()))
                           : rng.uniform() / R;
    return {AnnulusSpec(r, R), t};
}

/// |h| over R^2 (small t) or over sqrt(R)/t^{3/2} (large t).
inline double shc_size_ratio(bool large, const ShcCase& c, double h) {
    const double R = c.ann.R;
    return std::abs(h) / (large ? std::sqrt(R) / std::pow(c.t, 1.5) : R * R);
}

/// |numeric - asymptotic| over R^4 (small t) or over R^{7/2}/sqrt(t) (large t).
inline double shc_error_ratio(bool large, const ShcCase& c, double h) {
    const double R = c.ann.R;
    const double err = std::abs(h - shc_asymptotic(c.ann, c.t));
    return err / (large ? std::pow(R, 3.5) / std::sqrt(c.t) : std::pow(R, 4.0));
}

/// |P - sqrt(rho/sinh rho) J0(rho t)| / rho^2 for rho t <= 1.
inline double hilb_ratio(double rho, double t) {
    const double approx = std::sqrt(rho / std::sinh(rho)) * bessel_J(0, rho * t);
    return std::abs(legendre_conical(t, rho) - approx) / (rho * rho);
}

/// G(w) / ((1-w)^2 log(2/(1-w))).
inline double g_bound_ratio(double w) {
    const double q = 1.0 - w;
    return G_value(w) / (q * q * std::log(2.0 / q));
}

}  // namespace geovar::cases
