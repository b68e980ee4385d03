#pragma once

// Seeded Monte Carlo estimators: the truncated variance for random geodesic
// segments, the variance and mean for the closed geodesics of discriminant D,
// and correlations of ball indicators under the geodesic flow.
//
// Every sample i draws from its own generator keyed by (seed, i), and
// per-sample values are reduced in index order, so results do not depend on
// the number of worker threads.

#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "geovar/closed_geodesics.hpp"
#include "geovar/hyperbolic.hpp"
#include "geovar/intersections.hpp"
#include "geovar/modular.hpp"
#include "geovar/quadratic_forms.hpp"
#include "geovar/special_functions.hpp"

namespace geovar {

/// Stream for one sample: std::mt19937_64 keyed through std::seed_seq by the
/// 32-bit halves of (seed, index). Uniforms come from the top 53 bits, so
/// the draws are the same on every standard library.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

inline constexpr double kInfiniteHeight = std::numeric_limits<double>::infinity();

/// mu-uniform point of F_A (A = inf allowed): x uniform, y from the density
/// 1/y^2 on [sqrt3/2, A] by inversion, rejected below the unit circle.
inline PointH sample_point_F(double A, SampleRng& rng) {
    if (!(A >= 1.0)) throw std::invalid_argument("sample_point_F: need A >= 1");
    constexpr double y0 = std::numbers::sqrt3 / 2.0;
    const double inv_top = std::isinf(A) ? 0.0 : 1.0 / A;
    for (;;) {
        const double x = rng.uniform() - 0.5;
        const double y = 1.0 / (1.0 / y0 - rng.uniform() * (1.0 / y0 - inv_top));
        if (x * x + y * y >= 1.0) return {x, y};
    }
}

/// Liouville-uniform unit tangent vector over F.
inline Tangent sample_tangent(SampleRng& rng) {
    const PointH base = sample_point_F(kInfiniteHeight, rng);
    return {base, kTwoPi * rng.uniform()};
}

struct ExperimentConfig {
    AnnulusSpec ann{0.0, 0.01};
    double L = 50.0;
    std::int64_t D = 0;  // closed-geodesic runs only
    double A = 10.0;
    std::size_t n_samples = 1000;
    std::uint64_t seed = 42;
    unsigned workers = 1;
    double step = kDefaultStep;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double prediction = 0.0;
    double z_score = 0.0;
    std::vector<std::string> warnings;
};

/// Calls fn(i) for i < n on `workers` threads, each owning one contiguous
/// chunk, and returns the values by index.
template <class Fn>
std::vector<double> parallel_samples(std::size_t n, unsigned workers, Fn&& fn) {
    std::vector<double> out(n);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, n))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
        threads.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

/// Mean and standard error of the mean, two passes in index order.
inline Estimate summarize(const std::vector<double>& values, double prediction, std::uint64_t seed) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("summarize: need at least two samples");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    Estimate e;
    e.mean = mean;
    e.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    e.n = n;
    e.seed = seed;
    e.prediction = prediction;
    e.z_score = e.std_error > 0.0 ? (mean - prediction) / e.std_error : 0.0;
    return e;
}

// ---------------------------------------------------------------------------
// Random segments

/// 16 L R^3 / pi * G(r/R).
inline double random_segment_prediction(const AnnulusSpec& ann, double L) {
    return 16.0 * L * ann.R * ann.R * ann.R / std::numbers::pi * G_value(ann.r / ann.R);
}

/// (12 L R (R - r)^2 / pi) log(1 / (R - r)), the thin-annulus form.
inline double thin_annulus_prediction(const AnnulusSpec& ann, double L) {
    const double gap = ann.R - ann.r;
    return 12.0 * L * ann.R * gap * gap / std::numbers::pi * std::log(1.0 / gap);
}

/// log A * R * log(1/(R - r)); the asymptotic regime needs this small.
inline double truncation_regime_parameter(const AnnulusSpec& ann, double A) {
    return std::log(A) * ann.R * std::log(1.0 / (ann.R - ann.r));
}

inline constexpr double kRegimeWarnLevel = 0.1;

inline void validate_random(const ExperimentConfig& cfg) {
    if (!(cfg.L >= 1.0)) throw std::invalid_argument("var_random: need L >= 1");
    if (!(cfg.ann.R <= 0.2)) throw std::invalid_argument("var_random: need R <= 0.2");
    if (!(cfg.A >= 1.0)) throw std::invalid_argument("var_random: need A >= 1");
    if (cfg.n_samples < 2) throw std::invalid_argument("var_random: need n >= 2");
}

/// Per-sample time spent by a random segment in the annulus around a random
/// centre of F_A; sample i uses the stream (seed, i).
inline std::vector<double> random_segment_lengths(const ExperimentConfig& cfg) {
    validate_random(cfg);
    return parallel_samples(cfg.n_samples, cfg.workers, [&](std::size_t i) {
        SampleRng rng(cfg.seed, i);
        const Tangent g = sample_tangent(rng);
        const PointH w = sample_point_F(cfg.A, rng);
        return walk_segment(g, cfg.L, w, cfg.ann, cfg.step);
    });
}

/// L mu(A_{r,R}) / mu(F).
inline double random_segment_centering(const AnnulusSpec& ann, double L) { return L * ann.volume() / kAreaF; }

inline Estimate var_random_from_lengths(const ExperimentConfig& cfg, const std::vector<double>& lengths) {
    const double centre = random_segment_centering(cfg.ann, cfg.L);
    std::vector<double> sq(lengths.size());
    for (std::size_t i = 0; i < lengths.size(); ++i) sq[i] = (lengths[i] - centre) * (lengths[i] - centre);
    Estimate e = summarize(sq, random_segment_prediction(cfg.ann, cfg.L), cfg.seed);
    const double regime = truncation_regime_parameter(cfg.ann, cfg.A);
    if (regime > kRegimeWarnLevel) {
        e.warnings.push_back("log A * R * log(1/(R-r)) = " + std::to_string(regime) +
                             " exceeds " + std::to_string(kRegimeWarnLevel) +
                             "; the truncation is outside the asymptotic regime");
    }
    return e;
}

/// E[F^2] with F = (time in the annulus) - L mu(A_{r,R}) / mu(F).
inline Estimate var_random(const ExperimentConfig& cfg) {
    return var_random_from_lengths(cfg, random_segment_lengths(cfg));
}

// ---------------------------------------------------------------------------
// Closed geodesics

/// 64 sqrt(D) L(1, chi_D) R^3 / pi * G(r/R).
inline double closed_geodesic_conjecture(const Discriminant& disc, const AnnulusSpec& ann) {
    return 64.0 * disc.sqrt() * dirichlet_L1(disc) * ann.R * ann.R * ann.R / std::numbers::pi *
           G_value(ann.r / ann.R);
}

/// mu(A_{r,R}) / mu(X) * sum_C l(C).
inline double closed_geodesic_mean(const ClosedGeodesicSet& set, const AnnulusSpec& ann) {
    return ann.volume() / kAreaF * set.total_length();
}

/// Per-sample sum over C in Lambda_D of l(C cap A_{r,R}(w)), w uniform on X.
inline std::vector<double> closed_geodesic_lengths(const ClosedGeodesicSet& set, const AnnulusSpec& ann,
                                                   std::size_t n, std::uint64_t seed, unsigned workers) {
    if (n < 2) throw std::invalid_argument("closed geodesic run: need n >= 2");
    return parallel_samples(n, workers, [&](std::size_t i) {
        SampleRng rng(seed, i);
        const PointH w = sample_point_F(kInfiniteHeight, rng);
        double total = 0.0;
        for (const Trajectory& tr : set.trajectories) total += walk_trajectory(tr, w, ann);
        return total;
    });
}

inline void validate_closed(const ExperimentConfig& cfg) {
    const Discriminant disc(cfg.D);
    if (!(cfg.A >= disc.sqrt() / 2.0)) {
        throw std::invalid_argument("closed geodesic run: need A >= sqrt(D)/2");
    }
    if (cfg.n_samples < 2) throw std::invalid_argument("closed geodesic run: need n >= 2");
}

/// Mean of (sum_C l(C cap A(w)) - mu(A)/mu(X) sum_C l(C))^2 over w in X, with
/// the conjectured asymptotic as the reported prediction. The conjecture
/// concerns D -> infinity and is not tested here.
inline Estimate var_closed(const ExperimentConfig& cfg, const ClosedGeodesicSet& set) {
    validate_closed(cfg);
    const std::vector<double> lengths = closed_geodesic_lengths(set, cfg.ann, cfg.n_samples, cfg.seed, cfg.workers);
    const double centre = closed_geodesic_mean(set, cfg.ann);
    std::vector<double> sq(lengths.size());
    for (std::size_t i = 0; i < lengths.size(); ++i) sq[i] = (lengths[i] - centre) * (lengths[i] - centre);
    Estimate e = summarize(sq, closed_geodesic_conjecture(Discriminant(set.D), cfg.ann), cfg.seed);
    if (!Discriminant(set.D).squarefree()) e.warnings.push_back("D is not squarefree");
    return e;
}

inline Estimate var_closed(const ExperimentConfig& cfg) {
    return var_closed(cfg, build_closed_geodesics(Discriminant(cfg.D), cfg.step));
}

/// MC mean of sum_C l(C cap A(w)) against its exact value.
inline Estimate expectation_check(const ClosedGeodesicSet& set, const AnnulusSpec& ann, std::size_t n,
                                  std::uint64_t seed, unsigned workers = 1) {
    const std::vector<double> lengths = closed_geodesic_lengths(set, ann, n, seed, workers);
    return summarize(lengths, closed_geodesic_mean(set, ann), seed);
}

inline Estimate expectation_check(const Discriminant& disc, const AnnulusSpec& ann, std::size_t n,
                                  std::uint64_t seed, unsigned workers = 1) {
    return expectation_check(build_closed_geodesics(disc), ann, n, seed, workers);
}

// ---------------------------------------------------------------------------
// Mixing

struct BallObservable {
    PointH center;
    double radius = 0.1;

    /// mu(B) / mu(X).
    double mean() const { return AnnulusSpec(0.0, radius).volume() / kAreaF; }
    /// Centered indicator of the ball on X.
    double operator()(PointH z) const {
        return static_cast<double>(kernel_value(z, center, AnnulusSpec(0.0, radius))) - mean();
    }
};

struct MixingEstimate {
    Estimate correlation;
    double norm_phi = 0.0;  // L^2 norms for the normalized measure, estimated
    double norm_psi = 0.0;
    double envelope = 0.0;  // (|t| + 1) e^{-|t|/2} |phi| |psi|
};

inline double mixing_envelope(double t, double norm_phi, double norm_psi) {
    return (std::abs(t) + 1.0) * std::exp(-0.5 * std::abs(t)) * norm_phi * norm_psi;
}

/// Base point of the flow by t from the base of g, reducing the frame after
/// every unit of time.
inline PointH flowed_base(const Tangent& g, double t) {
    Isometry m = reduce_frame(tangent_to_isometry(g));
    const int steps = static_cast<int>(std::ceil(std::abs(t)));
    const double h = steps > 0 ? t / steps : 0.0;
    for (int k = 0; k < steps; ++k) m = reduce_frame(flow_isometry(m, h));
    return reduce_point(m.apply(PointH{0.0, 1.0})).point;
}

/// int phi(pi(g)) psi(pi(flow_t g)) d nu / nu(T^1 X).
inline MixingEstimate mixing_correlation(const BallObservable& phi, const BallObservable& psi, double t,
                                         std::size_t n, std::uint64_t seed, unsigned workers = 1) {
    if (n < 2) throw std::invalid_argument("mixing_correlation: need n >= 2");
    std::vector<double> a(n), b(n);
    const std::vector<double> prod = parallel_samples(n, workers, [&](std::size_t i) {
        SampleRng rng(seed, i);
        const Tangent g = sample_tangent(rng);
        a[i] = phi(g.base);
        b[i] = psi(flowed_base(g, t));
        return a[i] * b[i];
    });
    MixingEstimate out;
    out.correlation = summarize(prod, 0.0, seed);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sa += a[i] * a[i];
        sb += b[i] * b[i];
    }
    out.norm_phi = std::sqrt(sa / static_cast<double>(n));
    out.norm_psi = std::sqrt(sb / static_cast<double>(n));
    out.envelope = mixing_envelope(t, out.norm_phi, out.norm_psi);
    return out;
}

}  // namespace geovar
