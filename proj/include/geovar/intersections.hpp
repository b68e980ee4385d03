#pragma once

// Chords of geodesics through hyperbolic annuli, lengths of geodesic
// segments inside the lifted annuli on the modular surface, the angular
// average Theta, and the main-term integral.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "geovar/hyperbolic.hpp"
#include "geovar/modular.hpp"
#include "geovar/special_functions.hpp"

namespace geovar {

/// Half-length of the chord cut from a ball of radius rad by a geodesic at
/// distance d from the centre: cosh l = cosh rad / cosh d.
inline double chord_half_length(double d, double rad) {
    if (!(d < rad)) return 0.0;
    const double sr = std::sinh(rad), sd = std::sinh(d);
    return std::asinh(std::sqrt((sr - sd) * (sr + sd)) / std::cosh(d));
}

struct ChordWindow {
    double s_lo = 0.0;
    double s_hi = 0.0;
    double length() const { return s_hi - s_lo; }
};

/// Zero, one or two windows; fixed capacity so the walker never allocates.
struct ChordWindows {
    ChordWindow items[2];
    int count = 0;

    int size() const { return count; }
    bool empty() const { return count == 0; }
    const ChordWindow& operator[](int i) const { return items[i]; }
    const ChordWindow* begin() const { return items; }
    const ChordWindow* end() const { return items + count; }
    double total_length() const {
        double s = 0.0;
        for (const auto& w : *this) s += w.length();
        return s;
    }
    /// Length of the part inside [lo, hi].
    double clipped_length(double lo, double hi) const {
        double s = 0.0;
        for (const auto& w : *this) {
            const double a = std::max(lo, w.s_lo), b = std::min(hi, w.s_hi);
            if (b > a) s += b - a;
        }
        return s;
    }
};

/// Arc-length windows where a geodesic, at distance d from the annulus centre
/// with foot point at foot_s, lies inside the annulus.
inline ChordWindows annulus_chord(double d, double foot_s, const AnnulusSpec& ann) {
    ChordWindows out;
    const double lR = chord_half_length(d, ann.R);
    if (lR <= 0.0) return out;
    if (d < ann.r) {
        const double lr = chord_half_length(d, ann.r);
        out.items[0] = {foot_s - lR, foot_s - lr};
        out.items[1] = {foot_s + lr, foot_s + lR};
        out.count = 2;
    } else {
        out.items[0] = {foot_s - lR, foot_s + lR};
        out.count = 1;
    }
    return out;
}

/// A geodesic segment: frame^{-1}(0, e^s) for s in [s_start, s_end].
struct SegmentFrame {
    Isometry frame;
    double s_start = 0.0;
    double s_end = 1.0;
};

/// Slack added to the enumeration radius around the window midpoint.
inline constexpr double kWindowSlack = 0.1;

/// Sum over translates gamma w of the length of the segment inside
/// A_{r,R}(gamma w). w must already be reduced.
inline double segment_annulus_length_reduced(const SegmentFrame& seg, PointH w, const AnnulusSpec& ann) {
    const double half = 0.5 * (seg.s_end - seg.s_start);
    const Isometry back = seg.frame.inverse();
    const PointH mid = back.apply(PointH{0.0, std::exp(seg.s_start + half)});
    double total = 0.0;
    for_each_translate(mid, w, half + ann.R + kWindowSlack,
                       [&](std::int64_t, std::int64_t, std::int64_t, std::int64_t, PointH img, double) {
                           const FootOffset fo = foot_and_offset(seg.frame.apply(img));
                           if (fo.d >= ann.R) return;
                           total += annulus_chord(fo.d, fo.s, ann).clipped_length(seg.s_start, seg.s_end);
                       });
    return total;
}

inline double segment_annulus_length(const SegmentFrame& seg, PointH w, const AnnulusSpec& ann) {
    if (!(seg.s_end > seg.s_start)) throw std::invalid_argument("segment_annulus_length: need s_start < s_end");
    return segment_annulus_length_reduced(seg, reduce_point(w).point, ann);
}

inline constexpr double kDefaultStep = 0.5;

/// A piecewise geodesic path cut into short windows; window k is
/// frames[k]^{-1}(0, e^s), s in [0, deltas[k]], with its base point reduced
/// into F.
struct Trajectory {
    std::vector<Isometry> frames;
    std::vector<PointH> midpoints;
    std::vector<double> deltas;

    std::size_t size() const { return frames.size(); }
    double length() const {
        double s = 0.0;
        for (double d : deltas) s += d;
        return s;
    }

    /// Appends the geodesic from the base of g of length L, in
    /// ceil(L/step) equal windows, flowing from window to window.
    void append_flow(Isometry g, double L, double step) {
        if (!(L > 0.0)) throw std::invalid_argument("Trajectory: need L > 0");
        if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("Trajectory: need 0 < step <= 1");
        const auto n = static_cast<std::size_t>(std::ceil(L / step - 1e-12));
        const double delta = L / static_cast<double>(n);
        const PointH mid_on_axis{0.0, std::exp(0.5 * delta)};
        for (std::size_t k = 0; k < n; ++k) {
            g = reduce_frame(g);
            frames.push_back(g.inverse());
            midpoints.push_back(g.apply(mid_on_axis));
            deltas.push_back(delta);
            g = flow_isometry(g, delta);
        }
    }
};

inline Trajectory make_trajectory(const Isometry& g, double L, double step = kDefaultStep) {
    Trajectory tr;
    tr.append_flow(g, L, step);
    return tr;
}

inline Trajectory make_trajectory(const Tangent& g0, double L, double step = kDefaultStep) {
    return make_trajectory(tangent_to_isometry(g0), L, step);
}

/// Total time the trajectory spends in the lifted annuli around w (reduced).
inline double walk_trajectory(const Trajectory& tr, PointH w, const AnnulusSpec& ann) {
    double total = 0.0;
    for (std::size_t k = 0; k < tr.frames.size(); ++k) {
        const Isometry& frame = tr.frames[k];
        const double delta = tr.deltas[k];
        for_each_translate(tr.midpoints[k], w, 0.5 * delta + ann.R + kWindowSlack,
                           [&](std::int64_t, std::int64_t, std::int64_t, std::int64_t, PointH img, double) {
                               const FootOffset fo = foot_and_offset(frame.apply(img));
                               if (fo.d >= ann.R) return;
                               total += annulus_chord(fo.d, fo.s, ann).clipped_length(0.0, delta);
                           });
    }
    return total;
}

/// int_0^L sum_gamma 1[r <= dist(flow_t(g0), gamma w) <= R] dt.
inline double walk_segment(const Tangent& g0, double L, PointH w, const AnnulusSpec& ann,
                           double step = kDefaultStep) {
    return walk_trajectory(make_trajectory(g0, L, step), reduce_point(w).point, ann);
}

// ---------------------------------------------------------------------------

/// Theta_{r,R}(z, w) = int_0^{2pi} int_0^inf 1[flow_t(z, theta) in A_{r,R}(w)] dt d theta,
/// for a single centre w (no lattice sum).
inline double theta_average(PointH z, PointH w, const AnnulusSpec& ann) {
    const double D = dist(z, w);
    if (D < 1e-12) return kTwoPi * (ann.R - ann.r);

    auto ray_length = [&](double theta) {
        const Isometry g = tangent_to_isometry(Tangent{z, theta});
        const FootOffset fo = foot_and_offset(g.inverse().apply(w));
        return annulus_chord(fo.d, fo.s, ann).clipped_length(0.0, std::numeric_limits<double>::infinity());
    };

    // Direction of w seen from z: the Cayley image of g_z^{-1} w, with
    // angle 0 pointing up.
    const PointH q0 = tangent_to_isometry(Tangent{z, 0.0}).inverse().apply(w);
    const std::complex<double> c = (q0.z() - std::complex<double>(0.0, 1.0)) /
                                   (q0.z() + std::complex<double>(0.0, 1.0));
    const double theta_w = std::arg(c);

    // Tangency directions, where the chord length has square-root corners.
    std::vector<double> cuts{0.0};
    for (const double rad : {ann.r, ann.R}) {
        if (rad <= 0.0 || rad >= D) continue;
        const double alpha = std::asin(std::min(1.0, std::sinh(rad) / std::sinh(D)));
        cuts.push_back(wrap_angle(alpha));
        cuts.push_back(wrap_angle(-alpha));
    }
    cuts.push_back(std::numbers::pi);
    for (double& c0 : cuts) c0 = wrap_angle(c0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(kTwoPi);

    boost::math::quadrature::tanh_sinh<double> integrator;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-15) continue;
        // Angles are measured relative to theta_w so that the cuts are fixed.
        total += integrator.integrate([&](double phi) { return ray_length(theta_w + phi); }, cuts[i],
                                      cuts[i + 1], 1e-10);
    }
    return total;
}

// ---------------------------------------------------------------------------

/// 8 int_0^{sinh R} (sqrt(sinh^2 R - x^2) - 1{x <= sinh r} sqrt(sinh^2 r - x^2))^2 dx,
/// the main-term integral with the chord lengths replaced by their sinh.
inline double main_term_integral(const AnnulusSpec& ann) {
    const double a = std::sinh(ann.R), b = std::sinh(ann.r);
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double outer = integrator.integrate([&](double x) { return (a - x) * (a + x); }, b, a, 1e-13);
    double inner = 0.0;
    if (b > 0.0) {
        inner = integrator.integrate(
            [&](double x) {
                const double v = std::sqrt((a - x) * (a + x)) - std::sqrt(std::max(0.0, (b - x) * (b + x)));
                return v * v;
            },
            0.0, b, 1e-13);
    }
    return 8.0 * (outer + inner);
}

/// 8 int_0^R (l_R(D) - 1{D <= r} l_r(D))^2 cosh D dD with the exact chord
/// half-lengths l = arccosh(cosh rad / cosh D). Agrees with
/// main_term_integral up to a relative O(R^2).
inline double chord_square_integral(const AnnulusSpec& ann) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto piece = [&](double lo, double hi, bool inner) {
        return integrator.integrate(
            [&](double D) {
                double v = chord_half_length(D, ann.R);
                if (inner) v -= chord_half_length(D, ann.r);
                return v * v * std::cosh(D);
            },
            lo, hi, 1e-13);
    };
    double total = piece(ann.r, ann.R, false);
    if (ann.r > 0.0) total += piece(0.0, ann.r, true);
    return 8.0 * total;
}

/// (16 sinh^3 R / 3) G(sinh r / sinh R).
inline double main_term_closed_form(const AnnulusSpec& ann) {
    const double a = std::sinh(ann.R);
    return 16.0 * a * a * a / 3.0 * G_value(std::sinh(ann.r) / a);
}

}  // namespace geovar
