#pragma once

// Upper half-plane geometry: points, unit tangent vectors, PSL2(R) acting by
// fractional linear transformations, and the geodesic flow.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace geovar {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PointH {
    double x = 0.0;
    double y = 1.0;

    std::complex<double> z() const { return {x, y}; }
    static PointH from(std::complex<double> z) { return {z.real(), z.imag()}; }
};

/// Reduces an angle into [0, 2pi).
inline double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

/// A unit tangent vector: base point plus the counter-clockwise angle from
/// the upward vertical.
struct Tangent {
    PointH base;
    double angle = 0.0;
};

/// Element of PSL2(R). Stored with ad - bc = 1 and the first nonzero entry
/// positive, so (a,b,c,d) and (-a,-b,-c,-d) share one representation.
class Isometry {
public:
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    constexpr Isometry() = default;
    Isometry(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        normalize();
    }

    static Isometry identity() { return {}; }
    static Isometry translation(double t) { return {1.0, t, 0.0, 1.0}; }
    static Isometry diagonal(double lambda) { return {lambda, 0.0, 0.0, 1.0 / lambda}; }
    /// K-factor for angle theta; the matrix carries the half angle.
    static Isometry rotation(double theta) {
        const double h = 0.5 * theta;
        return {std::cos(h), std::sin(h), -std::sin(h), std::cos(h)};
    }

    double det() const { return a * d - b * c; }

    Isometry inverse() const { return {d, -b, -c, a}; }

    friend Isometry operator*(const Isometry& g, const Isometry& h) {
        return {g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
    }

    PointH apply(PointH p) const {
        const std::complex<double> z = p.z();
        const std::complex<double> den = c * z + d;
        const double n2 = std::norm(den);
        // Im((az+b)/(cz+d)) = y / |cz+d|^2 for unit determinant.
        const std::complex<double> w = (a * z + b) * std::conj(den) / n2;
        return {w.real(), p.y / n2};
    }

    /// Image of a boundary point; infinity is represented by +inf.
    double apply_boundary(double t) const {
        if (std::isinf(t)) {
            return c == 0.0 ? std::numeric_limits<double>::infinity() : a / c;
        }
        const double den = c * t + d;
        if (den == 0.0) return std::numeric_limits<double>::infinity();
        return (a * t + b) / den;
    }

private:
    void normalize() {
        const double dt = a * d - b * c;
        if (!(dt > 0.0)) throw std::domain_error("Isometry: determinant must be positive");
        const double s = 1.0 / std::sqrt(dt);
        a *= s; b *= s; c *= s; d *= s;
        const double first = a != 0.0 ? a : (b != 0.0 ? b : c);
        if (first < 0.0) { a = -a; b = -b; c = -c; d = -d; }
    }
};

inline PointH mobius_apply(const Isometry& g, PointH z) { return g.apply(z); }

/// u(z,w) = |z-w|^2 / (4 Im z Im w) = sinh^2(dist/2).
inline double u_invariant(PointH z, PointH w) {
    const double dx = z.x - w.x;
    const double dy = z.y - w.y;
    return (dx * dx + dy * dy) / (4.0 * z.y * w.y);
}

/// Hyperbolic distance. Evaluated as 2 asinh(sqrt(u)), which agrees with the
/// log((|z-conj w|+|z-w|)/(|z-conj w|-|z-w|)) form and stays accurate for
/// nearby points.
inline double dist(PointH z, PointH w) { return 2.0 * std::asinh(std::sqrt(u_invariant(z, w))); }

/// Distance through the logarithmic formula. Kept for cross-checks.
inline double dist_log_form(PointH z, PointH w) {
    const double num = std::abs(z.z() - std::conj(w.z()));
    const double den = std::abs(z.z() - w.z());
    return std::log((num + den) / (num - den));
}

/// NAK coordinates: n(x) a(y) k(theta).
inline Isometry tangent_to_isometry(const Tangent& t) {
    const double sy = std::sqrt(t.base.y);
    const double h = 0.5 * t.angle;
    const double ch = std::cos(h), sh = std::sin(h);
    // [1 x; 0 1] [sy 0; 0 1/sy] [ch sh; -sh ch]
    const double a = sy * ch - t.base.x * sh / sy;
    const double b = sy * sh + t.base.x * ch / sy;
    const double c = -sh / sy;
    const double d = ch / sy;
    return {a, b, c, d};
}

inline Tangent isometry_to_tangent(const Isometry& g) {
    Tangent t;
    t.base = g.apply(PointH{0.0, 1.0});
    // Derivative at i is 1/(ci+d)^2, which rotates the upward vector by
    // -2 arg(ci+d).
    t.angle = wrap_angle(-2.0 * std::atan2(g.c, g.d));
    return t;
}

/// Left action of an isometry on the unit tangent bundle.
inline Tangent act(const Isometry& g, const Tangent& t) {
    return isometry_to_tangent(g * tangent_to_isometry(t));
}

/// Right multiplication by diag(e^{s/2}, e^{-s/2}).
inline Isometry flow_isometry(const Isometry& g, double s) {
    return g * Isometry::diagonal(std::exp(0.5 * s));
}

inline Tangent geodesic_flow(const Tangent& t, double s) {
    return isometry_to_tangent(flow_isometry(tangent_to_isometry(t), s));
}

/// A complete geodesic given by its boundary endpoints; +/-inf stands for the
/// point at infinity. Flow runs from endpoint_minus to endpoint_plus.
struct GeodesicLine {
    double endpoint_minus = 0.0;
    double endpoint_plus = std::numeric_limits<double>::infinity();
};

/// Isometry sending endpoint_minus to 0 and endpoint_plus to infinity.
inline Isometry axis_frame(const GeodesicLine& line) {
    const double m = line.endpoint_minus;
    const double p = line.endpoint_plus;
    const bool m_inf = std::isinf(m);
    const bool p_inf = std::isinf(p);
    if ((m_inf && p_inf) || (!m_inf && !p_inf && m == p) || std::isnan(m) || std::isnan(p)) {
        throw std::invalid_argument("axis_frame: degenerate geodesic endpoints");
    }
    if (p_inf) return Isometry::translation(-m);
    if (m_inf) return {0.0, 1.0, -1.0, p};  // z -> 1/(p - z)
    if (m < p) return {1.0, -m, -1.0, p};   // z -> (z - m)/(p - z)
    return {1.0, -m, 1.0, -p};              // z -> (z - m)/(z - p)
}

struct FootOffset {
    double s;  // arc-length coordinate of the nearest axis point (0, e^s)
    double d;  // distance to the vertical axis
};

/// Position of z relative to the vertical geodesic (0, inf).
inline FootOffset foot_and_offset(PointH z) {
    return {0.5 * std::log(z.x * z.x + z.y * z.y), std::asinh(std::abs(z.x) / z.y)};
}

}  // namespace geovar
