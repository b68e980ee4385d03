#pragma once

// The modular surface PSL2(Z)\H: reduction into the standard fundamental
// domain, exact enumeration of orbit points in a hyperbolic ball, the
// annulus kernel, and lattice point statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "geovar/hyperbolic.hpp"

namespace geovar {

/// Inner radius r and outer radius R of a hyperbolic annulus, 0 <= r < R.
struct AnnulusSpec {
    double r = 0.0;
    double R = 0.1;

    AnnulusSpec() = default;
    AnnulusSpec(double inner, double outer) : r(inner), R(outer) {
        if (!(r >= 0.0 && r < R) || !std::isfinite(R)) {
            throw std::invalid_argument("AnnulusSpec: need 0 <= r < R");
        }
    }

    double u_inner() const { const double s = std::sinh(0.5 * r); return s * s; }
    double u_outer() const { const double s = std::sinh(0.5 * R); return s * s; }
    double volume() const { return 4.0 * std::numbers::pi * (u_outer() - u_inner()); }
};

/// mu(F) for the standard fundamental domain.
inline constexpr double kAreaF = std::numbers::pi / 3.0;

/// Element of PSL2(Z), canonicalized like Isometry (first nonzero entry > 0).
struct ModularElement {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    static ModularElement canonical(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        const std::int64_t first = a != 0 ? a : (b != 0 ? b : c);
        if (first < 0) return {-a, -b, -c, -d};
        return {a, b, c, d};
    }
    static ModularElement identity() { return {}; }
    static ModularElement S() { return canonical(0, -1, 1, 0); }
    static ModularElement T(std::int64_t k = 1) { return {1, k, 0, 1}; }

    friend ModularElement operator*(const ModularElement& g, const ModularElement& h) {
        return canonical(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                         g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
    }
    friend bool operator==(const ModularElement&, const ModularElement&) = default;

    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
    std::int64_t det() const { return a * d - b * c; }
    Isometry to_isometry() const {
        return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
                static_cast<double>(d)};
    }
    PointH apply(PointH p) const { return to_isometry().apply(p); }
};

/// Tolerance on both fundamental-domain inequalities.
inline constexpr double kDomainTol = 1e-9;

inline bool in_F(PointH z, double tol = kDomainTol) {
    return std::abs(z.x) <= 0.5 + tol && z.x * z.x + z.y * z.y >= 1.0 - tol;
}

/// F_A = {z in F : Im z <= A}.
inline bool in_F_A(PointH z, double A) { return in_F(z) && z.y <= A; }

struct ReducedPoint {
    PointH point;
    ModularElement reducer;  // reducer . original == point
};

inline constexpr int kReduceIterationCap = 10000;

/// Alternates x -> x - round(x) and z -> -1/z while |z| < 1.
inline ReducedPoint reduce_point(PointH z) {
    if (!(z.y > 0.0)) throw std::domain_error("reduce_point: need Im z > 0");
    ReducedPoint out{z, ModularElement::identity()};
    PointH& p = out.point;
    ModularElement& g = out.reducer;
    for (int iter = 0; iter < kReduceIterationCap; ++iter) {
        const double n = std::round(p.x);
        if (n != 0.0) {
            p.x -= n;
            const auto k = static_cast<std::int64_t>(n);
            // T^{-k} g
            g = ModularElement::canonical(g.a - k * g.c, g.b - k * g.d, g.c, g.d);
        }
        const double r2 = p.x * p.x + p.y * p.y;
        if (r2 >= 1.0 - 1e-13) return out;
        p = {-p.x / r2, p.y / r2};
        g = ModularElement::canonical(-g.c, -g.d, g.a, g.b);  // S g
    }
    throw std::runtime_error("reduce_point: iteration cap reached");
}

/// Moves the base point of g into F by left multiplication.
inline Isometry reduce_frame(const Isometry& g) {
    const ReducedPoint rp = reduce_point(g.apply(PointH{0.0, 1.0}));
    if (rp.reducer.is_identity()) return g;
    return rp.reducer.to_isometry() * g;
}

struct TranslateHit {
    ModularElement gamma;
    PointH image;  // gamma . w
    double distance;
};

inline constexpr std::size_t kDefaultHitCap = 1'000'000;

namespace detail {

inline std::int64_t ext_gcd(std::int64_t p, std::int64_t q, std::int64_t& x, std::int64_t& y) {
    // p x + q y = gcd(p, q)
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (q != 0) {
        const std::int64_t t = p / q;
        p -= t * q; std::swap(p, q);
        x0 -= t * x1; std::swap(x0, x1);
        y0 -= t * y1; std::swap(y0, y1);
    }
    x = x0; y = y0;
    return p;
}

}  // namespace detail

/// Calls fn(a, b, c, d, image, u) for every gamma = (a b; c d) in PSL2(Z)
/// with u(z, gamma w) <= u_max, each class listed once. w should lie in F;
/// other w are accepted but enumerate more candidate rows.
///
/// Bottom rows (c, d) are constrained by Im(gamma w) = Im w / |cw+d|^2 >=
/// Im z e^{-rad}; each row is completed by the extended gcd and then shifted
/// by the T^k that can land within the radius.
template <class Fn>
void for_each_translate(PointH z, PointH w, double rad, Fn&& fn) {
    if (!(rad >= 0.0)) throw std::invalid_argument("enumerate_translates: need rad >= 0");
    const double sh = std::sinh(0.5 * rad);
    const double u_max = sh * sh;
    const double bound = w.y * std::exp(rad) / z.y;  // |cw+d|^2 <= bound
    const double c_max = std::floor(std::sqrt(bound) / w.y + 1e-12);

    auto scan_row = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        const double cd = static_cast<double>(c), dd = static_cast<double>(d);
        const double ex = cd * w.x + dd;
        const double den = ex * ex + cd * w.y * cd * w.y;
        const double py = w.y / den;
        // Re(gamma w) = (a|w|^2 c + (ad + bc) x + bd) / |cw+d|^2
        const double ad = static_cast<double>(a), bd = static_cast<double>(b);
        const double px = (ad * cd * (w.x * w.x + w.y * w.y) + (ad * dd + bd * cd) * w.x + bd * dd) / den;
        const double dy = z.y - py;
        const double rhs = 4.0 * z.y * py * u_max - dy * dy;
        if (rhs < 0.0) return;
        const double s = std::sqrt(rhs);
        const double centre = z.x - px;
        const auto k_lo = static_cast<std::int64_t>(std::ceil(centre - s - 1e-12));
        const auto k_hi = static_cast<std::int64_t>(std::floor(centre + s + 1e-12));
        for (std::int64_t k = k_lo; k <= k_hi; ++k) {
            const PointH img{px + static_cast<double>(k), py};
            const double u = u_invariant(z, img);
            if (u <= u_max) fn(a + k * c, b + k * d, c, d, img, u);
        }
    };

    scan_row(1, 0, 0, 1);
    for (std::int64_t c = 1; c <= static_cast<std::int64_t>(c_max); ++c) {
        const double cd = static_cast<double>(c);
        const double rem = bound - cd * cd * w.y * w.y;
        if (rem < 0.0) continue;
        const double s = std::sqrt(rem);
        const auto d_lo = static_cast<std::int64_t>(std::ceil(-cd * w.x - s - 1e-12));
        const auto d_hi = static_cast<std::int64_t>(std::floor(-cd * w.x + s + 1e-12));
        for (std::int64_t d = d_lo; d <= d_hi; ++d) {
            std::int64_t x = 0, y = 0;
            const std::int64_t g = detail::ext_gcd(d, c, x, y);
            if (g != 1 && g != -1) continue;
            // d x + c y = g  =>  a = x g, b = -y g gives ad - bc = 1
            scan_row(x * g, -y * g, c, d);
        }
    }
}

/// Every gamma with dist(z, gamma w) <= rad. w is reduced internally; the
/// returned gamma satisfy gamma . w == image for the caller's w.
inline std::vector<TranslateHit> enumerate_translates(PointH z, PointH w, double rad,
                                                      std::size_t hit_cap = kDefaultHitCap) {
    if (!(rad > 0.0)) throw std::invalid_argument("enumerate_translates: need rad > 0");
    const ReducedPoint rw = reduce_point(w);
    std::vector<TranslateHit> hits;
    for_each_translate(z, rw.point, rad,
                       [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, PointH img,
                           double u) {
                           if (hits.size() >= hit_cap) {
                               throw std::length_error("enumerate_translates: hit cap of " +
                                                       std::to_string(hit_cap) + " exceeded");
                           }
                           hits.push_back({ModularElement::canonical(a, b, c, d) * rw.reducer, img,
                                           2.0 * std::asinh(std::sqrt(u))});
                       });
    return hits;
}

/// K_{r,R}(z, w): number of translates gamma w with r <= dist(z, gamma w) <= R.
inline int kernel_value(PointH z, PointH w, const AnnulusSpec& ann) {
    const ReducedPoint rw = reduce_point(w);
    const double u_lo = ann.u_inner();
    int count = 0;
    for_each_translate(z, rw.point, ann.R,
                       [&](std::int64_t, std::int64_t, std::int64_t, std::int64_t, PointH, double u) {
                           if (u >= u_lo) ++count;
                       });
    return count;
}

/// |{gamma : u(z, gamma w) <= delta}|.
inline std::size_t count_lattice(PointH z, PointH w, double delta,
                                 std::size_t hit_cap = kDefaultHitCap) {
    if (!(delta >= 0.0)) throw std::invalid_argument("count_lattice: need delta >= 0");
    const ReducedPoint rw = reduce_point(w);
    const double rad = 2.0 * std::asinh(std::sqrt(delta));
    std::size_t count = 0;
    for_each_translate(z, rw.point, rad,
                       [&](std::int64_t, std::int64_t, std::int64_t, std::int64_t, PointH, double u) {
                           if (u <= delta) {
                               if (++count > hit_cap) {
                                   throw std::length_error("count_lattice: hit cap of " +
                                                           std::to_string(hit_cap) + " exceeded");
                               }
                           }
                       });
    return count;
}

/// min over gamma != 1 of dist(w, gamma w). The translate w + 1 bounds the
/// search radius, so one enumeration suffices.
inline double min_spacing(PointH w) {
    const PointH p = reduce_point(w).point;
    const double rad = dist(p, PointH{p.x + 1.0, p.y}) * (1.0 + 1e-9) + 1e-15;
    double best = std::numeric_limits<double>::infinity();
    for_each_translate(p, p, rad,
                       [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, PointH, double u) {
                           const ModularElement g = ModularElement::canonical(a, b, c, d);
                           if (g.is_identity()) return;
                           best = std::min(best, 2.0 * std::asinh(std::sqrt(u)));
                       });
    return best;
}

}  // namespace geovar
