#pragma once

// Complete elliptic integrals, the annulus shape function G, Bessel J0/J1,
// conical Legendre functions, the Selberg/Harish-Chandra transform of an
// annulus indicator and the spectral weight H(t).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geovar/modular.hpp"

namespace geovar {

// ---------------------------------------------------------------------------
// Elliptic integrals (modulus convention: K(k) = int dθ / sqrt(1 - k^2 sin^2 θ))

inline double elliptic_K(double k) {
    if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("elliptic_K: need 0 <= k < 1");
    double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (a + b);
}

/// E = K (1 - sum_n 2^{n-1} c_n^2) along the AGM with c_0 = k.
inline double elliptic_E(double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw std::domain_error("elliptic_E: need 0 <= k <= 1");
    if (k == 1.0) return 1.0;
    double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k)), c = k;
    double pow2 = 0.5, sum = pow2 * c * c;
    // c shrinks quadratically; once it is below 1e-9 the remaining terms are
    // under 1e-17, while iterating further only adds 2^n ulp^2 noise.
    for (int i = 0; i < 64 && std::abs(c) > 1e-9 * a; ++i) {
        c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    return std::numbers::pi / (2.0 * a) * (1.0 - sum);
}

// ---------------------------------------------------------------------------
// G(w) = 1 + w^3 + (1 - w^2) K(w) - (1 + w^2) E(w)

struct GValue {
    double w = 0.0;
    double value = 1.0;
};

namespace detail {

/// Below this q = 1 - w^2 the logarithmic expansions in q replace the AGM
/// form of G, whose leading terms cancel as w -> 1.
inline constexpr double kGSeriesSwitch = 0.25;
inline constexpr int kGSeriesTerms = 80;

// Coefficients of K = sum a_m q^m (l + d_m) and
// E = 1 + sum_{m>=1} c_{m-1} q^m (l + d_{m-1} - e_{m-1}), with l = -log(q)/2.
struct LogSeries {
    std::array<double, kGSeriesTerms> a{}, c{}, d{}, e{};
    LogSeries() {
        double r = 1.0, s = 0.5, dm = 2.0 * std::numbers::ln2;
        for (int m = 0; m < kGSeriesTerms; ++m) {
            if (m > 0) {
                r *= (m - 0.5) / m;
                s *= (m + 0.5) / (m + 1.0);
                dm -= 1.0 / (m * (2.0 * m - 1.0));
            }
            a[m] = r * r;
            c[m] = r * s;
            d[m] = dm;
            e[m] = 1.0 / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
        }
    }
};

inline const LogSeries& log_series() {
    static const LogSeries s;
    return s;
}

/// E(w) - 1 for small q.
inline double E_minus_one_series(double q) {
    const LogSeries& S = log_series();
    const double l = -0.5 * std::log(q);
    double sum = 0.0, qm = 1.0;
    for (int m = 1; m < kGSeriesTerms; ++m) {
        qm *= q;
        const double term = S.c[m - 1] * qm * (l + S.d[m - 1] - S.e[m - 1]);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

/// G as a series in q. The q^0 and q^1 terms vanish identically.
inline double G_series(double q) {
    const LogSeries& S = log_series();
    const double l = -0.5 * std::log(q);
    double binom = 1.0;  // binom(3/2, n) (-1)^n
    double sum = 0.0, qn = 1.0;
    for (int n = 1; n < kGSeriesTerms; ++n) {
        binom *= -(1.5 - (n - 1)) / n;
        qn *= q;
        if (n == 1) continue;
        const double lcoef = S.a[n - 1] - 2.0 * S.c[n - 1] + S.c[n - 2];
        const double ccoef = binom + S.a[n - 1] * S.d[n - 1] -
                             2.0 * S.c[n - 1] * (S.d[n - 1] - S.e[n - 1]) +
                             S.c[n - 2] * (S.d[n - 2] - S.e[n - 2]);
        const double term = qn * (lcoef * l + ccoef);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace detail

inline GValue G_function(double w) {
    if (!(w >= 0.0 && w < 1.0)) throw std::domain_error("G_function: need 0 <= w < 1");
    const double q = (1.0 - w) * (1.0 + w);
    if (q < detail::kGSeriesSwitch) return {w, detail::G_series(q)};
    const double value = 1.0 + w * w * w + q * elliptic_K(w) - (1.0 + w * w) * elliptic_E(w);
    return {w, value};
}

inline double G_value(double w) { return G_function(w).value; }

/// G'(w) = 3 w (w - E(w)).
inline double G_prime(double w) {
    if (!(w >= 0.0 && w < 1.0)) throw std::domain_error("G_prime: need 0 <= w < 1");
    const double q = (1.0 - w) * (1.0 + w);
    if (q < detail::kGSeriesSwitch) {
        return 3.0 * w * (-q / (1.0 + w) - detail::E_minus_one_series(q));
    }
    if (w == 0.0) return 0.0;
    return 3.0 * w * (w - elliptic_E(w));
}

/// (3/4)(1 - w)^2 log(2 / (1 - w)), the leading behaviour of G at w = 1.
inline double G_leading_term(double w) {
    const double v = 1.0 - w;
    return 0.75 * v * v * std::log(2.0 / v);
}

// ---------------------------------------------------------------------------
// Bessel functions of the first kind, orders 0 and 1

namespace detail {

inline constexpr double kBesselAsymptoticFrom = 25.0;

/// Miller's backward recurrence normalized by J0 + 2 sum J_{2k} = 1.
inline std::pair<double, double> bessel_miller(double x) {
    if (x < 1e-8) return {1.0 - 0.25 * x * x, 0.5 * x};
    int N = 2 * static_cast<int>((x + 20.0 + 6.0 * std::sqrt(x)) / 2.0);
    double jp1 = 0.0, j = 1e-300, norm = 0.0, j0 = 0.0, j1 = 0.0;
    const double two_over_x = 2.0 / x;
    for (int k = N; k > 0; --k) {
        const double jm1 = k * two_over_x * j - jp1;
        jp1 = j;
        j = jm1;  // J_{k-1}
        if (std::abs(j) > 1e250) {
            j *= 1e-250; jp1 *= 1e-250; norm *= 1e-250; j1 *= 1e-250;
        }
        if (k - 1 == 1) j1 = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    }
    j0 = j;
    norm += j0;
    return {j0 / norm, j1 / norm};
}

/// Hankel expansion, x >= kBesselAsymptoticFrom.
inline double bessel_hankel(int order, double x) {
    const double mu = 4.0 * order * order;
    double P = 1.0, Q = 0.0, term = 1.0, prev = 1e300;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        // terms alternate P, Q, -P, -Q, ...
        switch (k % 4) {
            case 1: Q += term; break;
            case 2: P -= term; break;
            case 3: Q -= term; break;
            default: P += term; break;
        }
        if (std::abs(term) < 1e-17) break;
    }
    const double c = std::cos(x), s = std::sin(x);
    constexpr double r2 = std::numbers::sqrt2 / 2.0;
    double cchi, schi;
    if (order == 0) {  // chi = x - pi/4
        cchi = r2 * (c + s);
        schi = r2 * (s - c);
    } else {  // chi = x - 3 pi/4
        cchi = r2 * (s - c);
        schi = -r2 * (s + c);
    }
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * cchi - Q * schi);
}

}  // namespace detail

inline double bessel_J(int order, double x) {
    if (order != 0 && order != 1) throw std::invalid_argument("bessel_J: order must be 0 or 1");
    if (!std::isfinite(x)) throw std::domain_error("bessel_J: x must be finite");
    const double ax = std::abs(x);
    double v;
    if (ax < detail::kBesselAsymptoticFrom) {
        const auto [j0, j1] = detail::bessel_miller(ax);
        v = order == 0 ? j0 : j1;
    } else {
        v = detail::bessel_hankel(order, ax);
    }
    return (order == 1 && x < 0.0) ? -v : v;
}

/// J1(x)/x, equal to 1/2 at x = 0.
inline double j1x(double x) {
    if (std::abs(x) < 1e-4) return 0.5 - x * x / 16.0;
    return bessel_J(1, x) / x;
}

// ---------------------------------------------------------------------------
// Conical Legendre function and the transform of an annulus indicator

namespace detail {

/// cosh b - cosh s without cancellation.
inline double cosh_gap(double b, double s) {
    return 2.0 * std::sinh(0.5 * (b + s)) * std::sinh(0.5 * (b - s));
}

/// Composite 20-point Gauss rule on equal panels.
template <class F>
double gauss_panels(F&& f, double lo, double hi, int panels) {
    using boost::math::quadrature::gauss;
    const double h = (hi - lo) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        sum += gauss<double, 20>::integrate(f, lo + p * h, lo + (p + 1) * h);
    }
    return sum;
}

}  // namespace detail

/// P_{-1/2+it}(cosh rho) = (sqrt 2/pi) int_0^rho cos(ts) / sqrt(cosh rho - cosh s) ds.
inline double legendre_conical(double t, double rho) {
    if (!(rho >= 0.0 && rho <= 10.0)) throw std::domain_error("legendre_conical: need 0 <= rho <= 10");
    if (rho == 0.0) return 1.0;
    auto f = [&](double v) {
        const double s = rho * (1.0 - v * v);
        const double den = 2.0 * std::sinh(0.5 * (rho + s)) * std::sinh(0.5 * rho * v * v);
        const double jac = v == 0.0 ? 2.0 * std::sqrt(rho / std::sinh(rho))
                                    : 2.0 * rho * v / std::sqrt(den);
        return std::cos(t * s) * jac;
    };
    const int panels = 2 + static_cast<int>(std::ceil(rho * std::abs(t) / 2.0));
    return std::numbers::sqrt2 / std::numbers::pi * detail::gauss_panels(f, 0.0, 1.0, panels);
}

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kShcRelTol = 1e-7;

/// h_{r,R}(t) = 2 pi int_r^R P_{-1/2+it}(cosh rho) sinh rho d rho.
///
/// The rho-integral is done in closed form after exchanging the order of
/// integration, leaving
///   4 sqrt2 int_0^R cos(ts) [sqrt(cosh R - cosh s) - 1{s<r} sqrt(cosh r - cosh s)] ds.
/// Both square-root endpoints are removed by s = b - (b - a) v^2.
inline double shc_numeric(const AnnulusSpec& ann, double t) {
    if (!(ann.R <= 1.0)) throw std::domain_error("shc_numeric: need R <= 1");
    if (!(std::abs(t) <= 1e4)) throw std::domain_error("shc_numeric: need |t| <= 1e4");
    using boost::math::quadrature::gauss_kronrod;
    const double R = ann.R, r = ann.r;
    const int panels = 1 + static_cast<int>(std::ceil(R * std::abs(t) / 2.0));

    double total = 0.0, err_total = 0.0, l1_total = 0.0;
    auto integrate = [&](auto&& f) {
        const double h = 1.0 / panels;
        for (int p = 0; p < panels; ++p) {
            double err = 0.0, l1 = 0.0;
            total += gauss_kronrod<double, 31>::integrate(f, p * h, (p + 1) * h, 15, 1e-12, &err, &l1);
            err_total += err;
            l1_total += l1;
        }
    };
    // [r, R]: sqrt(cosh R - cosh s), zero at s = R.
    integrate([&](double v) {
        const double s = R - (R - r) * v * v;
        return std::cos(t * s) * std::sqrt(detail::cosh_gap(R, s)) * 2.0 * (R - r) * v;
    });
    if (r > 0.0) {
        // [0, r]: sqrt(cosh R - cosh s) - sqrt(cosh r - cosh s), zero of the second at s = r.
        integrate([&](double v) {
            const double s = r * (1.0 - v * v);
            const double diff = std::sqrt(detail::cosh_gap(R, s)) - std::sqrt(detail::cosh_gap(r, s));
            return std::cos(t * s) * diff * 2.0 * r * v;
        });
    }
    if (err_total > kShcRelTol * std::abs(total) && err_total > 1e-15 * l1_total) {
        throw QuadratureFailure("shc_numeric: error estimate " + std::to_string(err_total) +
                                " exceeds tolerance for value " + std::to_string(total) +
                                " (r=" + std::to_string(r) + ", R=" + std::to_string(R) +
                                ", t=" + std::to_string(t) + ")");
    }
    return 4.0 * std::numbers::sqrt2 * total;
}

/// 2 pi (R J1(Rt) - r J1(rt)) / t, the Bessel main term of h_{r,R}(t);
/// pi (R^2 - r^2) at t = 0.
inline double shc_asymptotic(const AnnulusSpec& ann, double t) {
    if (!(ann.R - ann.r >= 0.5 * ann.R)) throw std::domain_error("shc_asymptotic: need R - r >= R/2");
    return 2.0 * std::numbers::pi * (ann.R * ann.R * j1x(ann.R * t) - ann.r * ann.r * j1x(ann.r * t));
}

// ---------------------------------------------------------------------------
// Spectral weight

namespace detail {

/// log|Gamma(z)| for Re z > 0: upward shift then the Stirling series.
inline double log_abs_gamma(std::complex<double> z) {
    if (!(z.real() > 0.0)) throw std::domain_error("log_abs_gamma: need Re z > 0");
    double shift = 0.0;
    while (std::abs(z) < 15.0) {
        shift += std::log(std::abs(z));
        z += 1.0;
    }
    const std::complex<double> inv = 1.0 / z, inv2 = inv * inv;
    // B_{2k} / (2k (2k-1)), k = 1..8
    static constexpr std::array<double, 8> coef = {
        1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0,
        -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};
    std::complex<double> series = 0.0, p = inv;
    for (double c : coef) {
        series += c * p;
        p *= inv2;
    }
    const std::complex<double> lg =
        (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
    return lg.real() - shift;
}

}  // namespace detail

/// H(t) = |Gamma(1/4 + it/2)|^4 / |Gamma(1/2 + it)|^2.
inline double weight_H(double t) {
    const double a = std::abs(t);
    const double num = detail::log_abs_gamma({0.25, 0.5 * a});
    const double den = detail::log_abs_gamma({0.5, a});
    return std::exp(4.0 * num - 2.0 * den);
}

// ---------------------------------------------------------------------------
// int_0^inf ((R J1(Rt) - r J1(rt)) / t)^2 dt

inline constexpr double kBesselIntegralCutoff = 1e4;

/// Evaluated as R^3 int_0^inf (j1x(x) - w^2 j1x(wx))^2 dx with w = r/R:
/// Gauss panels of length pi/2 up to X, plus the averaged tail (1+w)/(2 pi X^2).
inline double bessel_main_integral(const AnnulusSpec& ann) {
    const double R = ann.R, w = ann.r / ann.R, w2 = w * w;
    auto f = [&](double x) {
        const double v = j1x(x) - w2 * j1x(w * x);
        return v * v;
    };
    const double X = kBesselIntegralCutoff;
    const int panels = static_cast<int>(std::ceil(X / (0.5 * std::numbers::pi)));
    const double body = detail::gauss_panels(f, 0.0, X, panels);
    if (!std::isfinite(body)) throw QuadratureFailure("bessel_main_integral: non-finite quadrature");
    const double tail = (1.0 + w) / (2.0 * std::numbers::pi * X * X);
    return R * R * R * (body + tail);
}

/// (4 R^3 / 3 pi) G(r/R).
inline double bessel_main_closed_form(const AnnulusSpec& ann) {
    return 4.0 * ann.R * ann.R * ann.R / (3.0 * std::numbers::pi) * G_value(ann.r / ann.R);
}

}  // namespace geovar
