#pragma once

// Indefinite binary quadratic forms of a real quadratic discriminant D:
// reduced forms and their cycles (one per narrow class), the unit of
// positive norm, geodesic axes, the quadratic character and L(1, chi_D).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "geovar/hyperbolic.hpp"

namespace geovar {

using BigInt = boost::multiprecision::cpp_int;

inline std::int64_t isqrt(std::int64_t n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_squarefree(std::int64_t n) {
    if (n <= 0) return false;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
        if (n % p == 0) n /= p;
    }
    return true;
}

/// Discriminant of a real quadratic field: D = 1 mod 4 squarefree, or
/// D = 4m with m = 2, 3 mod 4 squarefree; D > 1.
inline bool is_fundamental_discriminant(std::int64_t D) {
    if (D <= 1) return false;
    if (D % 4 == 1) return is_squarefree(D);
    if (D % 4 == 0) {
        const std::int64_t m = D / 4;
        return (m % 4 == 2 || m % 4 == 3) && is_squarefree(m);
    }
    return false;
}

/// A fundamental discriminant D > 1.
class Discriminant {
public:
    explicit Discriminant(std::int64_t D) : value_(D) {
        if (!is_fundamental_discriminant(D)) {
            throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
        }
    }
    std::int64_t value() const { return value_; }
    bool squarefree() const { return is_squarefree(value_); }
    double sqrt() const { return std::sqrt(static_cast<double>(value_)); }

private:
    std::int64_t value_;
};

/// Kronecker symbol (a / n).
inline int kronecker(std::int64_t a, std::int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int v2 = 0;
    while ((n & 1) == 0) { n >>= 1; ++v2; }
    if (v2 > 0) {
        if ((a & 1) == 0) return 0;
        const std::int64_t a8 = ((a % 8) + 8) % 8;
        if ((v2 & 1) && (a8 == 3 || a8 == 5)) result = -result;
    }
    // Jacobi symbol for odd n > 0.
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const std::int64_t r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

/// chi_D(n), the primitive quadratic character attached to D.
inline int kronecker_chi(const Discriminant& D, std::int64_t n) { return kronecker(D.value(), n); }

struct FormTriple {
    std::int64_t a = 0, b = 0, c = 0;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    friend auto operator<=>(const FormTriple&, const FormTriple&) = default;
};

/// 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b, in exact arithmetic.
inline bool is_reduced(const FormTriple& f, std::int64_t D) {
    if (f.discriminant() != D || f.a == 0) return false;
    if (!(f.b > 0 && f.b * f.b < D)) return false;
    const std::int64_t two_a = 2 * (f.a < 0 ? -f.a : f.a);
    const std::int64_t lo = two_a + f.b;  // need lo > sqrt D
    if (lo * lo <= D) return false;
    const std::int64_t hi = two_a - f.b;  // need hi < sqrt D
    return hi <= 0 || hi * hi < D;
}

/// All reduced primitive forms of discriminant D, sorted.
inline std::vector<FormTriple> reduced_forms(const Discriminant& disc) {
    const std::int64_t D = disc.value();
    std::vector<FormTriple> out;
    for (std::int64_t b = (D % 2 == 0) ? 2 : 1; b * b < D; b += 2) {
        const std::int64_t n = (D - b * b) / 4;  // = -ac > 0
        // smallest |a| with (2|a| + b)^2 > D
        std::int64_t a_lo = std::max<std::int64_t>(1, (isqrt(D) - b) / 2);
        while ((2 * a_lo + b) * (2 * a_lo + b) <= D) ++a_lo;
        for (std::int64_t aa = a_lo;; ++aa) {
            const std::int64_t hi = 2 * aa - b;
            if (hi > 0 && hi * hi >= D) break;
            if (n % aa != 0) continue;
            for (const std::int64_t a : {aa, -aa}) {
                const FormTriple f{a, b, -n / a};
                if (std::gcd(std::gcd(f.a, f.b), f.c) == 1) out.push_back(f);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// (a, b, c) -> (c, b', (b'^2 - D) / 4c) with b' = -b mod 2c taken in
/// (sqrt D - 2|c|, sqrt D).
inline FormTriple reduction_step(const FormTriple& f) {
    const std::int64_t D = f.discriminant();
    if (D <= 0 || !is_reduced(f, D)) throw std::invalid_argument("reduction_step: form is not reduced");
    const std::int64_t m = 2 * (f.c < 0 ? -f.c : f.c);
    const std::int64_t s = isqrt(D);
    const std::int64_t shift = ((s + f.b) % m + m) % m;
    const std::int64_t b2 = s - shift;
    return {f.c, b2, (b2 * b2 - D) / (4 * f.c)};
}

struct FormCycle {
    std::vector<FormTriple> forms;
};

/// Orbits of reduction_step on the reduced forms; one cycle per narrow class.
inline std::vector<FormCycle> form_cycles(const Discriminant& disc) {
    const std::vector<FormTriple> all = reduced_forms(disc);
    std::map<FormTriple, bool> seen;
    for (const auto& f : all) seen[f] = false;
    std::vector<FormCycle> cycles;
    for (const auto& start : all) {
        if (seen[start]) continue;
        FormCycle cyc;
        FormTriple f = start;
        do {
            auto it = seen.find(f);
            if (it == seen.end()) throw std::logic_error("form_cycles: step left the reduced set");
            it->second = true;
            cyc.forms.push_back(f);
            f = reduction_step(f);
        } while (!(f == start));
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

inline std::size_t narrow_class_number(const Discriminant& disc) { return form_cycles(disc).size(); }

/// log of a positive big integer, valid far beyond the double range.
inline double log_bigint(const BigInt& n) {
    if (n <= 0) throw std::domain_error("log_bigint: need n > 0");
    const auto bits = static_cast<long>(boost::multiprecision::msb(n)) + 1;
    if (bits <= 900) return std::log(n.convert_to<double>());
    const long shift = bits - 64;
    const BigInt top = n >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

struct UnitData {
    BigInt t, u;  // minimal solution of t^2 - D u^2 = 4
    double log_eps_plus = 0.0;
    double geodesic_length = 0.0;  // 2 log eps+ = 2 arccosh(t/2)
    bool norm_minus_one = false;  // fundamental unit had norm -1 and was squared

    /// eps+ as a double (infinite once it overflows).
    double eps_plus() const { return std::exp(log_eps_plus); }
};

inline std::int64_t floor_div(std::int64_t p, std::int64_t q) {
    std::int64_t d = p / q;
    if ((p % q != 0) && ((p < 0) != (q < 0))) --d;
    return d;
}

/// Continued-fraction solver for t^2 - D u^2 = +-4 via the expansion of
/// (D mod 2 + sqrt D) / 2; a norm -1 solution is squared.
inline UnitData fundamental_unit_plus(const Discriminant& disc) {
    const std::int64_t D = disc.value();
    const std::int64_t s = isqrt(D);
    std::int64_t P = D % 2, Q = 2;
    BigInt G2 = -P, G1 = Q;  // G_{i-2}, G_{i-1}
    BigInt B2 = 1, B1 = 0;
    for (long i = 0; i < 100'000'000; ++i) {
        const std::int64_t a = Q > 0 ? floor_div(P + s, Q) : -floor_div(P + s, -Q) - 1;
        BigInt G = a * G1 + G2;
        BigInt B = a * B1 + B2;
        const std::int64_t P_next = a * Q - P;
        const std::int64_t Q_next = (D - P_next * P_next) / Q;
        G2 = std::move(G1); G1 = G;
        B2 = std::move(B1); B1 = B;
        P = P_next; Q = Q_next;
        if (Q == 2 || Q == -2) {
            const BigInt norm = G * G - D * B * B;
            if (norm == 4 || norm == -4) {
                UnitData ud;
                ud.norm_minus_one = norm == -4;
                if (ud.norm_minus_one) {
                    ud.t = (G * G + D * B * B) / 2;
                    ud.u = G * B;
                } else {
                    ud.t = G;
                    ud.u = B;
                }
                // 2 arccosh(t/2) = 2 [log t - log 2 + log1p(sqrt(1 - 4/t^2))]
                const double td = ud.t.convert_to<double>();
                const double inv = std::isfinite(td) ? 4.0 / (td * td) : 0.0;
                const double ach = log_bigint(ud.t) - std::numbers::ln2 + std::log1p(std::sqrt(1.0 - inv));
                ud.log_eps_plus = ach;
                ud.geodesic_length = 2.0 * ach;
                return ud;
            }
        }
    }
    throw std::runtime_error("fundamental_unit_plus: no period found");
}

/// Axis of a form; endpoint_plus is the attracting fixed point of the
/// automorph with positive trace, so the flow runs towards (-b + sqrt D)/2a.
inline GeodesicLine axis_of_form(const FormTriple& f) {
    const std::int64_t D = f.discriminant();
    if (D <= 0 || f.a == 0) throw std::invalid_argument("axis_of_form: need an indefinite form with a != 0");
    const double sd = std::sqrt(static_cast<double>(D));
    const double a = static_cast<double>(f.a), b = static_cast<double>(f.b), c = static_cast<double>(f.c);
    // Roots of a x^2 + b x + c, each through the cancellation-free form.
    if (f.b >= 0) return {(-b - sd) / (2.0 * a), -2.0 * c / (b + sd)};
    return {2.0 * c / (sd - b), (-b + sd) / (2.0 * a)};
}

/// Automorph of f with trace t: [[(t - b u)/2, -c u], [a u, (t + b u)/2]].
inline Isometry automorph(const FormTriple& f, const UnitData& unit) {
    const double t = unit.t.convert_to<double>();
    const double u = unit.u.convert_to<double>();
    return {(t - static_cast<double>(f.b) * u) / 2.0, -static_cast<double>(f.c) * u,
            static_cast<double>(f.a) * u, (t + static_cast<double>(f.b) * u) / 2.0};
}

/// L(1, chi_D) = -(1/sqrt D) sum_{a<D} chi_D(a) log(2 sin(pi a / D)).
inline double dirichlet_L1(const Discriminant& disc) {
    const std::int64_t D = disc.value();
    // Neumaier summation; chi_D is even, so fold a and D - a.
    double sum = 0.0, comp = 0.0;
    for (std::int64_t a = 1; 2 * a < D; ++a) {
        const int chi = kronecker(D, a);
        if (chi == 0) continue;
        const double term = chi * std::log(2.0 * std::sin(std::numbers::pi * static_cast<double>(a) / static_cast<double>(D)));
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return -2.0 * (sum + comp) / std::sqrt(static_cast<double>(D));
}

/// Relative residual of h+ * 2 log eps+ = 2 sqrt(D) L(1, chi_D).
inline double class_number_formula_check(const Discriminant& disc) {
    const double lhs = static_cast<double>(narrow_class_number(disc)) * fundamental_unit_plus(disc).geodesic_length;
    const double rhs = 2.0 * disc.sqrt() * dirichlet_L1(disc);
    return std::abs(lhs - rhs) / rhs;
}

}  // namespace geovar
