#pragma once

// SVG drawing of closed geodesics folded into the fundamental domain.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geovar/closed_geodesics.hpp"
#include "geovar/modular.hpp"

namespace geovar {

/// A piece of a geodesic inside F: the arc from `from` to `to` on the
/// geodesic with boundary endpoints e0, e1 (one of them may be infinite).
struct ArcPiece {
    PointH from, to;
    double e0 = 0.0, e1 = 0.0;
};

inline constexpr std::size_t kPlotPieceCap = 10'000;

namespace detail {

/// Largest tau in (0, len] with the geodesic g (i e^s), 0 <= s <= tau, inside F.
inline double exit_time(const Isometry& g, double len) {
    constexpr double h = 0.02;
    auto inside = [&](double s) { return in_F(g.apply(PointH{0.0, std::exp(s)}), 1e-12); };
    double good = 0.0;
    while (good < len) {
        const double next = std::min(len, good + h);
        if (!inside(next)) {
            double bad = next;
            for (int i = 0; i < 60 && bad - good > 1e-12; ++i) {
                const double mid = 0.5 * (good + bad);
                (inside(mid) ? good : bad) = mid;
            }
            return bad;
        }
        good = next;
    }
    return len;
}

}  // namespace detail

/// Folds one period of every cycle into F. Throws once the piece count
/// passes `cap`.
inline std::vector<std::vector<ArcPiece>> fold_cycles(const std::vector<FormCycle>& cycles,
                                                      std::size_t cap = kPlotPieceCap) {
    std::vector<std::vector<ArcPiece>> out;
    std::size_t count = 0;
    for (const FormCycle& cycle : cycles) {
        std::vector<ArcPiece> arcs;
        for (const GeodesicPiece& p : cycle_pieces(cycle)) {
            const double len = p.length();
            Isometry g = flow_isometry(p.frame.inverse(), std::min(p.s_from, p.s_to));
            double done = 0.0;
            while (done < len - 1e-12) {
                g = reduce_frame(g);
                const double tau = std::max(detail::exit_time(g, len - done), 1e-9);
                arcs.push_back({g.apply(PointH{0.0, 1.0}), g.apply(PointH{0.0, std::exp(tau)}),
                                g.apply_boundary(0.0), g.apply_boundary(std::numeric_limits<double>::infinity())});
                if (++count > cap) {
                    throw std::length_error("plot: more than " + std::to_string(cap) + " arc pieces");
                }
                g = flow_isometry(g, tau);
                done += tau;
            }
        }
        out.push_back(std::move(arcs));
    }
    return out;
}

/// SVG with the boundary of F and one <g class="geodesic-class"> per cycle.
inline std::string render_geodesics_svg(const std::vector<FormCycle>& cycles, std::int64_t D,
                                        std::size_t cap = kPlotPieceCap) {
    const auto folded = fold_cycles(cycles, cap);
    double top = 1.2;
    for (const auto& arcs : folded) {
        for (const ArcPiece& a : arcs) top = std::max({top, a.from.y, a.to.y});
    }
    top *= 1.05;
    const double scale = 800.0;
    const double width = scale * 1.2, height = scale * (top + 0.05);
    auto X = [&](double x) { return (x + 0.6) * scale; };
    auto Y = [&](double y) { return height - y * scale; };
    char buf[256];
    std::ostringstream os;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.3f %.3f\">\n",
                  width, height, width, height);
    os << buf;
    os << "<title>Closed geodesics of discriminant " << D << " (" << cycles.size() << " classes)</title>\n";
    const double yc = std::sqrt(3.0) / 2.0;
    std::snprintf(buf, sizeof buf,
                  "<path class=\"fundamental-domain\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
                  "d=\"M %.3f %.3f L %.3f %.3f A %.3f %.3f 0 0 1 %.3f %.3f L %.3f %.3f\"/>\n",
                  X(-0.5), Y(top), X(-0.5), Y(yc), scale, scale, X(0.5), Y(yc), X(0.5), Y(top));
    os << buf;
    for (std::size_t k = 0; k < folded.size(); ++k) {
        const double hue = 360.0 * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(1, folded.size()));
        std::snprintf(buf, sizeof buf,
                      "<g class=\"geodesic-class\" data-form=\"%lld %lld %lld\" fill=\"none\" "
                      "stroke=\"hsl(%.1f,70%%,40%%)\" stroke-width=\"1\">\n",
                      static_cast<long long>(cycles[k].forms.front().a),
                      static_cast<long long>(cycles[k].forms.front().b),
                      static_cast<long long>(cycles[k].forms.front().c), hue);
        os << buf;
        for (const ArcPiece& a : folded[k]) {
            if (std::isinf(a.e0) || std::isinf(a.e1)) {
                std::snprintf(buf, sizeof buf, "<path d=\"M %.3f %.3f L %.3f %.3f\"/>\n", X(a.from.x), Y(a.from.y),
                              X(a.to.x), Y(a.to.y));
            } else {
                const double radius = 0.5 * std::abs(a.e1 - a.e0) * scale;
                const int sweep = a.from.x < a.to.x ? 1 : 0;
                std::snprintf(buf, sizeof buf, "<path d=\"M %.3f %.3f A %.3f %.3f 0 0 %d %.3f %.3f\"/>\n",
                              X(a.from.x), Y(a.from.y), radius, radius, sweep, X(a.to.x), Y(a.to.y));
            }
            os << buf;
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace geovar
