#pragma once

// Closed geodesics of discriminant D on the modular surface, one per narrow
// class, assembled from the axes of the reduced forms in each cycle.
//
// For consecutive forms f -> f' of a cycle, f' = f o gamma with
// gamma = (0 -1; 1 k), k = (b + b') / 2c, so gamma maps the axis of f' onto
// the axis of f. The piece on the axis of f runs from the top of that axis
// to gamma(top of the axis of f'); the pieces of a cycle join up into one
// period of the closed geodesic. Every piece is rebuilt from integer data,
// so rounding does not accumulate along the period.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "geovar/hyperbolic.hpp"
#include "geovar/intersections.hpp"
#include "geovar/quadratic_forms.hpp"

namespace geovar {

struct GeodesicPiece {
    FormTriple form;
    GeodesicLine axis;
    Isometry frame;  // axis_frame(axis)
    double s_from = 0.0;  // arc-length coordinates on the frame's vertical axis
    double s_to = 0.0;

    double length() const { return std::abs(s_to - s_from); }
};

/// Euclidean top of the semicircle between two finite endpoints.
inline PointH axis_top(const GeodesicLine& line) {
    return {0.5 * (line.endpoint_minus + line.endpoint_plus),
            0.5 * std::abs(line.endpoint_plus - line.endpoint_minus)};
}

/// gamma with reduction_step(f) = f o gamma.
inline Isometry reduction_transform(const FormTriple& f, const FormTriple& next) {
    const std::int64_t num = f.b + next.b;
    if (num % (2 * f.c) != 0) throw std::logic_error("reduction_transform: forms are not consecutive");
    return {0.0, -1.0, 1.0, static_cast<double>(num / (2 * f.c))};
}

inline std::vector<GeodesicPiece> cycle_pieces(const FormCycle& cycle) {
    const std::size_t m = cycle.forms.size();
    if (m == 0) throw std::invalid_argument("cycle_pieces: empty cycle");
    std::vector<GeodesicPiece> pieces;
    pieces.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const FormTriple& f = cycle.forms[j];
        const FormTriple& next = cycle.forms[(j + 1) % m];
        GeodesicPiece p;
        p.form = f;
        p.axis = axis_of_form(f);
        p.frame = axis_frame(p.axis);
        const PointH from = axis_top(p.axis);
        const PointH to = reduction_transform(f, next).apply(axis_top(axis_of_form(next)));
        p.s_from = foot_and_offset(p.frame.apply(from)).s;
        p.s_to = foot_and_offset(p.frame.apply(to)).s;
        pieces.push_back(p);
    }
    return pieces;
}

/// Windows of length <= step covering every piece of the cycle.
inline Trajectory cycle_trajectory(const FormCycle& cycle, double step = kDefaultStep) {
    Trajectory tr;
    for (const GeodesicPiece& p : cycle_pieces(cycle)) {
        const double lo = std::min(p.s_from, p.s_to);
        const double len = p.length();
        if (len <= 0.0) continue;
        tr.append_flow(flow_isometry(p.frame.inverse(), lo), len, step);
    }
    return tr;
}

/// Lambda_D: cycles, the unit and one trajectory per cycle.
struct ClosedGeodesicSet {
    std::int64_t D = 0;
    std::vector<FormCycle> cycles;
    UnitData unit;
    std::vector<Trajectory> trajectories;

    std::size_t h_plus() const { return cycles.size(); }
    /// h+ * 2 log eps+.
    double total_length() const { return static_cast<double>(cycles.size()) * unit.geodesic_length; }
};

inline ClosedGeodesicSet build_closed_geodesics(const Discriminant& disc, double step = kDefaultStep) {
    ClosedGeodesicSet set;
    set.D = disc.value();
    set.cycles = form_cycles(disc);
    set.unit = fundamental_unit_plus(disc);
    for (const FormCycle& c : set.cycles) set.trajectories.push_back(cycle_trajectory(c, step));
    return set;
}

}  // namespace geovar
