#pragma once

#include "geovar/hyperbolic.hpp"
#include "geovar/modular.hpp"
#include "geovar/quadratic_forms.hpp"
#include "geovar/special_functions.hpp"
#include "geovar/intersections.hpp"
#include "geovar/closed_geodesics.hpp"
#include "geovar/variance_lab.hpp"
#include "geovar/form_cache.hpp"
#include "geovar/geodesic_plot.hpp"
