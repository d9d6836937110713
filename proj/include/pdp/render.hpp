#pragma once

#include <string>

#include "pdp/core.hpp"

namespace pdp {

struct RenderOptions {
    double width = 640.0;
    double height = 640.0;
    double margin = 24.0;
};

/// SVG 1.1 drawing of a plan: depot square, one circle per order, one
/// depot-to-depot polyline per route. Output is byte-identical for equal
/// inputs. Throws InputError when the instance has no coordinates.
std::string render_svg(const Instance& instance, const Plan& plan, const RenderOptions& options = {});

}  // namespace pdp
