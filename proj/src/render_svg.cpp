#include "pdp/render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace pdp {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const Instance& instance, const Plan& plan, const RenderOptions& options) {
    if (instance.coords.size() != instance.orders.size() + 1) {
        throw InputError("render: instance '" + instance.name + "' has no node coordinates");
    }
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const Point& p : instance.coords) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double scale = std::min(options.width, options.height) - 2 * options.margin;
    // y grows upward in the data, downward in SVG
    const auto sx = [&](double x) { return num(options.margin + (x - xmin) / span * scale); };
    const auto sy = [&](double y) { return num(options.height - options.margin - (y - ymin) / span * scale); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(options.width) +
           "\" height=\"" + num(options.height) + "\">\n";
    svg += "<title>" + escape(instance.name) + "</title>\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t r = 0; r < plan.routes.size(); ++r) {
        const Route& route = plan.routes[r];
        std::string pts = sx(instance.coords[0].x) + "," + sy(instance.coords[0].y);
        for (const auto& id : route.sequence) {
            const Order* o = instance.find_order(id);
            if (!o) throw InputError("render: route " + std::to_string(r) + " names unknown order '" + id + "'");
            pts += " " + sx(instance.coords[o->node].x) + "," + sy(instance.coords[o->node].y);
        }
        pts += " " + sx(instance.coords[0].x) + "," + sy(instance.coords[0].y);
        svg += "<polyline class=\"route\" data-vehicle=\"" + escape(route.vehicle) + "\" fill=\"none\" stroke=\"" +
               kPalette[r % std::size(kPalette)] + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    }

    for (const Order& o : instance.orders) {
        const Point& p = instance.coords[o.node];
        svg += "<circle class=\"order\" data-id=\"" + escape(o.id) + "\" cx=\"" + sx(p.x) + "\" cy=\"" + sy(p.y) +
               "\" r=\"4\" fill=\"" + (o.zone_type == 1 ? "#555555" : "#bbbbbb") + "\" stroke=\"black\"/>\n";
    }
    const Point& d = instance.coords[0];
    svg += "<rect class=\"depot\" x=\"" + num(options.margin + (d.x - xmin) / span * scale - 6) + "\" y=\"" +
           num(options.height - options.margin - (d.y - ymin) / span * scale - 6) +
           "\" width=\"12\" height=\"12\" fill=\"black\"/>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace pdp
