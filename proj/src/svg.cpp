#include "fpf/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

#include "fpf/errors.hpp"

namespace fpf::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                    "#8c6d31", "#843c39", "#7b4173", "#3182bd"};
constexpr std::size_t kColors = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string render(const geom::DomainComplex& x, const color::Coloring& c, int width) {
    const int k = x.dimension();
    if (k > 2) throw ConfigError("plots are only drawn for dimension 1 or 2");
    if (x.size() == 0) throw ConfigError("nothing to plot");

    std::map<geom::CellId, std::vector<std::size_t>> member;
    for (std::size_t i = 0; i < c.classes.size(); ++i)
        for (auto id : c.classes[i].cells) member[id].push_back(i);

    double lo[2] = {1e300, 1e300};
    double hi[2] = {-1e300, -1e300};
    for (const auto& cell : x.cells()) {
        for (int a = 0; a < k; ++a) {
            lo[a] = std::min(lo[a], cell.bounds[static_cast<std::size_t>(a)].lo);
            hi[a] = std::max(hi[a], cell.bounds[static_cast<std::size_t>(a)].hi);
        }
    }
    const double pad = 10.0;
    const double span0 = std::max(hi[0] - lo[0], 1e-12);
    const double scale = (width - 2 * pad) / span0;
    const double strip = 60.0;
    const double height = k == 1 ? strip + 2 * pad : std::max(hi[1] - lo[1], 1e-12) * scale + 2 * pad;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << width << " " << num(height) << "\">\n";
    out << "<defs>\n";
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        out << "<pattern id=\"h" << i << "\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" "
            << "patternTransform=\"rotate(" << (45 + 30 * static_cast<int>(i % 4)) << ")\">"
            << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"" << kPalette[i % kColors]
            << "\" stroke-width=\"2\"/></pattern>\n";
    }
    out << "</defs>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << num(height) << "\" fill=\"white\"/>\n";

    for (const auto& cell : x.cells()) {
        const auto& b = cell.bounds;
        const double x0 = pad + (b[0].lo - lo[0]) * scale;
        const double w = (b[0].hi - b[0].lo) * scale;
        double y0 = pad;
        double h = strip;
        if (k == 2) {
            // SVG y grows downward.
            y0 = pad + (hi[1] - b[1].hi) * scale;
            h = (b[1].hi - b[1].lo) * scale;
        }
        const std::string geom = "x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(w) + "\" height=\"" +
                                 num(h) + "\"";
        auto it = member.find(cell.id);
        if (it == member.end()) {
            out << "<rect " << geom << " fill=\"none\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
            continue;
        }
        const auto& cls = it->second;
        out << "<rect " << geom << " fill=\"" << kPalette[cls.front() % kColors]
            << "\" stroke=\"black\" stroke-width=\"0.3\"><title>cell " << cell.id << " class " << cls.front()
            << "</title></rect>\n";
        for (std::size_t j = 1; j < cls.size(); ++j)
            out << "<rect " << geom << " fill=\"url(#h" << cls[j] << ")\" stroke=\"none\"><title>cell " << cell.id
                << " class " << cls[j] << "</title></rect>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace fpf::svg
