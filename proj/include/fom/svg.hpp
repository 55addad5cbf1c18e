#ifndef FOM_SVG_HPP
#define FOM_SVG_HPP

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fom {

/// Minimal self-contained log-log SVG plot: axes, tick labels at decades, one
/// polyline per series. No external renderer.
inline std::string loglog_svg(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                              const std::string& title = "", const std::string& x_label = "iteration",
                              const std::string& y_label = "gap") {
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& [name, pts] : series)
        for (const auto& [x, y] : pts) {
            if (!(x > 0) || !(y > 0)) continue;
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (x_min > x_max || y_min > y_max)
        throw std::invalid_argument("loglog_svg: no positive points to plot");
    if (x_min == x_max) x_max = x_min * 10;
    if (y_min == y_max) y_max = y_min * 10;

    const double W = 640, H = 480, ML = 70, MR = 20, MT = 30, MB = 50;
    double lx0 = std::log10(x_min), lx1 = std::log10(x_max);
    double ly0 = std::log10(y_min), ly1 = std::log10(y_max);
    auto px = [&](double x) { return ML + (std::log10(x) - lx0) / (lx1 - lx0) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (std::log10(y) - ly0) / (ly1 - ly0) * (H - MT - MB); };

    std::ostringstream s;
    s << std::setprecision(6);
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    s << "<rect width='100%' height='100%' fill='white'/>\n";
    if (!title.empty())
        s << "<text x='" << W / 2 << "' y='18' text-anchor='middle' font-size='14'>" << title
          << "</text>\n";
    // axes
    s << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='" << H - MB
      << "' stroke='black'/>\n";
    s << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
      << "' stroke='black'/>\n";
    // decade ticks
    for (int d = static_cast<int>(std::ceil(lx0)); d <= static_cast<int>(std::floor(lx1)); ++d) {
        double x = px(std::pow(10.0, d));
        s << "<line x1='" << x << "' y1='" << H - MB << "' x2='" << x << "' y2='" << H - MB + 5
          << "' stroke='black'/>\n";
        s << "<text x='" << x << "' y='" << H - MB + 18 << "' text-anchor='middle' font-size='11'>1e"
          << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ly0)); d <= static_cast<int>(std::floor(ly1)); ++d) {
        double y = py(std::pow(10.0, d));
        s << "<line x1='" << ML - 5 << "' y1='" << y << "' x2='" << ML << "' y2='" << y
          << "' stroke='black'/>\n";
        s << "<text x='" << ML - 8 << "' y='" << y + 4 << "' text-anchor='end' font-size='11'>1e"
          << d << "</text>\n";
    }
    s << "<text x='" << (ML + W - MR) / 2 << "' y='" << H - 12
      << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
    s << "<text x='16' y='" << (MT + H - MB) / 2 << "' text-anchor='middle' font-size='12' "
      << "transform='rotate(-90 16 " << (MT + H - MB) / 2 << ")'>" << y_label << "</text>\n";

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::size_t ci = 0;
    double ly = MT + 14;
    for (const auto& [name, pts] : series) {
        const char* color = colors[ci % 5];
        s << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (const auto& [x, y] : pts)
            if (x > 0 && y > 0) s << px(x) << "," << py(y) << " ";
        s << "'/>\n";
        s << "<text x='" << W - MR - 6 << "' y='" << ly << "' text-anchor='end' font-size='11' fill='"
          << color << "'>" << name << "</text>\n";
        ly += 14;
        ++ci;
    }
    s << "</svg>\n";
    return s.str();
}

inline void save_loglog_svg(const std::string& path,
                            const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& series,
                            const std::string& title = "") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << loglog_svg(series, title);
}

}  // namespace fom

#endif  // FOM_SVG_HPP
