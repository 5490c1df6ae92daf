#include "squarepeg/svg.hpp"

#include <cmath>
#include <cstdio>

#include "squarepeg/io.hpp"

namespace squarepeg {

namespace {

constexpr double kPanel = 480;
constexpr double kMargin = 24;
constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    std::string s = buf;
    if (s == "-0.000")
        s = "0.000";
    return s;
}

// Maps model coordinates into a square panel, flipping y.
struct Frame {
    Point lo;
    double scale = 1;
    double x0 = 0;

    std::string operator()(const Point& p) const
    {
        return num(x0 + kMargin + scale * (p.x() - lo.x())) + ',' + num(kMargin + kPanel - scale * (p.y() - lo.y()));
    }
};

Frame fit(const Polygon& poly)
{
    Eigen::AlignedBox2d box;
    for (const Point& v : poly.vertices())
        box.extend(v);
    const Point size = box.sizes();
    Frame f;
    f.scale = kPanel / std::max(size.x(), size.y());
    // Center the shorter side.
    f.lo = box.min() - 0.5 * (Point::Constant(std::max(size.x(), size.y())) - size);
    return f;
}

std::string closed_path(const Frame& f, const std::vector<Point>& pts)
{
    std::string d = "M " + f(pts.front());
    for (std::size_t k = 1; k < pts.size(); ++k)
        d += " L " + f(pts[k]);
    return d + " Z";
}

void torus_panel(std::string& out, const std::vector<TorusCurve>& curves, double x0)
{
    const double side = kPanel;
    auto pt = [&](double s, double t) { return num(x0 + kMargin + side * s) + ',' + num(kMargin + side * (1 - t)); };
    out += "  <g id=\"torus\">\n";
    out += "    <rect x=\"" + num(x0 + kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + num(side) + "\" height=\"" +
           num(side) + "\" fill=\"none\" stroke=\"#888888\"/>\n";
    out += "    <line x1=\"" + num(x0 + kMargin) + "\" y1=\"" + num(kMargin + side) + "\" x2=\"" + num(x0 + kMargin + side) +
           "\" y2=\"" + num(kMargin) + "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const TorusCurve& curve = curves[c];
        const double L = curve.period;
        if (!(L > 0) || curve.points.size() < 2)
            continue;
        // Split the lifted polyline wherever it leaves the fundamental square.
        std::vector<std::vector<std::pair<double, double>>> runs(1);
        auto cell = [&](const TorusPoint& p) { return std::pair(std::floor(p.s / L), std::floor(p.t / L)); };
        for (std::size_t k = 0; k < curve.points.size(); ++k) {
            const TorusPoint& p = curve.points[k];
            if (k > 0) {
                const TorusPoint& q = curve.points[k - 1];
                const auto cq = cell(q);
                if (cell(p) != cq) {
                    // Crossing point of q -> p with the cell boundary, drawn on both sides.
                    double lo = 0, hi = 1;
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const TorusPoint m{q.s + mid * (p.s - q.s), q.t + mid * (p.t - q.t)};
                        (cell(m) == cq ? lo : hi) = mid;
                    }
                    const TorusPoint m{q.s + lo * (p.s - q.s), q.t + lo * (p.t - q.t)};
                    runs.back().emplace_back(m.s / L - cq.first, m.t / L - cq.second);
                    const auto cp = cell(p);
                    runs.emplace_back();
                    runs.back().emplace_back(m.s / L - cp.first, m.t / L - cp.second);
                }
            }
            const auto cp = cell(p);
            runs.back().emplace_back(p.s / L - cp.first, p.t / L - cp.second);
        }
        const char* color = kPalette[c % std::size(kPalette)];
        for (const auto& run : runs) {
            if (run.size() < 2)
                continue;
            out += "    <polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t k = 0; k < run.size(); ++k)
                out += (k ? " " : "") + pt(std::clamp(run[k].first, 0.0, 1.0), std::clamp(run[k].second, 0.0, 1.0));
            out += "\"/>\n";
        }
    }
    out += "  </g>\n";
}

}  // namespace

std::string render_svg(const Polygon& poly, const std::vector<InscribedSquare>& squares,
                       const std::vector<TorusCurve>* curves)
{
    const double height = kPanel + 2 * kMargin;
    const double width = curves ? 2 * height : height;
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + ' ' + num(height) + "\">\n";
    const Frame f = fit(poly);
    out += "  <path id=\"polygon\" d=\"" + closed_path(f, poly.vertices()) +
           "\" fill=\"#f4f4f4\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    for (std::size_t k = 0; k < squares.size(); ++k) {
        std::vector<Point> v;
        for (int i = 0; i < 4; ++i)
            v.push_back(squares[k].square.vertex(i));
        out += "  <path id=\"square" + std::to_string(k) + "\" d=\"" + closed_path(f, v) + "\" fill=\"none\" stroke=\"" +
               kPalette[k % std::size(kPalette)] + "\" stroke-width=\"1.5\"/>\n";
    }
    if (curves)
        torus_panel(out, *curves, height);
    out += "</svg>\n";
    return out;
}

void render_svg(const Polygon& poly, const std::vector<InscribedSquare>& squares,
                const std::vector<TorusCurve>* curves, const std::string& path)
{
    write_file(path, render_svg(poly, squares, curves));
}

}  // namespace squarepeg
