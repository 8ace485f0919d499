#include "eitsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "eitsim/errors.hpp"

namespace eitsim {

namespace {

constexpr double width = 720.0;
constexpr double height = 440.0;
constexpr double left = 80.0;
constexpr double right = 170.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v, int prec = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string tick(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s)
{
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

} // namespace

std::string emit_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes)
{
    if (series.empty())
        throw ContractError("no series to plot");
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw ContractError("series x and y lengths differ: " + s.label);
        if (s.x.empty())
            throw ContractError("empty series: " + s.label);
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]))
                continue;
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, s.y[k]);
            y1 = std::max(y1, s.y[k]);
        }
    }
    if (!std::isfinite(x0) || !std::isfinite(y0))
        throw ContractError("no finite points to plot");
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width, 0) + "\" height=\"" + num(height, 0)
         + "\" viewBox=\"0 0 " + num(width, 0) + " " + num(height, 0) + "\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!axes.title.empty())
        o += "<text x=\"" + num(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
             + escape(axes.title) + "</text>\n";
    o += "<g stroke=\"black\" stroke-width=\"1\">\n";
    o += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(left + pw) + "\" y2=\"" + num(top + ph) + "\"/>\n";
    o += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(top + ph) + "\"/>\n";
    o += "</g>\n<g font-size=\"11\" font-family=\"sans-serif\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5.0;
        const double yv = y0 + (y1 - y0) * k / 5.0;
        o += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(px(xv)) + "\" y2=\""
             + num(top + ph + 5) + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" + tick(xv) + "</text>\n";
        o += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(left) + "\" y2=\"" + num(py(yv))
             + "\" stroke=\"black\"/>\n";
        o += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + tick(yv) + "</text>\n";
    }
    o += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 15) + "\" text-anchor=\"middle\" font-size=\"13\">"
         + escape(axes.x_label) + "</text>\n";
    o += "<text transform=\"translate(20," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">"
         + escape(axes.y_label) + "</text>\n";
    o += "</g>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % std::size(palette)];
        o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]))
                continue;
            o += (first ? "" : " ") + num(px(s.x[k])) + "," + num(py(s.y[k]));
            first = false;
        }
        o += "\"/>\n";
    }
    o += "<g font-size=\"12\" font-family=\"sans-serif\">\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double ly = top + 10.0 + 20.0 * static_cast<double>(i);
        const double lx = left + pw + 15.0;
        o += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 25) + "\" y2=\"" + num(ly) + "\" stroke=\""
             + palette[i % std::size(palette)] + "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" + escape(series[i].label) + "</text>\n";
    }
    o += "</g>\n</svg>\n";
    return o;
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out)
        throw IoError("write failed: " + path);
}

} // namespace eitsim
