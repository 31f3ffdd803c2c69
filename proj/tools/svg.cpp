#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mathieu/errors.hpp"

namespace mathieu::cli {

namespace {

constexpr double kLeft = 72, kRight = 16, kTop = 30, kBottom = 48;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
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

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

struct Frame {
    double x0, x1, y0, y1;  // data range (y in log10 units when log_y)
    double w, h;
    bool log_y;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (w - kLeft - kRight); }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return kTop + (y1 - v) / (y1 - y0) * (h - kTop - kBottom);
    }
    bool drawable(double y) const { return std::isfinite(y) && (!log_y || y >= std::pow(10.0, y0)); }
};

Frame make_frame(const PlotSpec& spec) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    std::size_t points = 0;
    auto take = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
        for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i) {
            if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
            if (spec.log_y && ys[i] <= 0.0) continue;
            xmin = std::min(xmin, xs[i]);
            xmax = std::max(xmax, xs[i]);
            ymin = std::min(ymin, ys[i]);
            ymax = std::max(ymax, ys[i]);
            ++points;
        }
    };
    for (const auto& p : spec.polygons) take(p.x, p.y);
    for (const auto& s : spec.series) take(s.x, s.y);
    if (points == 0) throw EmptyInput("emit_svg: nothing to draw");

    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    Frame f{xmin, xmax, 0, 0, static_cast<double>(spec.width), static_cast<double>(spec.height), spec.log_y};
    if (spec.log_y) {
        f.y1 = std::ceil(std::log10(ymax) + 1e-9);
        f.y0 = std::floor(std::max(std::log10(ymin), std::log10(ymax * spec.log_floor)));
        if (f.y1 <= f.y0) f.y1 = f.y0 + 1;
    } else {
        if (ymax == ymin) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double pad = 0.05 * (ymax - ymin);
        f.y0 = ymin - pad;
        f.y1 = ymax + pad;
    }
    return f;
}

void render_body(std::ostringstream& out, const PlotSpec& spec) {
    const Frame f = make_frame(spec);
    const double right = f.w - kRight, bottom = f.h - kBottom;

    out << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(f.w / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(spec.title) << "</text>\n";

    // Axes and ticks.
    out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">"
        << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(right - kLeft)
        << "\" height=\"" << num(bottom - kTop) << "\"/></g>\n";
    out << "<g font-size=\"11\" fill=\"#222\">\n";
    const double xstep = nice_step(f.x1 - f.x0, 6);
    for (double x = std::ceil(f.x0 / xstep) * xstep; x <= f.x1 + 1e-9 * xstep; x += xstep) {
        const double tick = std::abs(x) < 1e-12 * xstep ? 0.0 : x;
        out << "<line x1=\"" << num(f.px(tick)) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(f.px(tick))
            << "\" y2=\"" << num(bottom + 4) << "\" stroke=\"#444\"/>"
            << "<text x=\"" << num(f.px(tick)) << "\" y=\"" << num(bottom + 16) << "\" text-anchor=\"middle\">"
            << label_num(tick) << "</text>\n";
    }
    if (f.log_y) {
        const int span = static_cast<int>(f.y1 - f.y0);
        const int every = std::max(1, span / 8);
        for (int k = static_cast<int>(f.y0); k <= static_cast<int>(f.y1); k += every) {
            const double y = f.py(std::pow(10.0, k));
            out << "<line x1=\"" << num(kLeft - 4) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft) << "\" y2=\""
                << num(y) << "\" stroke=\"#444\"/>"
                << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e" << k
                << "</text>\n";
        }
    } else {
        const double ystep = nice_step(f.y1 - f.y0, 6);
        for (double y = std::ceil(f.y0 / ystep) * ystep; y <= f.y1; y += ystep) {
            const double tick = std::abs(y) < 1e-12 * ystep ? 0.0 : y;
            out << "<line x1=\"" << num(kLeft - 4) << "\" y1=\"" << num(f.py(tick)) << "\" x2=\"" << num(kLeft)
                << "\" y2=\"" << num(f.py(tick)) << "\" stroke=\"#444\"/>"
                << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(f.py(tick) + 4) << "\" text-anchor=\"end\">"
                << label_num(tick) << "</text>\n";
        }
    }
    out << "<text x=\"" << num((kLeft + right) / 2) << "\" y=\"" << num(f.h - 10)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(spec.x_label) << "</text>\n";
    out << "<text transform=\"translate(14," << num((kTop + bottom) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << escape(spec.y_label) << "</text>\n";
    out << "</g>\n";

    out << "<g>\n";
    for (const auto& p : spec.polygons) {
        out << "<polygon fill=\"" << p.fill << "\" fill-opacity=\"" << num(p.opacity) << "\" stroke=\"" << p.fill
            << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < std::min(p.x.size(), p.y.size()); ++i) {
            if (!f.drawable(p.y[i])) continue;
            out << num(f.px(p.x[i])) << ',' << num(f.py(p.y[i])) << ' ';
        }
        out << "\"/>\n";
    }
    for (const auto& s : spec.series) {
        const std::string dash = s.dashed ? " stroke-dasharray=\"6,4\"" : "";
        if (s.kind == Series::Kind::Markers) {
            out << "<g fill=\"" << s.color << "\">";
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
                if (f.drawable(s.y[i]))
                    out << "<circle cx=\"" << num(f.px(s.x[i])) << "\" cy=\"" << num(f.py(s.y[i]))
                        << "\" r=\"2\"/>";
            out << "</g>\n";
            continue;
        }
        // Break the path wherever a point is not drawable (e.g. zero on a log axis).
        out << "<path fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"" << dash << " d=\"";
        bool pen_down = false;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!f.drawable(s.y[i])) {
                pen_down = false;
                continue;
            }
            out << (pen_down ? 'L' : 'M') << num(f.px(s.x[i])) << ',' << num(f.py(s.y[i])) << ' ';
            if (s.kind == Series::Kind::Steps && i + 1 < s.x.size())
                out << 'L' << num(f.px(s.x[i + 1])) << ',' << num(f.py(s.y[i])) << ' ';
            pen_down = true;
        }
        out << "\"/>\n";
    }
    out << "</g>\n";

    // Legend.
    std::size_t entries = 0;
    for (const auto& p : spec.polygons) entries += !p.label.empty();
    for (const auto& s : spec.series) entries += !s.label.empty();
    if (entries == 0) return;
    const double lx = right - 176;
    out << "<g font-size=\"11\">\n";
    out << "<rect x=\"" << num(lx - 6) << "\" y=\"" << num(kTop + 4) << "\" width=\"178\" height=\""
        << num(15.0 * static_cast<double>(entries) + 8) << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#bbb\"/>\n";
    std::size_t row = 0;
    auto legend_row = [&](const std::string& label, const std::string& color, bool dashed, int symbol) {
        if (label.empty()) return;
        const double y = kTop + 18 + 15.0 * static_cast<double>(row++);
        if (symbol == 1)
            out << "<rect x=\"" << num(lx) << "\" y=\"" << num(y - 8) << "\" width=\"18\" height=\"10\" fill=\""
                << color << "\" fill-opacity=\"0.35\"/>";
        else if (symbol == 2)
            out << "<circle cx=\"" << num(lx + 9) << "\" cy=\"" << num(y - 3) << "\" r=\"2.5\" fill=\"" << color
                << "\"/>";
        else
            out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(y - 3) << "\" x2=\"" << num(lx + 18) << "\" y2=\""
                << num(y - 3) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
                << (dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>";
        out << "<text x=\"" << num(lx + 24) << "\" y=\"" << num(y) << "\">" << escape(label) << "</text>\n";
    };
    for (const auto& p : spec.polygons) legend_row(p.label, p.fill, false, 1);
    for (const auto& s : spec.series) legend_row(s.label, s.color, s.dashed, s.kind == Series::Kind::Markers ? 2 : 0);
    out << "</g>\n";
}

}  // namespace

std::string emit_svg(const PlotSpec& spec) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\">\n";
    render_body(out, spec);
    out << "</svg>\n";
    return out.str();
}

std::string emit_svg_grid(const std::vector<PlotSpec>& panels, int columns) {
    if (panels.empty()) throw EmptyInput("emit_svg_grid: no panels");
    require(columns >= 1, "emit_svg_grid: columns must be >= 1");
    const int w = panels.front().width, h = panels.front().height;
    const int rows = (static_cast<int>(panels.size()) + columns - 1) / columns;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * columns << "\" height=\"" << h * rows
        << "\" viewBox=\"0 0 " << w * columns << ' ' << h * rows << "\" font-family=\"sans-serif\">\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const int c = static_cast<int>(i) % columns, r = static_cast<int>(i) / columns;
        out << "<g transform=\"translate(" << c * w << ',' << r * h << ")\">\n";
        render_body(out, panels[i]);
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace mathieu::cli
