#pragma once

// Delimited tables with self-describing headers, content digests and
// minimal self-contained SVG plots.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chiralsim/config.hpp"

namespace chiralsim::io {

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    return h;
}

inline std::string hex(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

inline std::string config_digest(const RunConfig& c) { return hex(fnv1a(emit_config(c))); }

inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return exact(v);
}

struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::string> units;  ///< one per column; "-" when dimensionless
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Comma-separated, LF line endings. Comment lines carry the title, the units
/// of each column and the config digest.
inline std::string to_csv(const Table& t, const std::string& digest) {
    std::ostringstream os;
    os << "# " << t.title << "\n# units:";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? ", " : " ") << t.columns[i] << "=" << (i < t.units.size() ? t.units[i] : "-");
    os << "\n# config_digest: " << digest << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
    return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline void write_csv(const std::filesystem::path& path, const Table& t, const std::string& digest) {
    write_text(path, to_csv(t, digest));
}

// ---------------------------------------------------------------------------
// SVG

namespace svg_detail {

constexpr double W = 640, Hh = 480, L = 70, R = 20, T = 30, B = 50;

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

inline std::string header(const std::string& title) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << "</text>\n";
    return os.str();
}

inline std::string axes(double x0, double x1, double y0, double y1, const std::string& xl, const std::string& yl) {
    std::ostringstream os;
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << Hh - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << L << "\" y=\"" << Hh - B + 15 << "\">" << fmt(x0) << "</text>\n";
    os << "<text x=\"" << W - R << "\" y=\"" << Hh - B + 15 << "\" text-anchor=\"end\">" << fmt(x1) << "</text>\n";
    os << "<text x=\"" << L - 5 << "\" y=\"" << Hh - B << "\" text-anchor=\"end\">" << fmt(y0) << "</text>\n";
    os << "<text x=\"" << L - 5 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\">" << fmt(y1) << "</text>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << Hh - 12 << "\" text-anchor=\"middle\">" << xl << "</text>\n";
    os << "<text transform=\"translate(16," << (T + Hh - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << yl
       << "</text>\n";
    return os.str();
}

inline void range(const std::vector<double>& v, double& lo, double& hi) {
    lo = 1e300;
    hi = -1e300;
    for (double x : v)
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    if (lo > hi) lo = 0, hi = 1;
    if (lo == hi) lo -= 0.5, hi += 0.5;
}

inline double px(double x, double lo, double hi) { return L + (x - lo) / (hi - lo) * (W - L - R); }
inline double py(double y, double lo, double hi) { return Hh - B - (y - lo) / (hi - lo) * (Hh - T - B); }

} // namespace svg_detail

/// Scatter plot; points with highlight[i] set are drawn in red.
inline std::string svg_scatter(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::vector<bool>& highlight, const std::string& title, const std::string& xl,
                               const std::string& yl, bool log_y = false) {
    using namespace svg_detail;
    std::vector<double> yv = ys;
    if (log_y)
        for (double& y : yv) y = y > 0 ? std::log10(y) : std::nan("");
    double x0, x1, y0, y1;
    range(xs, x0, x1);
    range(yv, y0, y1);
    std::ostringstream os;
    os << header(title) << axes(x0, x1, y0, y1, xl, log_y ? "log10 " + yl : yl);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(yv[i]) || !std::isfinite(xs[i])) continue;
        const bool hl = i < highlight.size() && highlight[i];
        os << "<circle cx=\"" << fmt(px(xs[i], x0, x1)) << "\" cy=\"" << fmt(py(yv[i], y0, y1)) << "\" r=\"3\" fill=\""
           << (hl ? "crimson" : "steelblue") << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Heatmap of z[row][col] on a grey-to-blue scale, rows drawn bottom to top.
inline std::string svg_heatmap(const std::vector<std::vector<double>>& z, double x0, double x1, double y0, double y1,
                               const std::string& title, const std::string& xl, const std::string& yl) {
    using namespace svg_detail;
    std::vector<double> flat;
    for (const auto& r : z) flat.insert(flat.end(), r.begin(), r.end());
    double lo, hi;
    range(flat, lo, hi);
    std::ostringstream os;
    os << header(title) << axes(x0, x1, y0, y1, xl, yl);
    const std::size_t nr = z.size(), nc = nr ? z[0].size() : 0;
    const double cw = (W - L - R) / std::max<std::size_t>(nc, 1), ch = (Hh - T - B) / std::max<std::size_t>(nr, 1);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < z[r].size(); ++c) {
            const double v = z[r][c];
            const double u = std::isfinite(v) ? (v - lo) / (hi - lo) : 0.0;
            const int red = static_cast<int>(255 * (1 - u)), green = static_cast<int>(255 * (1 - 0.6 * u));
            os << "<rect x=\"" << fmt(L + c * cw) << "\" y=\"" << fmt(Hh - B - (r + 1) * ch) << "\" width=\""
               << fmt(cw + 0.5) << "\" height=\"" << fmt(ch + 0.5) << "\" fill=\""
               << (std::isfinite(v) ? "rgb(" + std::to_string(red) + "," + std::to_string(green) + ",255)" : "#ddd")
               << "\"/>\n";
        }
    os << "<text x=\"" << W - R << "\" y=\"" << T - 8 << "\" text-anchor=\"end\">range " << fmt(lo) << " .. "
       << fmt(hi) << "</text>\n</svg>\n";
    return os.str();
}

struct Series {
    std::string name;
    std::vector<double> xs, ys;
};

inline std::string svg_lines(const std::vector<Series>& series, const std::string& title, const std::string& xl,
                             const std::string& yl) {
    using namespace svg_detail;
    std::vector<double> ax, ay;
    for (const auto& s : series) {
        ax.insert(ax.end(), s.xs.begin(), s.xs.end());
        ay.insert(ay.end(), s.ys.begin(), s.ys.end());
    }
    double x0, x1, y0, y1;
    range(ax, x0, x1);
    range(ay, y0, y1);
    static const char* colors[] = {"steelblue", "crimson", "darkgreen", "darkorange", "purple"};
    std::ostringstream os;
    os << header(title) << axes(x0, x1, y0, y1, xl, yl);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % 5] << "\" points=\"";
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            if (std::isfinite(s.ys[i])) os << fmt(px(s.xs[i], x0, x1)) << "," << fmt(py(s.ys[i], y0, y1)) << " ";
        os << "\"/>\n<text x=\"" << L + 8 << "\" y=\"" << T + 16 + 14 * k << "\" fill=\"" << colors[k % 5] << "\">"
           << s.name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace chiralsim::io
