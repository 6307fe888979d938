#include "rds/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace rds::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    return out;
}

const char* parse_int64(const char* first, const char* last, std::int64_t& v) {
    const auto r = std::from_chars(first, last, v);
    return r.ec == std::errc{} ? r.ptr : nullptr;
}

const char* parse_double(const char* first, const char* last, double& v) {
    const auto r = std::from_chars(first, last, v);
    return r.ec == std::errc{} ? r.ptr : nullptr;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_series_csv(const std::string& path, const Series& s, const std::string& t_name,
                      const std::string& v_name) {
    std::ofstream out = open_for_write(path);
    out << t_name << ',' << v_name << '\n';
    for (const SeriesPoint& p : s) out << p.t << ',' << format_double(p.value) << '\n';
    out.close();
    if (!out) fail(path, "write failed");
}

CsvSeries read_series_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    CsvSeries cs;
    std::string line;
    if (!std::getline(in, line)) fail(path, "missing header line");
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(path, "header is not two comma-separated names");
    cs.t_name = line.substr(0, comma);
    cs.v_name = line.substr(comma + 1);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const char* first = line.data();
        const char* last = line.data() + line.size();
        SeriesPoint p;
        const char* mid = parse_int64(first, last, p.t);
        if (mid == nullptr || mid == last || *mid != ',')
            fail(path, "bad time field on line " + std::to_string(lineno));
        const char* end = parse_double(mid + 1, last, p.value);
        if (end == nullptr || end != last)
            fail(path, "bad value field on line " + std::to_string(lineno));
        cs.points.push_back(p);
    }
    return cs;
}

void emit_svg(const std::string& path, const Series& s, const std::string& title) {
    constexpr double W = 800, H = 500, ML = 70, MR = 20, MT = 40, MB = 50;

    std::vector<std::pair<double, double>> pts; // (log10 t, value)
    for (const SeriesPoint& p : s)
        if (p.t >= 1 && std::isfinite(p.value))
            pts.emplace_back(std::log10(static_cast<double>(p.t)), p.value);

    double x_lo = 0, x_hi = 1, y_lo = -1, y_hi = 1;
    if (!pts.empty()) {
        x_lo = x_hi = pts.front().first;
        y_lo = y_hi = pts.front().second;
        for (const auto& [x, y] : pts) {
            x_lo = std::min(x_lo, x); x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y); y_hi = std::max(y_hi, y);
        }
        if (x_hi - x_lo < 1e-12) { x_lo -= 0.5; x_hi += 0.5; }
        if (y_hi - y_lo < 1e-12) { y_lo -= 0.5; y_hi += 0.5; }
    }
    const auto px = [&](double x) { return ML + (x - x_lo) / (x_hi - x_lo) * (W - ML - MR); };
    const auto py = [&](double y) { return H - MB - (y - y_lo) / (y_hi - y_lo) * (H - MT - MB); };

    std::ofstream out = open_for_write(path);
    char buf[160];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\">\n";
    out << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << xml_escape(title) << "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ML, H - MB, W - MR, H - MB);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ML, MT, ML, H - MB);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">log10(t)=%.4g</text>\n",
                  ML, H - MB + 20, x_lo);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"12\">%.4g</text>\n",
                  W - MR, H - MB + 20, x_hi);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"12\">%.4g</text>\n",
                  ML - 8, H - MB, y_lo);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"12\">%.4g</text>\n",
                  ML - 8, MT + 4, y_hi);
    out << buf;
    if (!pts.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(pts[i].first),
                          py(pts[i].second));
            out << buf;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    out.close();
    if (!out) fail(path, "write failed");
}

WindowStats window_stats(const Series& s, std::int64_t t_lo, std::int64_t t_hi) {
    if (t_hi <= t_lo) throw std::invalid_argument("window_stats: empty window");
    WindowStats w;
    w.t_lo = t_lo;
    w.t_hi = t_hi;
    for (const SeriesPoint& p : s) {
        if (p.t < t_lo || p.t >= t_hi) continue;
        if (!std::isfinite(p.value)) {
            w.excluded += 1;
            continue;
        }
        if (w.finite_count == 0) {
            w.sup = w.inf = p.value;
        } else {
            w.sup = std::max(w.sup, p.value);
            w.inf = std::min(w.inf, p.value);
        }
        w.finite_count += 1;
    }
    return w;
}

std::vector<WindowStats> decade_windows(const Series& s, int d_lo, int d_hi) {
    if (d_lo < 0 || d_hi < d_lo || d_hi > 17)
        throw std::invalid_argument("decade_windows: decade range must satisfy 0 <= lo <= hi <= 17");
    std::vector<WindowStats> out;
    std::int64_t lo = 1;
    for (int d = 0; d < d_lo; ++d) lo *= 10;
    for (int d = d_lo; d <= d_hi; ++d) {
        out.push_back(window_stats(s, lo, lo * 10));
        lo *= 10;
    }
    return out;
}

void write_manifest(const std::string& path, const Manifest& entries) {
    for (const auto& [k, v] : entries) {
        if (k.empty() || k.find('=') != std::string::npos || k.find('\n') != std::string::npos)
            fail(path, "manifest key '" + k + "' must be non-empty and free of '=' and newlines");
        if (v.find('\n') != std::string::npos)
            fail(path, "manifest value for '" + k + "' must not contain newlines");
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out = open_for_write(tmp);
        for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
        out.close();
        if (!out) fail(tmp, "write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(path, "atomic rename failed: " + ec.message());
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    Manifest m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            fail(path, "line " + std::to_string(lineno) + " is not key=value");
        m.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

} // namespace rds::io
