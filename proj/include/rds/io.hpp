#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rds/series.hpp"

namespace rds::io {

// Two-column CSV: header "t_name,v_name", LF line endings, doubles printed in
// shortest round-trip form (infinities as "inf"/"-inf").  read_series_csv
// parses the same format back, bit-exactly.
struct CsvSeries {
    std::string t_name;
    std::string v_name;
    Series points;
};

void write_series_csv(const std::string& path, const Series& s, const std::string& t_name,
                      const std::string& v_name);
CsvSeries read_series_csv(const std::string& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Minimal plot of a series against log10(t): one polyline on labelled axes.
// Entries with t < 1 or a non-finite value are omitted from the path.
void emit_svg(const std::string& path, const Series& s, const std::string& title);

// Extremes of a series over a time window [t_lo, t_hi); non-finite values are
// excluded from sup/inf but counted.
struct WindowStats {
    std::int64_t t_lo = 0;
    std::int64_t t_hi = 0;
    double sup = 0.0;
    double inf = 0.0;
    std::int64_t finite_count = 0;
    std::int64_t excluded = 0;
    double amplitude() const { return finite_count > 0 ? sup - inf : 0.0; }
};

WindowStats window_stats(const Series& s, std::int64_t t_lo, std::int64_t t_hi);

// Stats per decade window [10^d, 10^(d+1)) for d = d_lo .. d_hi inclusive.
std::vector<WindowStats> decade_windows(const Series& s, int d_lo, int d_hi);

// Flat key=value run manifest.  Writing is atomic: a temporary file in the
// same directory is renamed over the target, so a crash never leaves a
// truncated manifest.  Keys keep insertion order.
using Manifest = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const std::string& path, const Manifest& entries);
Manifest read_manifest(const std::string& path);

} // namespace rds::io
