#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace multifrac {

/// Shortest decimal string that round-trips to the same double ("inf", "-inf", "nan" otherwise).
std::string format_double(double x);

/// Four magic bytes that open every binary dump.
inline constexpr char kDumpMagic[4] = {'M', 'F', 'D', '1'};

/// Binary float64 dump: 16-byte little-endian header (magic, uint32 scale, uint64 length)
/// followed by `length` little-endian doubles. Signals store scale 0.
void write_binary_dump(std::ostream &out, std::uint32_t scale, std::span<const double> values);

struct BinaryDump
{
    std::uint32_t scale = 0;
    std::vector<double> values;
};

/// Throws std::runtime_error on a bad magic or a truncated payload.
BinaryDump read_binary_dump(std::istream &in);

/// Two-column CSV with the given header names.
void write_xy_csv(std::ostream &out, const std::string &x_name, const std::string &y_name,
                  std::span<const double> xs, std::span<const double> ys);

/// Minimal SVG line plot: polylines and markers over linear axes.
class SvgPlot
{
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_line(std::string name, std::vector<double> xs, std::vector<double> ys, std::string colour);
    void add_markers(std::string name, std::vector<double> xs, std::vector<double> ys, std::string colour);

    /// Non-finite points are skipped.
    void write(std::ostream &out) const;

private:
    struct Series
    {
        std::string name;
        std::vector<double> xs;
        std::vector<double> ys;
        std::string colour;
        bool markers = false;
    };

    std::string title_;
    std::string x_label_;
    std::string y_label_;
    std::vector<Series> series_;
};

} // namespace multifrac
