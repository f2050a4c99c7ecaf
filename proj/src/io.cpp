#include "multifrac/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace multifrac {

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

namespace {

std::string tick_label(double x)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 4);
    return std::string(buf.data(), res.ptr);
}

template <typename T>
void put_le(std::ostream &out, T value)
{
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i)
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream &in)
{
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char *>(bytes.data()), bytes.size());
    if (!in) throw std::runtime_error("binary dump: truncated input");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
    return value;
}

} // namespace

void write_binary_dump(std::ostream &out, std::uint32_t scale, std::span<const double> values)
{
    out.write(kDumpMagic, sizeof(kDumpMagic));
    put_le<std::uint32_t>(out, scale);
    put_le<std::uint64_t>(out, values.size());
    for (double v : values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

BinaryDump read_binary_dump(std::istream &in)
{
    char magic[4] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kDumpMagic, sizeof(magic)) != 0)
        throw std::runtime_error("binary dump: bad magic");
    BinaryDump dump;
    dump.scale = get_le<std::uint32_t>(in);
    const auto length = get_le<std::uint64_t>(in);
    dump.values.reserve(static_cast<std::size_t>(length));
    for (std::uint64_t i = 0; i < length; ++i)
        dump.values.push_back(std::bit_cast<double>(get_le<std::uint64_t>(in)));
    return dump;
}

void write_xy_csv(std::ostream &out, const std::string &x_name, const std::string &y_name,
                  std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size()) throw std::invalid_argument("write_xy_csv: column length mismatch");
    out << x_name << ',' << y_name << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) out << format_double(xs[i]) << ',' << format_double(ys[i]) << '\n';
}

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label))
{
}

void SvgPlot::add_line(std::string name, std::vector<double> xs, std::vector<double> ys, std::string colour)
{
    series_.push_back({std::move(name), std::move(xs), std::move(ys), std::move(colour), false});
}

void SvgPlot::add_markers(std::string name, std::vector<double> xs, std::vector<double> ys, std::string colour)
{
    series_.push_back({std::move(name), std::move(xs), std::move(ys), std::move(colour), true});
}

void SvgPlot::write(std::ostream &out) const
{
    constexpr double width = 640, height = 480, margin = 60;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series &s : series_) {
        for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            x0 = std::min(x0, s.xs[i]);
            x1 = std::max(x1, s.xs[i]);
            y0 = std::min(y0, s.ys[i]);
            y1 = std::max(y1, s.ys[i]);
        }
    }
    if (!(x1 >= x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    const auto py = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title_
        << "</text>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">" << x_label_
        << "</text>\n";
    out << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
        << ")\" text-anchor=\"middle\">" << y_label_ << "</text>\n";
    out << "<text x=\"" << margin << "\" y=\"" << height - margin + 18 << "\" text-anchor=\"middle\">"
        << tick_label(x0) << "</text>\n";
    out << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 18 << "\" text-anchor=\"middle\">"
        << tick_label(x1) << "</text>\n";
    out << "<text x=\"" << margin - 6 << "\" y=\"" << height - margin << "\" text-anchor=\"end\">"
        << tick_label(y0) << "</text>\n";
    out << "<text x=\"" << margin - 6 << "\" y=\"" << margin + 4 << "\" text-anchor=\"end\">" << tick_label(y1)
        << "</text>\n";

    double legend_y = margin;
    for (const Series &s : series_) {
        if (s.markers) {
            for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
                if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
                out << "<circle cx=\"" << px(s.xs[i]) << "\" cy=\"" << py(s.ys[i]) << "\" r=\"3\" fill=\""
                    << s.colour << "\"/>\n";
            }
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" points=\"";
            for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
                if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
                out << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
            }
            out << "\"/>\n";
        }
        out << "<text x=\"" << width - margin - 4 << "\" y=\"" << legend_y << "\" text-anchor=\"end\" fill=\""
            << s.colour << "\">" << s.name << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
}

} // namespace multifrac
