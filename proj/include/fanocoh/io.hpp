#ifndef FANOCOH_IO_HPP
#define FANOCOH_IO_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fanocoh/spectrum.hpp"

namespace fanocoh::io
{

class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// 17 significant digits, shortest %g-style form; round-trips every double.
std::string format_double(double v);

// "epsilon,intensity\n" followed by one "<eps>,<intensity>\n" line per sample.
std::string spectrum_csv(const Spectrum& s);
void write_spectrum_csv(const Spectrum& s, const std::filesystem::path& path);

// Throws FormatError on a bad header, malformed line or invalid samples.
// meta gets source = path and checksum = CRC-32 of the file bytes.
Spectrum parse_spectrum_csv(const std::string& text, const std::string& source = "<memory>");
Spectrum read_spectrum_csv(const std::filesystem::path& path);

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string table_csv(const Table& t);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
Table parse_table_csv(const std::string& text);

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;  // dots instead of a polyline
    bool dashed = false;
};

struct Plot
{
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
    std::optional<std::pair<double, double>> xrange;
    std::optional<std::pair<double, double>> yrange;
};

// Minimal deterministic SVG: frame, ticks, polylines and a legend.
std::string render_svg(const Plot& plot);

}  // namespace fanocoh::io

#endif  // FANOCOH_IO_HPP
