#include "fanocoh/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include <boost/crc.hpp>

namespace fanocoh::io
{

namespace
{

constexpr const char* spectrum_header = "epsilon,intensity";

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty())
        lines.pop_back();
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r')
            l.pop_back();
    return lines;
}

double parse_number(const std::string& field, std::size_t line)
{
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || field.empty())
        throw FormatError("line " + std::to_string(line) + ": not a number: '" + field + "'");
    return v;
}

std::string short_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string coord(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::vector<double> nice_ticks(double lo, double hi)
{
    const double span = hi - lo;
    if (!(span > 0.0))
        return {lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    {
        step = m * mag;
        if (step >= raw)
            break;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return ticks;
}

}  // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string spectrum_csv(const Spectrum& s)
{
    std::string out = spectrum_header;
    out += '\n';
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        out += format_double(s.epsilon()[i]);
        out += ',';
        out += format_double(s.intensity()[i]);
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f)
        throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_spectrum_csv(const Spectrum& s, const std::filesystem::path& path)
{
    write_text(path, spectrum_csv(s));
}

Spectrum parse_spectrum_csv(const std::string& text, const std::string& source)
{
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front() != spectrum_header)
        throw FormatError(source + ": expected header '" + spectrum_header + "'");
    std::vector<double> eps, intensity;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const auto fields = split(lines[i], ',');
        if (fields.size() != 2)
            throw FormatError(source + ": line " + std::to_string(i + 1) + ": expected 2 fields");
        eps.push_back(parse_number(fields[0], i + 1));
        intensity.push_back(parse_number(fields[1], i + 1));
    }

    boost::crc_32_type crc;
    crc.process_bytes(text.data(), text.size());
    char hex[16];
    std::snprintf(hex, sizeof(hex), "%08x", static_cast<unsigned>(crc.checksum()));

    try
    {
        return Spectrum(std::move(eps), std::move(intensity), {{"source", source}, {"checksum", hex}});
    }
    catch (const std::invalid_argument& e)
    {
        throw FormatError(source + ": " + e.what());
    }
}

Spectrum read_spectrum_csv(const std::filesystem::path& path)
{
    return parse_spectrum_csv(read_text(path), path.string());
}

std::string table_csv(const Table& t)
{
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c)
    {
        if (c)
            out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            if (c)
                out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

Table parse_table_csv(const std::string& text)
{
    const auto lines = lines_of(text);
    if (lines.empty())
        throw FormatError("empty table");
    Table t;
    t.columns = split(lines.front(), ',');
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const auto fields = split(lines[i], ',');
        if (fields.size() != t.columns.size())
            throw FormatError("line " + std::to_string(i + 1) + ": field count mismatch");
        std::vector<double> row;
        for (const auto& f : fields)
            row.push_back(parse_number(f, i + 1));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string render_svg(const Plot& plot)
{
    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 160, top = 40, bottom = 55;
    constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& s : plot.series)
    {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
        {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (plot.xrange)
        std::tie(x_lo, x_hi) = *plot.xrange;
    if (plot.yrange)
        std::tie(y_lo, y_hi) = *plot.yrange;
    if (!std::isfinite(x_lo) || !(x_hi > x_lo))
        x_lo = 0, x_hi = 1;
    if (!std::isfinite(y_lo) || !(y_hi > y_lo))
        y_lo = std::isfinite(y_lo) ? y_lo - 0.5 : 0.0, y_hi = y_lo + 1.0;

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << coord(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << xml_escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << coord(left) << "\" y=\"" << coord(top) << "\" width=\"" << coord(pw) << "\" height=\""
      << coord(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : nice_ticks(x_lo, x_hi))
    {
        const double x = px(t);
        o << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(top + ph) << "\" x2=\"" << coord(x) << "\" y2=\""
          << coord(top + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << coord(x) << "\" y=\"" << coord(top + ph + 18)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << short_num(t) << "</text>\n";
    }
    for (double t : nice_ticks(y_lo, y_hi))
    {
        const double y = py(t);
        o << "<line x1=\"" << coord(left - 5) << "\" y1=\"" << coord(y) << "\" x2=\"" << coord(left) << "\" y2=\""
          << coord(y) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << coord(left - 8) << "\" y=\"" << coord(y + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << short_num(t) << "</text>\n";
    }
    o << "<text x=\"" << coord(left + pw / 2) << "\" y=\"" << coord(height - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(plot.xlabel)
      << "</text>\n";
    o << "<text x=\"18\" y=\"" << coord(top + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 18 " << coord(top + ph / 2) << ")\">" << xml_escape(plot.ylabel)
      << "</text>\n";

    o << "<defs><clipPath id=\"plot-area\"><rect x=\"" << coord(left) << "\" y=\"" << coord(top) << "\" width=\""
      << coord(pw) << "\" height=\"" << coord(ph) << "\"/></clipPath></defs>\n";
    std::ostringstream legend;
    for (std::size_t k = 0; k < plot.series.size(); ++k)
    {
        const auto& s = plot.series[k];
        const char* color = palette[k % palette.size()];
        o << "<g clip-path=\"url(#plot-area)\">\n";
        if (s.markers)
        {
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
                o << "<circle cx=\"" << coord(px(s.x[i])) << "\" cy=\"" << coord(py(s.y[i])) << "\" r=\"3.5\" fill=\""
                  << color << "\"/>\n";
        }
        else
        {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
            if (s.dashed)
                o << " stroke-dasharray=\"6 4\"";
            o << " points=\"";
            bool first = true;
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                    continue;
                if (!first)
                    o << ' ';
                o << coord(px(s.x[i])) << ',' << coord(py(s.y[i]));
                first = false;
            }
            o << "\"/>\n";
        }
        o << "</g>\n";
        const double ly = top + 14 + 18 * static_cast<double>(k);
        legend << "<line x1=\"" << coord(left + pw + 12) << "\" y1=\"" << coord(ly) << "\" x2=\"" << coord(left + pw + 32)
          << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        legend << "<text x=\"" << coord(left + pw + 38) << "\" y=\"" << coord(ly + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label) << "</text>\n";
    }
    o << legend.str() << "</svg>\n";
    return o.str();
}

}  // namespace fanocoh::io
