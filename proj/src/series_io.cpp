#include "rmts/series_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace rmts {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <Scalar T>
void write_impl(const SeriesData<T>& series, std::ostream& out) {
    series.validate();
    out << 't';
    for (std::size_t i = 1; i <= series.dim; ++i) {
        if constexpr (is_complex_v<T>)
            out << ",x" << i << "_re,x" << i << "_im";
        else
            out << ",x" << i;
    }
    out << '\n';
    for (std::size_t t = 0; t < series.length(); ++t) {
        out << t;
        for (std::size_t i = 0; i < series.dim; ++i) {
            if constexpr (is_complex_v<T>)
                out << ',' << format_double(series.values[t][i].real()) << ','
                    << format_double(series.values[t][i].imag());
            else
                out << ',' << format_double(series.values[t][i]);
        }
        out << '\n';
    }
    if (!out) throw Error("write_series: stream failure");
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("series line " + std::to_string(line_no) + ": non-numeric cell '" +
                         cell + "'");
    return value;
}

// Validates the header and reports the component count plus field.
std::pair<std::size_t, bool> parse_header(const std::string& line) {
    const auto cells = split_csv(line);
    if (cells.empty() || cells[0] != "t")
        throw ParseError("series line 1: header must start with 't'");
    if (cells.size() < 2) throw ParseError("series line 1: header has no value columns");
    const bool complex_field = cells[1] == "x1_re";
    const std::size_t per = complex_field ? 2 : 1;
    if ((cells.size() - 1) % per != 0)
        throw ParseError("series line 1: header mismatch");
    const std::size_t k = (cells.size() - 1) / per;
    for (std::size_t i = 0; i < k; ++i) {
        const std::string base = "x" + std::to_string(i + 1);
        if (complex_field) {
            if (cells[1 + 2 * i] != base + "_re" || cells[2 + 2 * i] != base + "_im")
                throw ParseError("series line 1: header mismatch at column " +
                                 std::to_string(2 + 2 * i));
        } else if (cells[1 + i] != base) {
            throw ParseError("series line 1: header mismatch at column " + std::to_string(2 + i));
        }
    }
    return {k, complex_field};
}

template <Scalar T>
SeriesData<T> read_rows(std::istream& in, std::size_t k) {
    SeriesData<T> series;
    series.dim = k;
    std::string line;
    std::size_t line_no = 1;
    const std::size_t per = is_complex_v<T> ? 2 : 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        const auto cells = split_csv(line);
        if (cells.size() != 1 + per * k)
            throw ParseError("series line " + std::to_string(line_no) + ": expected " +
                             std::to_string(1 + per * k) + " cells, got " +
                             std::to_string(cells.size()));
        const double t_val = parse_cell(cells[0], line_no);
        if (t_val != static_cast<double>(series.values.size()))
            throw ParseError("series line " + std::to_string(line_no) +
                             ": timestamp gap (expected t = " +
                             std::to_string(series.values.size()) + ")");
        Vector<T> row(k);
        for (std::size_t i = 0; i < k; ++i) {
            if constexpr (is_complex_v<T>)
                row[i] = Complex(parse_cell(cells[1 + 2 * i], line_no),
                                 parse_cell(cells[2 + 2 * i], line_no));
            else
                row[i] = parse_cell(cells[1 + i], line_no);
        }
        series.values.push_back(std::move(row));
    }
    if (series.length() < 2)
        throw ParseError("series has " + std::to_string(series.length()) +
                         " data rows, need at least 2");
    return series;
}

} // namespace

void write_series(const RealSeries& series, std::ostream& out) { write_impl(series, out); }
void write_series(const ComplexSeries& series, std::ostream& out) { write_impl(series, out); }

void write_series_file(const RealSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_series(series, out);
}

void write_series_file(const ComplexSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_series(series, out);
}

SeriesVariant read_series(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("series line 1: missing header");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    const auto [k, complex_field] = parse_header(header);
    if (complex_field) return read_rows<Complex>(in, k);
    return read_rows<double>(in, k);
}

SeriesVariant read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open series file '" + path + "'");
    return read_series(in);
}

RealSeries read_real_series_file(const std::string& path) {
    auto v = read_series_file(path);
    if (auto* real = std::get_if<RealSeries>(&v)) return std::move(*real);
    throw ParseError("series file '" + path + "' holds a complex series, expected real");
}

ComplexSeries read_complex_series_file(const std::string& path) {
    auto v = read_series_file(path);
    if (auto* cplx = std::get_if<ComplexSeries>(&v)) return std::move(*cplx);
    throw ParseError("series file '" + path + "' holds a real series, expected complex");
}

} // namespace rmts
