#pragma once

// CSV serialization of trajectories.
//
// Real series:     header "t,x1,...,xk", one row per timestamp.
// Complex series:  header "t,x1_re,x1_im,...,xk_re,xk_im".
//
// Timestamps start at 0 and increase by 1 with no gaps. Values are written
// with 17 significant digits, so write-then-read reproduces every finite
// double bit for bit. Readers are strict: ragged rows, non-numeric cells,
// timestamp gaps, a malformed header, or fewer than 2 data rows raise
// ParseError with the offending line number.

#include <iosfwd>
#include <string>
#include <variant>

#include "rmts/model.hpp"

namespace rmts {

void write_series(const RealSeries& series, std::ostream& out);
void write_series(const ComplexSeries& series, std::ostream& out);
void write_series_file(const RealSeries& series, const std::string& path);
void write_series_file(const ComplexSeries& series, const std::string& path);

using SeriesVariant = std::variant<RealSeries, ComplexSeries>;

// Field is detected from the header (a trailing _re on the first value
// column selects the complex layout).
SeriesVariant read_series(std::istream& in);
SeriesVariant read_series_file(const std::string& path);

RealSeries read_real_series_file(const std::string& path);
ComplexSeries read_complex_series_file(const std::string& path);

} // namespace rmts
