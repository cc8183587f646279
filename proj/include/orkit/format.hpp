#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "orkit/model.hpp"

namespace orkit {

// Decimal rendering used by every writer. The shortest string that parses
// back to the same double is used; if that needs more than `max_digits`
// significant digits it is rounded to `max_digits`. Integral values print
// without a decimal point and infinities as "inf"/"-inf".
struct NumberFormat {
  int max_digits = 17;
};

std::string format_number(double value, NumberFormat fmt = {});

// Appends the rendering to `out` without allocating a temporary string.
void append_number(std::string& out, double value, NumberFormat fmt = {});

// Parses a number written by format_number (also accepts a leading '+' and
// "infinity"). Returns false on malformed input.
bool parse_number(std::string_view text, double& value);

// CPLEX-style LP text. Rows are emitted in insertion order with duplicate
// terms merged; the objective line lists every column in issue order so a
// reader can recover column numbering. Returns the number of bytes written.
std::int64_t write_lp(const Model& m, std::ostream& out, NumberFormat fmt = {});

// Free-format MPS with one (row, value) pair per COLUMNS line.
std::int64_t write_mps(const Model& m, std::ostream& out, NumberFormat fmt = {});

std::string write_lp_string(const Model& m, NumberFormat fmt = {});
std::string write_mps_string(const Model& m, NumberFormat fmt = {});

// Reads back the LP dialect produced by write_lp. Throws ParseError with the
// offending line number.
Model read_lp(std::istream& in);
Model read_lp_string(std::string_view text);

}  // namespace orkit
