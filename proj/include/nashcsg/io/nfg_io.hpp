#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nashcsg/model/nfg.hpp"

namespace nashcsg {

// Text format, one game per file ('#' starts a comment):
//   players n
//   actions i a_1 a_2 ...        (one line per player, i = 1..n)
//   u a_1 ... a_n v_1 ... v_n    (one line per joint action)
// Values are decimals or rationals p/q. Throws ModelError with the line
// number on malformed input, duplicates, or missing joint actions.
NormalFormGame parse_nfg(const std::string& text);
NormalFormGame load_nfg(const std::string& path);
std::string write_nfg(const NormalFormGame& game);

// Exact parse of a decimal or p/q rational.
double parse_number(const std::string& token);

// RFC 4180 CSV: fields containing ',', '"' or line breaks are quoted, quotes doubled.
std::string csv_field(const std::string& value);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
// Number formatted with 12 significant digits for CSV cells.
std::string csv_number(double value);

}  // namespace nashcsg
