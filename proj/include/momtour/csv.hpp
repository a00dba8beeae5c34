#ifndef MOMTOUR_CSV_HPP
#define MOMTOUR_CSV_HPP

#include <string>
#include <vector>

namespace momtour {

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);

/// Nearest-rank quantile: element of rank ceil(q * M) (1-based) of the
/// sorted values, q in (0, 1]. Throws on empty input.
double nearest_rank_quantile(std::vector<double> values, double q);

/// Split a CSV line on commas (no quoting; fields in this project never
/// contain commas).
std::vector<std::string> split_csv_line(const std::string& line);

/// FNV-1a 64-bit hash of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

}  // namespace momtour

#endif  // MOMTOUR_CSV_HPP
