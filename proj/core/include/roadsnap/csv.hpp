#ifndef ROADSNAP_CSV_HPP
#define ROADSNAP_CSV_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace roadsnap {

/// Shortest round-trip decimal form of a double ("50", "0.5", "1e-06").
/// All CSV writers go through this so that save(load(f)) == f byte-for-byte
/// for files the library itself produced.
std::string format_double(double v);

/// Splits one CSV line on ','. No quoting: none of the canonical formats
/// allows embedded commas (edge sequences inside a field use ';').
std::vector<std::string_view> split_csv(std::string_view line);

double parse_double(std::string_view field, const std::string& file, std::size_t line_no);
std::int64_t parse_int(std::string_view field, const std::string& file, std::size_t line_no);
std::uint32_t parse_u32(std::string_view field, const std::string& file, std::size_t line_no);

/// Reads a whole file; strips a trailing '\r' per line (LF is canonical but
/// CRLF input is tolerated). Throws ParseError if the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

void write_file(const std::string& path, const std::string& contents);

}  // namespace roadsnap

#endif  // ROADSNAP_CSV_HPP
