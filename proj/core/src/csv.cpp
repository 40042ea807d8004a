#include "roadsnap/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "roadsnap/types.hpp"

namespace roadsnap {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

namespace {

[[noreturn]] void fail(std::string_view field, const char* what, const std::string& file,
                       std::size_t line_no) {
  std::ostringstream msg;
  msg << file << ":" << line_no << ": cannot parse '" << field << "' as " << what;
  throw ParseError(msg.str());
}

}  // namespace

double parse_double(std::string_view field, const std::string& file, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    fail(field, "a number", file, line_no);
  return v;
}

std::int64_t parse_int(std::string_view field, const std::string& file, std::size_t line_no) {
  std::int64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    fail(field, "an integer", file, line_no);
  return v;
}

std::uint32_t parse_u32(std::string_view field, const std::string& file, std::size_t line_no) {
  std::uint32_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    fail(field, "a non-negative integer", file, line_no);
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << contents;
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace roadsnap
