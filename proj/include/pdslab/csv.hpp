#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pdslab/errors.hpp"

namespace pdslab {

/// One metrics line: a training eval point plus the trial identity that
/// produced it. Non-iterative experiments emit a single row with step 0.
struct CsvRow {
  long long step = 0;
  long long samples_seen = 0;
  double train_loss = 0.0;
  double test_error_target = 0.0;
  double test_error_train_dist = 0.0;
  std::uint64_t seed = 0;
  double eta = 0.0;
  int d = 0;
  int k = 0;

  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "step,samples_seen,train_loss,test_error_target,test_error_train_dist,seed,eta,d,k";

namespace detail {

/// Shortest decimal form that parses back to the same double.
inline void append_double(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

template <class T>
[[nodiscard]] inline T parse_field(std::string_view field, std::string_view name) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  require(res.ec == std::errc{} && res.ptr == field.data() + field.size(), ErrorCode::decode,
          "bad csv field " + std::string(name) + ": '" + std::string(field) + "'");
  return value;
}

}  // namespace detail

[[nodiscard]] inline std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const CsvRow& r : rows) {
    out += std::to_string(r.step);
    out.push_back(',');
    out += std::to_string(r.samples_seen);
    out.push_back(',');
    detail::append_double(out, r.train_loss);
    out.push_back(',');
    detail::append_double(out, r.test_error_target);
    out.push_back(',');
    detail::append_double(out, r.test_error_train_dist);
    out.push_back(',');
    out += std::to_string(r.seed);
    out.push_back(',');
    detail::append_double(out, r.eta);
    out.push_back(',');
    out += std::to_string(r.d);
    out.push_back(',');
    out += std::to_string(r.k);
    out.push_back('\n');
  }
  return out;
}

/// Inverse of format_csv; the header line is mandatory and checked verbatim.
[[nodiscard]] inline std::vector<CsvRow> parse_csv(std::string_view text) {
  std::size_t pos = text.find('\n');
  require(pos != std::string_view::npos && text.substr(0, pos) == kCsvHeader, ErrorCode::decode,
          "csv header mismatch");
  std::vector<CsvRow> rows;
  ++pos;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    require(fields.size() == 9, ErrorCode::decode,
            "csv row needs 9 fields, got " + std::to_string(fields.size()));
    CsvRow r;
    r.step = detail::parse_field<long long>(fields[0], "step");
    r.samples_seen = detail::parse_field<long long>(fields[1], "samples_seen");
    r.train_loss = detail::parse_field<double>(fields[2], "train_loss");
    r.test_error_target = detail::parse_field<double>(fields[3], "test_error_target");
    r.test_error_train_dist = detail::parse_field<double>(fields[4], "test_error_train_dist");
    r.seed = detail::parse_field<std::uint64_t>(fields[5], "seed");
    r.eta = detail::parse_field<double>(fields[6], "eta");
    r.d = detail::parse_field<int>(fields[7], "d");
    r.k = detail::parse_field<int>(fields[8], "k");
    rows.push_back(r);
  }
  return rows;
}

inline void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::io, "cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  require(out.good(), ErrorCode::io, "write failed: " + path);
}

[[nodiscard]] inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io, "cannot open for reading: " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(!in.bad(), ErrorCode::io, "read failed: " + path);
  return content;
}

inline void emit_csv(const std::vector<CsvRow>& rows, const std::string& path) {
  write_text_file(path, format_csv(rows));
}

[[nodiscard]] inline std::vector<CsvRow> load_csv(const std::string& path) {
  return parse_csv(read_text_file(path));
}

}  // namespace pdslab
