#pragma once

// Minimal CSV machinery tuned for multi-million-row trajectory files:
// a chunked line reader plus from_chars/to_chars number conversion.
// Fields are plain (no quoting); rounD-style files never quote.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drivol::csv {

// Streams a file line by line without loading it whole. The returned view is
// valid until the next call to next().
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);

  // nullopt at end of file. Strips trailing '\r'.
  std::optional<std::string_view> next();

  // 1-based number of the line most recently returned.
  std::size_t line_number() const noexcept { return line_; }

 private:
  bool refill();

  std::ifstream in_;
  std::string buf_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::size_t line_ = 0;
};

// Splits on ',' into out (cleared first). Empty input yields one empty field.
void split_fields(std::string_view line, std::vector<std::string_view>& out);

// Strict numeric parsing: the whole (space-trimmed) field must be consumed.
std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

// Shortest round-trip decimal form, deterministic across runs.
std::string format_double(double v);
void append_double(std::string& buf, double v);
void append_int(std::string& buf, std::int64_t v);

std::string_view trim(std::string_view s);

// Replaces the file with content; throws IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace drivol::csv
