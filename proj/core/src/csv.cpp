#include "drivol/csv.hpp"

#include <charconv>
#include <cstring>

#include "drivol/errors.hpp"

namespace drivol::csv {

namespace {
constexpr std::size_t kChunk = 1 << 20;
}

LineReader::LineReader(const std::filesystem::path& path)
    : in_(path, std::ios::binary) {
  if (!in_.is_open()) {
    throw MissingFileError(path.string());
  }
  buf_.resize(kChunk);
}

bool LineReader::refill() {
  // Keep the unread tail, then top the buffer back up.
  if (pos_ > 0) {
    std::memmove(buf_.data(), buf_.data() + pos_, end_ - pos_);
    end_ -= pos_;
    pos_ = 0;
  }
  if (end_ == buf_.size()) {
    buf_.resize(buf_.size() * 2);
  }
  in_.read(buf_.data() + end_, static_cast<std::streamsize>(buf_.size() - end_));
  const auto got = static_cast<std::size_t>(in_.gcount());
  end_ += got;
  if (got == 0) {
    eof_ = true;
  }
  return got > 0;
}

std::optional<std::string_view> LineReader::next() {
  while (true) {
    const char* base = buf_.data();
    const void* nl = std::memchr(base + pos_, '\n', end_ - pos_);
    if (nl != nullptr) {
      const auto at = static_cast<std::size_t>(static_cast<const char*>(nl) - base);
      std::string_view line(base + pos_, at - pos_);
      pos_ = at + 1;
      if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
      }
      ++line_;
      return line;
    }
    if (eof_) {
      if (pos_ == end_) {
        return std::nullopt;
      }
      std::string_view line(base + pos_, end_ - pos_);
      pos_ = end_;
      if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
      }
      ++line_;
      return line;
    }
    refill();
  }
}

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_double(std::string_view field) {
  field = trim(field);
  if (field.empty()) {
    return std::nullopt;
  }
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view field) {
  field = trim(field);
  if (field.empty()) {
    return std::nullopt;
  }
  std::int64_t v = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    return std::nullopt;
  }
  return v;
}

std::string format_double(double v) {
  std::string out;
  append_double(out, v);
  return out;
}

void append_double(std::string& buf, double v) {
  char tmp[32];
  const auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
  if (ec != std::errc{}) {
    throw IoError("failed to format double");
  }
  buf.append(tmp, ptr);
}

void append_int(std::string& buf, std::int64_t v) {
  char tmp[24];
  const auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
  if (ec != std::errc{}) {
    throw IoError("failed to format integer");
  }
  buf.append(tmp, ptr);
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace drivol::csv
