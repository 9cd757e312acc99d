#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mrc {

/// Comma-separated output with `#`-prefixed metadata lines. Reals are written
/// with 9 significant digits so files are byte-stable for identical inputs.
class CsvWriter {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit CsvWriter(std::ostream& out) : out_(out) {}

  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
  }

  void meta(std::string_view key, std::string_view value) { out_ << "# " << key << '=' << value << '\n'; }
  void meta(std::string_view key, double value) { meta(key, format(value)); }

  void header(const std::vector<std::string>& columns) {
    write_line(columns);
  }

  void row(const std::vector<Cell>& cells) {
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (const auto& c : cells) {
      if (const auto* d = std::get_if<double>(&c)) {
        text.push_back(format(*d));
      } else if (const auto* i = std::get_if<std::int64_t>(&c)) {
        text.push_back(std::to_string(*i));
      } else {
        text.push_back(std::get<std::string>(c));
      }
    }
    write_line(text);
    ++rows_;
  }

  std::size_t rows() const noexcept { return rows_; }

 private:
  void write_line(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::ostream& out_;
  std::size_t rows_ = 0;
};

}  // namespace mrc
