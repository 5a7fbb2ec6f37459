#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "excidyn/errors.hpp"
#include "excidyn/version.hpp"

namespace excidyn {

// Locale-independent decimal formatting at a fixed 12 significant digits.
// Output bytes depend only on the value, never on environment state.
inline std::string format_real(double v, int significant_digits = 12) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general,
                                 significant_digits);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

// Write-temp-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("rename to '" + path.string() + "' failed: " + ec.message());
}

// CSV assembler. Every file starts with comment lines naming the artifact
// version and the column units.
class CsvBuilder {
 public:
  CsvBuilder(const std::string& units_note,
             const std::vector<std::string>& columns) {
    body_ += "# excidyn ";
    body_ += version_string;
    body_ += "\n# units: ";
    body_ += units_note;
    body_ += "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) body_ += ",";
      body_ += columns[i];
    }
    body_ += "\n";
  }

  void add_row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) body_ += ",";
      body_ += format_real(values[i]);
    }
    body_ += "\n";
  }

  void add_mixed_row(const std::string& label, double t, double value) {
    body_ += format_real(t);
    body_ += ",";
    body_ += label;
    body_ += ",";
    body_ += format_real(value);
    body_ += "\n";
  }

  const std::string& str() const { return body_; }

 private:
  std::string body_;
};

}  // namespace excidyn
