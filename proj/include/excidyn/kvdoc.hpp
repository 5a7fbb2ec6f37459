#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "excidyn/errors.hpp"

namespace excidyn::kv {

// Line-oriented key/value document:
//
//   # comment
//   key: scalar value
//   list_key: a, b, c
//   block_key:
//     row one
//     row two
//
// A `key:` line with an empty remainder opens a block; subsequent indented
// lines belong to it. Line numbers are retained for diagnostics.

struct BlockRow {
  int line = 0;
  std::string text;
};

struct Entry {
  std::string key;
  int line = 0;
  bool is_block = false;
  std::string scalar;          // valid when !is_block
  std::vector<BlockRow> rows;  // valid when is_block
};

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string last = trim(cur);
  if (!last.empty() || !items.empty()) items.push_back(last);
  return items;
}

inline bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
      return false;
  return true;
}

class Document {
 public:
  static Document parse_string(const std::string& text,
                               const std::string& source_name = "<string>") {
    Document doc;
    doc.source_ = source_name;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    Entry* open_block = nullptr;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string stripped = trim(raw);
      if (stripped.empty() || stripped[0] == '#') continue;
      bool indented = raw[0] == ' ' || raw[0] == '\t';
      if (indented) {
        if (!open_block)
          throw config_error("ParseError",
                             source_name + " line " + std::to_string(line_no) +
                                 ": indented line outside a block");
        open_block->rows.push_back(BlockRow{line_no, stripped});
        continue;
      }
      std::size_t colon = stripped.find(':');
      if (colon == std::string::npos)
        throw config_error("ParseError",
                           source_name + " line " + std::to_string(line_no) +
                               ": expected 'key: value'");
      std::string key = trim(stripped.substr(0, colon));
      std::string rest = trim(stripped.substr(colon + 1));
      if (!valid_key(key))
        throw config_error("ParseError",
                           source_name + " line " + std::to_string(line_no) +
                               ": invalid key '" + key + "'");
      if (doc.index_.count(key))
        throw config_error("ParseError",
                           source_name + " line " + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
      Entry e;
      e.key = key;
      e.line = line_no;
      e.is_block = rest.empty();
      e.scalar = rest;
      doc.entries_.push_back(std::move(e));
      doc.index_[key] = doc.entries_.size() - 1;
      open_block = doc.entries_.back().is_block ? &doc.entries_.back() : nullptr;
    }
    return doc;
  }

  static Document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
  }

  const std::string& source() const { return source_; }
  const std::vector<Entry>& entries() const { return entries_; }

  bool has(const std::string& key) const { return index_.count(key) > 0; }

  const Entry& at(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end())
      throw config_error("ConfigError", source_ + ": missing key '" + key + "'");
    return entries_[it->second];
  }

  std::optional<std::string> scalar(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    const Entry& e = entries_[it->second];
    if (e.is_block) return std::nullopt;
    return e.scalar;
  }

  // Replace or append a scalar entry (used by CLI --set overrides).
  void set_scalar(const std::string& key, const std::string& value) {
    auto it = index_.find(key);
    if (it != index_.end()) {
      entries_[it->second].is_block = false;
      entries_[it->second].scalar = value;
      entries_[it->second].rows.clear();
      return;
    }
    Entry e;
    e.key = key;
    e.line = 0;  // synthetic
    e.is_block = false;
    e.scalar = value;
    entries_.push_back(std::move(e));
    index_[key] = entries_.size() - 1;
  }

 private:
  std::string source_;
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

inline double parse_real(const std::string& text, const std::string& context) {
  std::string t = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw config_error("ParseError", context + ": '" + t + "' is not a number");
  return value;
}

inline long parse_int(const std::string& text, const std::string& context) {
  std::string t = trim(text);
  long value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw config_error("ParseError", context + ": '" + t + "' is not an integer");
  return value;
}

// Whitespace-separated reals from one block row.
inline std::vector<double> parse_real_row(const std::string& text,
                                          const std::string& context) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string token;
  while (in >> token) values.push_back(parse_real(token, context));
  return values;
}

}  // namespace excidyn::kv
