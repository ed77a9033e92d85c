#include "frontspeed/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "frontspeed/errors.hpp"

namespace frontspeed {

std::string format_number(double value, int significant_digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

void KeyValueBlock::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void KeyValueBlock::add(std::string key, double value, int significant_digits) {
  add(std::move(key), format_number(value, significant_digits));
}

void KeyValueBlock::add(std::string key, bool value) {
  add(std::move(key), std::string(value ? "true" : "false"));
}

void KeyValueBlock::merge(const KeyValueBlock& other, const std::string& prefix) {
  for (const auto& [k, v] : other.entries_) entries_.emplace_back(prefix + k, v);
}

const std::string* KeyValueBlock::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string KeyValueBlock::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

KeyValueBlock KeyValueBlock::parse(const std::string& text) {
  KeyValueBlock block;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw InvalidArgument("malformed key-value line: " + line);
    block.add(line.substr(0, eq), line.substr(eq + 3));
  }
  return block;
}

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i], 15);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << csv_text(header, rows);
}

}  // namespace frontspeed
