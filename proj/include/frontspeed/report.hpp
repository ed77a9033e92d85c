#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace frontspeed {

// Shortest "%.*g" rendering; 17 digits round-trips a double.
std::string format_number(double value, int significant_digits = 17);

// Flat `key = value` text block, one entry per line, insertion ordered.
class KeyValueBlock {
 public:
  void add(std::string key, std::string value);
  void add(std::string key, double value, int significant_digits = 17);
  void add(std::string key, bool value);
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
  void add(std::string key, int value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, unsigned long value) { add(std::move(key), std::to_string(value)); }

  // Appends every entry of `other` with `prefix` prepended to its key.
  void merge(const KeyValueBlock& other, const std::string& prefix = {});

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  const std::string* find(const std::string& key) const;

  std::string to_string() const;
  static KeyValueBlock parse(const std::string& text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Writes a CSV with a header line and numeric rows at 15 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace frontspeed
