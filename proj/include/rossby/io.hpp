#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rossby/grid.hpp"

namespace rossby::io {

// Shortest round-trip decimal form of a double (17 significant digits).
std::string format_double(double x);

// Comma-separated values with a fixed header row; every cell is written via
// format_double, so identical value sequences give byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t ncols_;
  std::filesystem::path path_;
};

// Scalar field snapshot: raw float64 little-endian, layout (z, y, x) with x
// fastest, plus a JSON sidecar "<path>.json" describing grid and layout.
void write_field(const std::filesystem::path& path, const ScalarField& f,
                 const std::string& name);
ScalarField read_field(const std::filesystem::path& path);

// Flat "key = value" configuration text: one pair per line, '#' comments,
// blank lines ignored. Keys are consumed by the typed getters; finish()
// rejects every key that was never consumed (with its line number), so
// misspelled keys cannot silently do nothing.
class Config {
 public:
  static Config from_file(const std::filesystem::path& path);
  static Config from_text(const std::string& text,
                          const std::string& origin = "<inline>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  long long get_int(const std::string& key);
  long long get_int(const std::string& key, long long fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_double_list(const std::string& key);

  void finish() const;  // throws ConfigError on unconsumed keys

 private:
  struct Entry {
    std::string key, value;
    int line = 0;
    mutable bool used = false;
  };
  const Entry* find(const std::string& key) const;
  const Entry& require(const std::string& key) const;

  std::vector<Entry> entries_;
  std::string origin_;
};

}  // namespace rossby::io
