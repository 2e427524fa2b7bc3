#include "rossby/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "json.hpp"
#include "rossby/errors.hpp"

namespace rossby::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key,
                    int line, const std::string& origin) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || text.empty())
    throw ConfigError(origin + ":" + std::to_string(line) + ": key '" + key +
                      "': cannot parse '" + text + "' as a number");
  return x;
}

// All snapshots are stored little-endian regardless of host order.
void to_little_endian(std::vector<double>& buf) {
  if constexpr (std::endian::native == std::endian::big) {
    for (double& d : buf) {
      std::uint64_t u;
      std::memcpy(&u, &d, 8);
      u = __builtin_bswap64(u);
      std::memcpy(&d, &u, 8);
    }
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), ncols_(columns.size()), path_(path) {
  if (!out_)
    throw ConfigError("cannot open CSV file for writing: " + path.string());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_)
    throw ConfigError("CSV row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << '\n';
  if (!out_) throw ConfigError("CSV write failed: " + path_.string());
}

void write_field(const std::filesystem::path& path, const ScalarField& f,
                 const std::string& name) {
  const Grid& g = *f.grid;
  nlohmann::json meta{{"name", name},
                      {"nx", g.nx()},
                      {"ny", g.ny()},
                      {"nz", g.nz()},
                      {"lx", g.lx()},
                      {"ly", g.ly()},
                      {"lz", g.lz()},
                      {"dtype", "float64"},
                      {"byte_order", "little-endian"},
                      {"layout", "(z,y,x), x fastest"}};
  std::ofstream side(path.string() + ".json", std::ios::binary);
  side << meta.dump(2) << '\n';
  if (!side)
    throw ConfigError("cannot write field sidecar: " + path.string() +
                      ".json");

  std::vector<double> buf = f.v;
  to_little_endian(buf);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!out) throw ConfigError("cannot write field data: " + path.string());
}

ScalarField read_field(const std::filesystem::path& path) {
  std::ifstream side(path.string() + ".json", std::ios::binary);
  if (!side)
    throw ConfigError("cannot open field sidecar: " + path.string() +
                      ".json");
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const std::exception& e) {
    throw ConfigError("bad field sidecar " + path.string() +
                      ".json: " + e.what());
  }
  GridPtr g;
  try {
    g = Grid::make(meta.at("nx").get<int>(), meta.at("ny").get<int>(),
                   meta.at("nz").get<int>(), meta.at("lx").get<double>(),
                   meta.at("ly").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad field sidecar " + path.string() +
                      ".json: " + e.what());
  }
  ScalarField f(g);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open field data: " + path.string());
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (in.gcount() !=
      static_cast<std::streamsize>(f.v.size() * sizeof(double)))
    throw ConfigError("field data truncated: " + path.string());
  to_little_endian(f.v);  // involution: little->host equals host->little
  return f;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_text(text.str(), path.string());
}

Config Config::from_text(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line) +
                        ": expected 'key = value', got '" + s + "'");
    Entry e;
    e.key = trim(s.substr(0, eq));
    e.value = trim(s.substr(eq + 1));
    e.line = line;
    if (e.key.empty())
      throw ConfigError(origin + ":" + std::to_string(line) + ": empty key");
    for (const Entry& prev : c.entries_)
      if (prev.key == e.key)
        throw ConfigError(origin + ":" + std::to_string(line) +
                          ": duplicate key '" + e.key + "' (first set at line " +
                          std::to_string(prev.line) + ")");
    c.entries_.push_back(std::move(e));
  }
  return c;
}

const Config::Entry* Config::find(const std::string& key) const {
  for (const Entry& e : entries_)
    if (e.key == key) {
      e.used = true;
      return &e;
    }
  return nullptr;
}

const Config::Entry& Config::require(const std::string& key) const {
  const Entry* e = find(key);
  if (!e)
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  return *e;
}

bool Config::has(const std::string& key) const { return find(key) != nullptr; }

std::string Config::get_string(const std::string& key) {
  return require(key).value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& key) {
  const Entry& e = require(key);
  return parse_double(e.value, key, e.line, origin_);
}

double Config::get_double(const std::string& key, double fallback) {
  const Entry* e = find(key);
  return e ? parse_double(e->value, key, e->line, origin_) : fallback;
}

long long Config::get_int(const std::string& key) {
  const Entry& e = require(key);
  const double x = parse_double(e.value, key, e.line, origin_);
  const long long n = static_cast<long long>(x);
  if (static_cast<double>(n) != x)
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" +
                      key + "': expected an integer, got '" + e.value + "'");
  return n;
}

long long Config::get_int(const std::string& key, long long fallback) {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) {
  const Entry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "on") return true;
  if (e->value == "false" || e->value == "0" || e->value == "off")
    return false;
  throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": key '" + key +
                    "': expected a boolean, got '" + e->value + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) {
  const Entry& e = require(key);
  std::string s = e.value;
  for (char& ch : s)
    if (ch == ',') ch = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, key, e.line, origin_));
  if (out.empty())
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" +
                      key + "': empty list");
  return out;
}

void Config::finish() const {
  std::string bad;
  for (const Entry& e : entries_)
    if (!e.used)
      bad += (bad.empty() ? "" : ", ") + ("'" + e.key + "' (line " +
                                          std::to_string(e.line) + ")");
  if (!bad.empty())
    throw ConfigError(origin_ + ": unknown key(s): " + bad);
}

}  // namespace rossby::io
