#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stresstune/data.hpp"
#include "stresstune/graph.hpp"
#include "stresstune/tune.hpp"

namespace stresstune::io {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& where) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError(where + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

inline long parse_index(std::string_view s, const std::string& where) {
  const double v = parse_double(s, where);
  if (v != std::floor(v) || v < 0) throw ParseError(where + ": expected a nonnegative integer, got '" + std::string(s) + "'");
  return static_cast<long>(v);
}

/// Splits one CSV record; handles double-quoted fields with "" escapes.
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

/// Writes to a sibling temp file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Configuration CSV: id,x1,...,xp
// ---------------------------------------------------------------------------

inline std::string configuration_csv(const Configuration& c) {
  std::string s = "id";
  for (Index k = 1; k <= c.dim(); ++k) s += ",x" + std::to_string(k);
  s += '\n';
  for (Index i = 0; i < c.size(); ++i) {
    s += std::to_string(i);
    for (Index k = 0; k < c.dim(); ++k) s += "," + format_double(c.points()(i, k));
    s += '\n';
  }
  return s;
}

inline Configuration read_configuration(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path.string() + ": empty file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "id") throw ParseError(path.string() + ": header must be id,x1,...,xp");
  const Index p = static_cast<Index>(header.size()) - 1;
  const Index n = static_cast<Index>(lines.size()) - 1;
  if (n < 1) throw ParseError(path.string() + ": no points");
  Matrix x(n, p);
  std::vector<char> seen(n, 0);
  for (Index r = 0; r < n; ++r) {
    const std::string where = path.string() + " row " + std::to_string(r + 1);
    const auto f = split_csv_line(lines[r + 1]);
    if (static_cast<Index>(f.size()) != p + 1) throw ParseError(where + ": expected " + std::to_string(p + 1) + " fields");
    const long id = parse_index(f[0], where);
    if (id >= n || seen[id]) throw ParseError(where + ": ids must be a permutation of 0..n-1");
    seen[id] = 1;
    for (Index k = 0; k < p; ++k) x(id, k) = parse_double(f[k + 1], where);
  }
  return Configuration(std::move(x));
}

// ---------------------------------------------------------------------------
// Edge list CSV: i,j,d
// ---------------------------------------------------------------------------

inline std::string edge_list_csv(const DissimilarityGraph& g) {
  std::string s = "i,j,d\n";
  for (const auto& e : g.edges()) s += std::to_string(e.i) + "," + std::to_string(e.j) + "," + format_double(e.d) + "\n";
  return s;
}

/// Node count is max index + 1 unless `n` is given.
inline DissimilarityGraph read_edge_list(const std::filesystem::path& path, std::optional<Index> n = std::nullopt) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path.string() + ": empty file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() != 3 || header[0] != "i" || header[1] != "j" || header[2] != "d")
    throw ParseError(path.string() + ": header must be i,j,d");
  std::vector<Edge> edges;
  Index max_index = -1;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string where = path.string() + " row " + std::to_string(r);
    const auto f = split_csv_line(lines[r]);
    if (f.size() != 3) throw ParseError(where + ": expected 3 fields");
    const Edge e{parse_index(f[0], where), parse_index(f[1], where), parse_double(f[2], where)};
    max_index = std::max({max_index, e.i, e.j});
    edges.push_back(e);
  }
  const Index count = n ? *n : max_index + 1;
  return DissimilarityGraph(count, std::move(edges));
}

// ---------------------------------------------------------------------------
// Cities CSV: needs city, lat, lng columns; others are ignored.
// ---------------------------------------------------------------------------

inline CityTable read_cities(std::istream& in, const std::string& name = "cities") {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(name + ": empty file");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k) col.emplace(header[k], k);
  for (const char* need : {"city", "lat", "lng"})
    if (!col.count(need)) throw ParseError(name + ": missing column '" + need + "'");
  const std::size_t ci = col["city"], la = col["lat"], lo = col["lng"];
  const std::size_t width = std::max({ci, la, lo}) + 1;
  std::vector<City> rows;
  std::size_t r = 0;
  while (std::getline(in, line)) {
    ++r;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = name + " row " + std::to_string(r);
    const auto f = split_csv_line(line);
    if (f.size() < width) throw ParseError(where + ": too few fields");
    City c{f[ci], parse_double(f[la], where), parse_double(f[lo], where)};
    try {
      CityTable::check(c, r);
    } catch (const InvalidArgument& e) {
      throw ParseError(name + ": " + e.what());
    }
    rows.push_back(std::move(c));
  }
  return CityTable(std::move(rows));
}

inline CityTable load_cities(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_cities(in, path.string());
}

// ---------------------------------------------------------------------------
// Sweep report
// ---------------------------------------------------------------------------

/// wall_time_s is written only when include_timing is set (null otherwise),
/// which keeps reruns byte-identical.
inline nlohmann::ordered_json sweep_json(const SweepReport& rep, bool include_timing = false) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json j;
    j["h"] = r.h;
    j["stress"] = r.failed ? nlohmann::ordered_json() : nlohmann::ordered_json(r.stress);
    j["stress_per_edge"] = r.failed ? nlohmann::ordered_json() : nlohmann::ordered_json(r.stress_per_edge);
    j["embedding_error"] = opt(r.embedding_error);
    j["scale_ratio"] = opt(r.scale_ratio);
    j["wall_time_s"] = include_timing ? nlohmann::ordered_json(r.wall_time_s) : nlohmann::ordered_json();
    j["failed"] = r.failed;
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["rows"] = std::move(rows);
  out["selected_h"] = rep.selected_h;
  return out;
}

inline std::string sweep_csv(const SweepReport& rep, bool include_timing = false) {
  std::string s = "h,stress,stress_per_edge,embedding_error,scale_ratio,wall_time_s,failed\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rep.rows) {
    s += std::to_string(r.h) + ",";
    s += (r.failed ? std::string() : format_double(r.stress)) + ",";
    s += (r.failed ? std::string() : format_double(r.stress_per_edge)) + ",";
    s += opt(r.embedding_error) + "," + opt(r.scale_ratio) + ",";
    s += (include_timing ? format_double(r.wall_time_s) : std::string()) + ",";
    s += r.failed ? "true\n" : "false\n";
  }
  return s;
}

}  // namespace stresstune::io
