#include "dmnls/io_report.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#ifndef DMNLS_REVISION
#define DMNLS_REVISION "unknown"
#endif

namespace dmnls {

namespace {

using nlohmann::json;
using Kind = FieldFileError::Kind;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

template <class T>
void put(std::ostream& out, T v) {
  const T le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <class T>
bool get(std::istream& in, T& v) {
  T raw;
  if (!in.read(reinterpret_cast<char*>(&raw), sizeof(T))) return false;
  v = to_little(raw);
  return true;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double as_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw std::invalid_argument("expected a number, got " + j.dump());
  return j.get<double>();
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !same(ia->second, ib->second)) return false;
  }
  return true;
}

// Rejects keys outside `allowed` and requires all of them.
const json& object_with(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) throw std::invalid_argument(std::string("unknown field '") + k + "' in " + where);
  }
  for (const auto& k : keys) {
    if (!j.contains(k)) throw std::invalid_argument(std::string("missing field '") + k + "' in " + where);
  }
  return j;
}

std::map<std::string, double> number_map(const json& j, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be an object");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) out[k] = as_number(v);
  return out;
}

json number_map(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_field(const ComplexField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FieldFileError(Kind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(kFieldMagic, sizeof(kFieldMagic));
  put<std::uint32_t>(out, kFieldFileVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid().n()));
  put<double>(out, f.grid().length());
  for (const Complex& v : f.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw FieldFileError(Kind::Io, "write to '" + path.string() + "' failed");
}

ComplexField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FieldFileError(Kind::Io, "cannot open '" + path.string() + "'");
  char magic[sizeof(kFieldMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kFieldMagic, sizeof(magic)) != 0) {
    throw FieldFileError(Kind::BadMagic, "bad magic in '" + path.string() + "'");
  }
  std::uint32_t version = 0, n = 0;
  double length = 0.0;
  if (!get(in, version)) throw FieldFileError(Kind::BadHeader, "truncated header");
  if (version != kFieldFileVersion) {
    throw FieldFileError(Kind::VersionMismatch,
                         "field file version " + std::to_string(version) + ", expected " +
                             std::to_string(kFieldFileVersion));
  }
  if (!get(in, n) || !get(in, length)) throw FieldFileError(Kind::BadHeader, "truncated header");
  std::optional<SpectralGrid> grid;
  try {
    grid.emplace(static_cast<int>(n), length);
  } catch (const std::invalid_argument& e) {
    throw FieldFileError(Kind::BadHeader, std::string("bad header: ") + e.what());
  }
  std::vector<Complex> values(grid->size());
  for (Complex& v : values) {
    double re = 0.0, im = 0.0;
    if (!get(in, re) || !get(in, im)) {
      throw FieldFileError(Kind::TruncatedPayload, "truncated payload in '" + path.string() + "'");
    }
    v = {re, im};
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FieldFileError(Kind::TrailingData, "trailing bytes after payload in '" + path.string() + "'");
  }
  try {
    return ComplexField(*grid, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw FieldFileError(Kind::BadHeader, std::string("bad payload: ") + e.what());
  }
}

bool RunRecord::operator==(const RunRecord& o) const {
  return schema_version == o.schema_version && command == o.command && same(dav, o.dav) &&
         same(p, o.p) && same(lambda, o.lambda) && grid_n == o.grid_n &&
         same(grid_length, o.grid_length) && quadrature_m == o.quadrature_m && seed == o.seed &&
         same(energy.kinetic, o.energy.kinetic) && same(energy.potential, o.energy.potential) &&
         same(energy.total, o.energy.total) && same(energy.mass, o.energy.mass) &&
         same(omega, o.omega) && same(el_residual, o.el_residual) && status == o.status &&
         iterations == o.iterations && same(values, o.values) && same(timings, o.timings) &&
         series_x == o.series_x && series_y == o.series_y && series.size() == o.series.size() &&
         std::equal(series.begin(), series.end(), o.series.begin(),
                    [](const SeriesPoint& a, const SeriesPoint& b) { return same(a.x, b.x) && same(a.y, b.y); }) &&
         revision == o.revision && timestamp == o.timestamp;
}

std::string emit_report(const RunRecord& r, ReportFormat format) {
  if (format == ReportFormat::CsvSeries) {
    std::string out = r.series_x + "," + r.series_y + "\n";
    for (const SeriesPoint& pt : r.series) out += format_double(pt.x) + "," + format_double(pt.y) + "\n";
    return out;
  }
  json points = json::array();
  for (const SeriesPoint& pt : r.series) points.push_back(json::array({number(pt.x), number(pt.y)}));
  const json j = {
      {"schema_version", r.schema_version},
      {"command", r.command},
      {"params",
       {{"dav", number(r.dav)},
        {"p", number(r.p)},
        {"lambda", number(r.lambda)},
        {"grid_n", r.grid_n},
        {"grid_length", number(r.grid_length)},
        {"quadrature_m", r.quadrature_m},
        {"seed", r.seed}}},
      {"results",
       {{"energy",
         {{"kinetic", number(r.energy.kinetic)},
          {"potential", number(r.energy.potential)},
          {"total", number(r.energy.total)},
          {"mass", number(r.energy.mass)}}},
        {"omega", number(r.omega)},
        {"el_residual", number(r.el_residual)},
        {"status", r.status},
        {"iterations", r.iterations},
        {"values", number_map(r.values)},
        {"timings", number_map(r.timings)}}},
      {"series", {{"x", r.series_x}, {"y", r.series_y}, {"points", points}}},
      {"provenance", {{"revision", r.revision}, {"timestamp", r.timestamp}}},
  };
  return j.dump(2) + "\n";
}

RunRecord parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("report is not valid JSON: ") + e.what());
  }
  object_with(j, "report", {"schema_version", "command", "params", "results", "series", "provenance"});
  RunRecord r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kRunRecordSchema) {
      throw std::invalid_argument("unsupported schema_version " + std::to_string(r.schema_version));
    }
    r.command = j.at("command").get<std::string>();
    const json& params = object_with(j.at("params"), "params",
                                     {"dav", "p", "lambda", "grid_n", "grid_length", "quadrature_m", "seed"});
    r.dav = as_number(params.at("dav"));
    r.p = as_number(params.at("p"));
    r.lambda = as_number(params.at("lambda"));
    r.grid_n = params.at("grid_n").get<int>();
    r.grid_length = as_number(params.at("grid_length"));
    r.quadrature_m = params.at("quadrature_m").get<int>();
    r.seed = params.at("seed").get<std::uint64_t>();
    const json& res = object_with(j.at("results"), "results",
                                  {"energy", "omega", "el_residual", "status", "iterations", "values", "timings"});
    const json& e = object_with(res.at("energy"), "energy", {"kinetic", "potential", "total", "mass"});
    r.energy = {as_number(e.at("kinetic")), as_number(e.at("potential")), as_number(e.at("total")),
                as_number(e.at("mass"))};
    r.omega = as_number(res.at("omega"));
    r.el_residual = as_number(res.at("el_residual"));
    r.status = res.at("status").get<std::string>();
    r.iterations = res.at("iterations").get<int>();
    r.values = number_map(res.at("values"), "values");
    r.timings = number_map(res.at("timings"), "timings");
    const json& series = object_with(j.at("series"), "series", {"x", "y", "points"});
    r.series_x = series.at("x").get<std::string>();
    r.series_y = series.at("y").get<std::string>();
    for (const json& pt : series.at("points")) {
      if (!pt.is_array() || pt.size() != 2) throw std::invalid_argument("series points must be [x, y] pairs");
      r.series.push_back({as_number(pt[0]), as_number(pt[1])});
    }
    const json& prov = object_with(j.at("provenance"), "provenance", {"revision", "timestamp"});
    r.revision = prov.at("revision").get<std::string>();
    r.timestamp = prov.at("timestamp").get<std::string>();
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("malformed report: ") + ex.what());
  }
  return r;
}

std::string build_revision() { return DMNLS_REVISION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace dmnls
