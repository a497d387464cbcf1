#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmnls/functional.hpp"
#include "dmnls/threshold.hpp"

namespace dmnls {

inline constexpr char kFieldMagic[8] = {'D', 'M', 'N', 'L', 'S', 'F', '2', 'D'};
inline constexpr std::uint32_t kFieldFileVersion = 1;

class FieldFileError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, VersionMismatch, BadHeader, TruncatedPayload, TrailingData };
  FieldFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Layout: magic[8], u32 version, u32 n, f64 length, then n*n (re, im) f64
/// pairs, row-major, all little-endian.
void write_field(const ComplexField& f, const std::filesystem::path& path);
ComplexField read_field(const std::filesystem::path& path);

inline constexpr int kRunRecordSchema = 1;

struct RunRecord {
  int schema_version = kRunRecordSchema;
  std::string command;

  // params
  double dav = 1.0;
  double p = 3.0;
  double lambda = 1.0;
  int grid_n = 0;
  double grid_length = 0.0;
  int quadrature_m = 32;
  std::uint64_t seed = 0;

  // results
  EnergyBreakdown energy;
  double omega = 0.0;
  double el_residual = 0.0;
  std::string status;
  int iterations = 0;
  /// Command-specific scalars (ratio, lambda_cr estimates, ...). NaN is written as null.
  std::map<std::string, double> values;
  std::map<std::string, double> timings;

  // series
  std::string series_x = "x";
  std::string series_y = "y";
  std::vector<SeriesPoint> series;

  // provenance
  std::string revision;
  std::string timestamp;

  bool operator==(const RunRecord& other) const;
};

enum class ReportFormat { Json, CsvSeries };

/// Deterministic text: JSON keys sorted, doubles printed round-trip exact.
std::string emit_report(const RunRecord& record, ReportFormat format);

/// Parses emit_report JSON. Throws std::invalid_argument on unknown or missing
/// fields and on a schema_version other than kRunRecordSchema.
RunRecord parse_report(const std::string& json_text);

/// Revision baked in at configure time, "unknown" outside a checkout.
std::string build_revision();
/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace dmnls
