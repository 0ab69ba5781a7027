#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "isingdual/dynamics.hpp"
#include "isingdual/model.hpp"

namespace isingdual::io {

inline constexpr std::string_view kSchemaVersion = "1.0";

/// Malformed input file. `line` is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

/// 17 significant digits ("%.17g"); round-trips every double exactly.
std::string format_real(double v);
/// Human-readable rendering with `digits` decimals.
std::string format_fixed(double v, int digits = 4);

/// Model JSON: {"schema_version", "domain", "p", "alpha", "beta_upper": [{"i","j","value"}]}.
/// beta_upper lists nonzero entries with 0-based i < j.
std::string model_to_json(const IsingModel& model);
IsingModel model_from_json(std::string_view text);

IsingModel read_model(const std::filesystem::path& path);
void write_model(const std::filesystem::path& path, const IsingModel& model);

/// Matrix CSV (header of variable names, one observation per row) or counts CSV
/// (one column per variable plus a final "count" column). Labels may be coded 0/1 or
/// -1/1 (not mixed); the low label is read as the low value of `domain`.
Dataset parse_data_csv(std::string_view text, Domain domain);
Dataset read_data(const std::filesystem::path& path, Domain domain);

std::string data_to_counts_csv(const Dataset& data);
std::string data_to_matrix_csv(const Dataset& data);

/// "count,frequency" header and p + 1 rows.
std::string histogram_csv(const TrajectoryStats& stats);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace isingdual::io
