#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hetnet {

enum class Source { kSim, kAnalytic, kClosedForm };

std::string_view to_string(Source source);
Source parse_source(std::string_view text);

/// One row of output: a (scheme, axis value, source) triple and its estimate.
struct CurvePoint {
  std::string scheme;
  std::string axis_name;
  double axis_value = 0.0;
  double beta_db = 0.0;
  double epsilon = 0.0;
  double lambda_sbs = 0.0;
  double p_max_dbm = 0.0;
  Source source = Source::kSim;
  double p_success = 0.0;
  double ci_half_width = 0.0;
  double ase = 0.0;
  long long n_realizations = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct ResultTable {
  std::vector<CurvePoint> rows;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "scheme,axis_name,axis_value,beta_db,epsilon,lambda_sbs,p_max_dbm,source,"
    "p_success,ci_half_width,ase,n_realizations,seed";

/// Doubles are written in shortest round-trip form, so parse(write(t)) == t.
void write_csv(std::ostream& out, const ResultTable& table);
std::string to_csv(const ResultTable& table);

/// Throws ConfigError on a malformed header or row.
ResultTable parse_csv(std::istream& in);
ResultTable parse_csv(std::string_view text);

}  // namespace hetnet
