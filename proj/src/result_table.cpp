#include "hetnet/result_table.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf.data(), ptr);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError("csv line " + std::to_string(line) + ": bad " + name + " '" +
                      std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::string_view to_string(Source source) {
  switch (source) {
    case Source::kSim:
      return "sim";
    case Source::kAnalytic:
      return "analytic";
    case Source::kClosedForm:
      return "closed_form";
  }
  return {};
}

Source parse_source(std::string_view text) {
  if (text == "sim") return Source::kSim;
  if (text == "analytic") return Source::kAnalytic;
  if (text == "closed_form") return Source::kClosedForm;
  throw ConfigError("unknown source '" + std::string(text) + "'");
}

void write_csv(std::ostream& out, const ResultTable& table) {
  out << kCsvHeader << '\n';
  for (const CurvePoint& p : table.rows) {
    out << p.scheme << ',' << p.axis_name << ',' << format_double(p.axis_value) << ','
        << format_double(p.beta_db) << ',' << format_double(p.epsilon) << ','
        << format_double(p.lambda_sbs) << ',' << format_double(p.p_max_dbm) << ','
        << to_string(p.source) << ',' << format_double(p.p_success) << ','
        << format_double(p.ci_half_width) << ',' << format_double(p.ase) << ','
        << p.n_realizations << ',' << p.seed << '\n';
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

ResultTable parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("csv: missing or unexpected header");
  }
  ResultTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 13) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected 13 fields");
    }
    CurvePoint p;
    p.scheme = std::string(f[0]);
    p.axis_name = std::string(f[1]);
    p.axis_value = parse_number<double>(f[2], line_no, "axis_value");
    p.beta_db = parse_number<double>(f[3], line_no, "beta_db");
    p.epsilon = parse_number<double>(f[4], line_no, "epsilon");
    p.lambda_sbs = parse_number<double>(f[5], line_no, "lambda_sbs");
    p.p_max_dbm = parse_number<double>(f[6], line_no, "p_max_dbm");
    p.source = parse_source(f[7]);
    p.p_success = parse_number<double>(f[8], line_no, "p_success");
    p.ci_half_width = parse_number<double>(f[9], line_no, "ci_half_width");
    p.ase = parse_number<double>(f[10], line_no, "ase");
    p.n_realizations = parse_number<long long>(f[11], line_no, "n_realizations");
    p.seed = parse_number<std::uint64_t>(f[12], line_no, "seed");
    table.rows.push_back(std::move(p));
  }
  return table;
}

ResultTable parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_csv(in);
}

}  // namespace hetnet
