#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schatten/bounds.hpp"
#include "schatten/cli/io.hpp"
#include "schatten/sketch.hpp"
#include "schatten/variance.hpp"

namespace schatten::cli {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv, Text };

Format parse_format(const std::string& name);

/// Run manifest embedded in every report. Thread count is deliberately not
/// part of it: reports must not depend on it.
struct Manifest {
  std::string subcommand;
  Json params = Json::object();
  std::vector<LoadedInput> inputs;
  std::optional<std::uint64_t> seed;

  Json to_json() const;
};

Json to_json(const VarianceReport& r);
Json to_json(const BoundReport& r);
Json to_json(const EstimateStats& s);
Json optional_number(const std::optional<double>& v);

/// RFC 4180 table: CRLF line ends, fields quoted when they contain a
/// comma, quote, CR or LF.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  void write(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip decimal form, or "" for a missing value.
std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

/// Indented "key: value" rendering of a JSON report.
void write_text(std::ostream& out, const Json& report, int indent = 0);

}  // namespace schatten::cli
