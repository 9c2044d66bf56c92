#include "schatten/cli/report.hpp"

#include <charconv>
#include <cmath>

#include "schatten/errors.hpp"

#ifndef SCHATTEN_VERSION
#define SCHATTEN_VERSION "0.0.0"
#endif

namespace schatten::cli {

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "text") return Format::Text;
  throw InputError("unknown format '" + name + "' (expected json, csv or text)");
}

Json Manifest::to_json() const {
  Json m;
  m["tool"] = "schatten";
  m["version"] = SCHATTEN_VERSION;
  m["subcommand"] = subcommand;
  m["params"] = params;
  Json files = Json::array();
  for (const auto& in : inputs) {
    files.push_back({{"path", in.path}, {"kind", in.kind}, {"sha256", in.sha256}});
  }
  m["inputs"] = files;
  m["seed"] = seed ? Json(*seed) : Json(nullptr);
  return m;
}

Json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const VarianceReport& r) {
  Json j;
  j["p"] = r.p;
  j["n"] = r.n;
  j["d"] = r.d;
  j["mean"] = r.mean;
  j["second_moment"] = r.second_moment;
  j["variance"] = r.variance;
  Json per_q = Json::array();
  for (const auto& c : r.per_q) {
    // Pair counts overflow 64 bits quickly; kept exact as decimal strings.
    per_q.push_back({{"q", c.q}, {"count", c.count.str()}, {"sum", c.sum}});
  }
  j["per_q"] = per_q;
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["p"] = r.p;
  j["n"] = r.n;
  j["d"] = r.d;
  j["trace_p"] = r.trace_p;
  j["b1"] = r.b1;
  j["b2"] = r.b2;
  j["b3"] = r.b3;
  j["b4"] = r.b4;
  j["new_bound"] = finite_or_null(r.new_bound);
  j["kappa"] = r.kappa;
  j["kv_bound"] = optional_number(r.kv_bound);
  j["ratio"] = optional_number(r.ratio);
  j["exact_variance"] = optional_number(r.exact_variance);
  j["slack"] = optional_number(r.slack);
  return j;
}

Json to_json(const EstimateStats& s) {
  Json j;
  j["reps"] = s.reps;
  j["empirical_mean"] = s.empirical_mean;
  j["empirical_variance"] = optional_number(s.empirical_variance);
  j["stderr_mean"] = optional_number(s.stderr_mean);
  j["stderr_variance"] = optional_number(s.stderr_variance);
  j["batches"] = s.batches;
  return j;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw InputError("CSV row width does not match header");
  rows_.push_back(std::move(row));
}

namespace {

void write_field(std::ostream& out, const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    write_field(out, row[i]);
  }
  out << "\r\n";
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
  write_row(out, header_);
  for (const auto& r : rows_) write_row(out, r);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

void write_text(std::ostream& out, const Json& report, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : report.items()) {
    if (value.is_object()) {
      out << pad << key << ":\n";
      write_text(out, value, indent + 2);
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      out << pad << key << ":\n";
      for (const auto& item : value) {
        out << pad << "  -\n";
        write_text(out, item, indent + 4);
      }
    } else if (value.is_string()) {
      out << pad << key << ": " << value.get<std::string>() << '\n';
    } else if (value.is_number_float()) {
      out << pad << key << ": " << format_number(value.get<double>()) << '\n';
    } else {
      out << pad << key << ": " << value.dump() << '\n';
    }
  }
}

}  // namespace schatten::cli
