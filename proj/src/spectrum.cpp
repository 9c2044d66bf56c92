#include "schatten/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "schatten/errors.hpp"
#include "schatten/summation.hpp"

namespace schatten {

Spectrum::Spectrum(std::vector<double> eigenvalues) : values_(std::move(eigenvalues)) {
  if (values_.empty()) {
    throw InputError("spectrum must contain at least one eigenvalue");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw InputError("spectrum contains a non-finite eigenvalue");
    }
    if (v < 0.0) {
      throw InputError("spectrum contains a negative eigenvalue");
    }
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

Spectrum Spectrum::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw InputError("spectrum scale factor must be finite and non-negative");
  }
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return Spectrum(std::move(out));
}

Eigen::MatrixXd Spectrum::as_diagonal() const {
  Eigen::VectorXd diag(static_cast<Eigen::Index>(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) diag(static_cast<Eigen::Index>(i)) = values_[i];
  return diag.asDiagonal();
}

TracePowerTable::TracePowerTable(const Spectrum& spectrum, int k_max)
    : dimension_(spectrum.dimension()) {
  if (k_max < 0) {
    throw InputError("k_max must be non-negative");
  }
  values_.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  values_[0] = static_cast<double>(dimension_);
  if (k_max == 0) return;

  std::vector<CompensatedSum> sums(static_cast<std::size_t>(k_max) + 1);
  for (double lambda : spectrum.eigenvalues()) {
    double power = 1.0;
    for (int k = 1; k <= k_max; ++k) {
      power *= lambda;
      sums[static_cast<std::size_t>(k)].add(power);
    }
  }
  for (int k = 1; k <= k_max; ++k) {
    const double v = sums[static_cast<std::size_t>(k)].value();
    if (!std::isfinite(v)) {
      throw RangeError("trace power S_" + std::to_string(k) + " overflows double precision");
    }
    values_[static_cast<std::size_t>(k)] = v;
  }
}

double TracePowerTable::operator[](int k) const {
  if (k < 0 || k > k_max()) {
    throw RangeError("trace power S_" + std::to_string(k) + " outside table (k_max = " +
                     std::to_string(k_max()) + ")");
  }
  return values_[static_cast<std::size_t>(k)];
}

Spectrum gram_spectrum(const Eigen::MatrixXd& B) {
  if (B.rows() < 1 || B.cols() < 1) {
    throw InputError("matrix must have at least one row and one column");
  }
  if (!B.allFinite()) {
    throw InputError("matrix contains non-finite entries");
  }
  const Eigen::MatrixXd S = B.transpose() * B;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolve of B^T B did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double tol = 1e-10 * std::max(1.0, ev.maxCoeff());
  std::vector<double> values(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double v = ev(i);
    if (v < -tol) {
      throw NumericalError("Gram matrix has eigenvalue " + std::to_string(v) +
                           " below the PSD tolerance");
    }
    values[static_cast<std::size_t>(i)] = std::max(v, 0.0);
  }
  return Spectrum(std::move(values));
}

TracePowerTable trace_powers(const Spectrum& spectrum, int k_max) {
  return TracePowerTable(spectrum, k_max);
}

double schatten_norm(const Spectrum& spectrum, int p) {
  if (p < 1) throw InputError("Schatten order p must be >= 1");
  CompensatedSum sum;
  const double half = static_cast<double>(p) / 2.0;
  for (double lambda : spectrum.eigenvalues()) sum.add(std::pow(lambda, half));
  return std::pow(sum.value(), 1.0 / static_cast<double>(p));
}

double schatten_2p_power(const Spectrum& spectrum, int p) {
  if (p < 1) throw InputError("Schatten order p must be >= 1");
  return TracePowerTable(spectrum, p)[p];
}

Interval holder_interval(const TracePowerTable& table, int beta, int p) {
  if (beta < 1 || p < 1) throw InputError("Hölder exponents must be >= 1");
  const double ratio = static_cast<double>(beta) / static_cast<double>(p);
  const double base = std::pow(table[p], ratio);
  const double dim_factor = std::pow(static_cast<double>(table.dimension()), 1.0 - ratio);
  const double other = base * dim_factor;
  return beta <= p ? Interval{base, other} : Interval{other, base};
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(const std::string& raw, std::size_t line_no) {
  const std::string field = trim(raw);
  double value = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw InputError("malformed CSV field '" + field + "' on line " + std::to_string(line_no));
  }
  return value;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(parse_field(field, line_no));
    if (!line.empty() && line.back() == ',') {
      throw InputError("trailing comma on line " + std::to_string(line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("ragged CSV: line " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("CSV matrix is empty");

  Eigen::MatrixXd B(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return B;
}

Spectrum read_spectrum_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("spectrum is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("spectrum JSON must be an array of numbers");
  std::vector<double> values;
  values.reserve(doc.size());
  for (const auto& v : doc) {
    if (!v.is_number()) throw InputError("spectrum JSON must contain only numbers");
    values.push_back(v.get<double>());
  }
  return Spectrum(std::move(values));
}

}  // namespace schatten
