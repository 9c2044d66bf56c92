#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "schatten/spectrum.hpp"

namespace schatten::cli {

std::string sha256_hex(const std::string& bytes);

/// Reads a whole file; throws InputError when it cannot be opened.
std::string read_file(const std::string& path);

/// A loaded operator: its spectrum plus, for matrix input B, the Gram matrix B^T B.
struct LoadedInput {
  std::string path;
  std::string kind;  ///< "spectrum" or "matrix"
  std::string sha256;
  Spectrum spectrum;
  std::optional<Eigen::MatrixXd> gram;
};

LoadedInput load_spectrum(const std::string& path);
LoadedInput load_matrix(const std::string& path);

}  // namespace schatten::cli
