#include "schatten/cli/io.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "schatten/errors.hpp"

namespace schatten::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 digest failed");
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LoadedInput load_spectrum(const std::string& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  return LoadedInput{path, "spectrum", sha256_hex(bytes), read_spectrum_json(in), std::nullopt};
}

LoadedInput load_matrix(const std::string& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  const Eigen::MatrixXd B = read_matrix_csv(in);
  Eigen::MatrixXd gram = B.transpose() * B;
  return LoadedInput{path, "matrix", sha256_hex(bytes), gram_spectrum(B), std::move(gram)};
}

}  // namespace schatten::cli
