#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "schatten/errors.hpp"
#include "schatten/spectrum.hpp"

using namespace schatten;

TEST_CASE("spectrum is sorted and validated") {
  Spectrum s({1.0, 3.0, 2.0});
  CHECK(s.dimension() == 3);
  CHECK(s.eigenvalues()[0] == 3.0);
  CHECK(s.eigenvalues()[2] == 1.0);
  CHECK_THROWS_AS(Spectrum({}), InputError);
  CHECK_THROWS_AS(Spectrum({1.0, -0.5}), InputError);
  CHECK_THROWS_AS(Spectrum({NAN}), InputError);
}

TEST_CASE("gram spectrum of small matrices") {
  Eigen::MatrixXd B(2, 2);
  B << 3, 0, 0, 4;
  const Spectrum s = gram_spectrum(B);
  CHECK(s.eigenvalues()[0] == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(s.eigenvalues()[1] == doctest::Approx(9.0).epsilon(1e-12));

  const Spectrum id = gram_spectrum(Eigen::MatrixXd::Identity(3, 3));
  for (double v : id.eigenvalues()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  const Spectrum zero = gram_spectrum(Eigen::MatrixXd::Zero(2, 2));
  CHECK(zero.dimension() == 2);
  for (double v : zero.eigenvalues()) CHECK(v == 0.0);

  // Wide input: d = number of columns, rank-deficient part padded with zeros.
  Eigen::MatrixXd wide(1, 3);
  wide << 1, 2, 2;
  const Spectrum w = gram_spectrum(wide);
  CHECK(w.dimension() == 3);
  CHECK(w.eigenvalues()[0] == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(w.eigenvalues()[2] == 0.0);

  Eigen::MatrixXd bad(1, 1);
  bad << INFINITY;
  CHECK_THROWS_AS(gram_spectrum(bad), InputError);
}

TEST_CASE("gram spectrum is invariant under a left rotation") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> z;
  Eigen::MatrixXd B(4, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = z(gen);
  Eigen::MatrixXd G(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) G(i, j) = z(gen);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
  const Spectrum a = gram_spectrum(B);
  const Spectrum b = gram_spectrum(Q * B);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(oracle::rel_err(a.eigenvalues()[i], b.eigenvalues()[i]) < 1e-9);
  }
}

TEST_CASE("trace powers") {
  const TracePowerTable t(Spectrum({1, 2, 3}), 8);
  CHECK(t[0] == 3.0);
  CHECK(t[2] == 14.0);
  CHECK(t[4] == 98.0);
  CHECK_THROWS_AS(t[9], RangeError);
  CHECK_THROWS_AS(t[-1], RangeError);

  const TracePowerTable ones(Spectrum(std::vector<double>(5, 1.0)), 12);
  for (int k = 0; k <= 12; ++k) CHECK(ones[k] == 5.0);

  CHECK_THROWS_AS(TracePowerTable(Spectrum({1e300}), 4), RangeError);
}

TEST_CASE("trace powers do not depend on input order") {
  const TracePowerTable a(Spectrum({0.3, 0.9, 0.1, 0.7}), 10);
  const TracePowerTable b(Spectrum({0.7, 0.1, 0.9, 0.3}), 10);
  for (int k = 0; k <= 10; ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("schatten norms") {
  const Spectrum s({16, 9});
  CHECK(schatten_norm(s, 4) == doctest::Approx(std::pow(337.0, 0.25)).epsilon(1e-14));
  CHECK(schatten_2p_power(s, 2) == doctest::Approx(337.0).epsilon(1e-14));
  CHECK(schatten_norm(Spectrum(std::vector<double>(7, 1.0)), 2) == doctest::Approx(std::sqrt(7.0)));
  CHECK_THROWS_AS(schatten_norm(s, 0), InputError);
}

TEST_CASE("power-mean sandwich on random spectra") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> dim(1, 10);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = dim(gen);
    const TracePowerTable t(Spectrum(oracle::random_spectrum(gen, d)), 8);
    for (int beta = 1; beta <= 8; ++beta) {
      for (int p = 1; p <= 8; ++p) {
        const Interval iv = holder_interval(t, beta, p);
        const double slack = 1e-12 * std::pow(t[p], static_cast<double>(beta) / p) * d;
        REQUIRE(t[beta] >= iv.lo - slack);
        REQUIRE(t[beta] <= iv.hi + slack);
      }
    }
  }
}

TEST_CASE("matrix CSV parsing") {
  std::istringstream ok("1, 2.5\n-3,4e-1\n");
  const Eigen::MatrixXd m = read_matrix_csv(ok);
  CHECK(m.rows() == 2);
  CHECK(m(0, 1) == 2.5);
  CHECK(m(1, 1) == doctest::Approx(0.4));

  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(ragged), InputError);
  std::istringstream trailing("1,2,\n");
  CHECK_THROWS_AS(read_matrix_csv(trailing), InputError);
  std::istringstream junk("1,x\n");
  CHECK_THROWS_AS(read_matrix_csv(junk), InputError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_matrix_csv(empty), InputError);
}

TEST_CASE("spectrum JSON parsing") {
  std::istringstream ok("[1, 2, 0.5]");
  CHECK(read_spectrum_json(ok).dimension() == 3);
  std::istringstream neg("[1, -2]");
  CHECK_THROWS_AS(read_spectrum_json(neg), InputError);
  std::istringstream obj("{\"a\": 1}");
  CHECK_THROWS_AS(read_spectrum_json(obj), InputError);
  std::istringstream broken("[1, 2");
  CHECK_THROWS_AS(read_spectrum_json(broken), InputError);
}
