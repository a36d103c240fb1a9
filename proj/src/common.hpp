// SPDX-License-Identifier: MIT
//
// Shared utilities: error types and a deterministic random stream.
#pragma once

#include <Eigen/Dense>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace pepfo {

// Shortest decimal string that round-trips to the same double. Every file
// format in the library goes through this so identical inputs produce
// byte-identical text.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Thrown when a momentum sequence or step-coefficient rule is violated,
// or when inputs of the wrong rule kind are passed to a builder.
class RuleViolation : public std::invalid_argument {
 public:
  explicit RuleViolation(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a requested quantity has no definition for the given inputs,
// e.g. a bound the method does not admit, or a certificate whose normalizing
// slack sum is zero.
class NotAvailable : public std::domain_error {
 public:
  explicit NotAvailable(const std::string& what) : std::domain_error(what) {}
};

// Deterministic random stream built on std::mt19937_64, whose state sequence
// is fixed by the standard. The uniform and normal mappings below are
// implemented by hand because std::uniform_real_distribution and
// std::normal_distribution are implementation defined, which would break
// byte-identical outputs across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller transform; the spare deviate is cached between calls.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  Eigen::VectorXd normal_vector(int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  // Uniformly distributed direction on the unit sphere.
  Eigen::VectorXd unit_vector(int d) {
    Eigen::VectorXd v = normal_vector(d);
    double n = v.norm();
    while (n < 1e-12) {
      v = normal_vector(d);
      n = v.norm();
    }
    return v / n;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pepfo
