#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace grhmc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Contract violation (bad arguments, dimension mismatch, layout mismatch).
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure during integration or event location.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite energy / density encountered at a concrete position.
struct NonFiniteError : std::runtime_error {
  Vec position;
  NonFiniteError(const std::string& what, Vec pos)
      : std::runtime_error(what), position(std::move(pos)) {}
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic RNG: mt19937_64 engine plus explicit Box-Muller / inverse-CDF
/// transforms, so streams are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  /// Independent stream for trajectory `stream` of a run seeded with `seed`.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    Rng r(0);
    r.eng_.seed(splitmix64(seed ^ splitmix64(stream + 0x51ed270b7a6fd5ull)));
    return r;
  }

  /// Uniform draw on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  Vec normal_vec(Index d) {
    Vec v(d);
    for (Index i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw ContractError("exponential: rate must be > 0");
    return -std::log(uniform()) / rate;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Sign pattern of a model's constraints; bit k set iff c_k(q) >= 0.
/// Doubles as the region indicator: two-region models use bit 0, models with
/// m constraints address all 2^m sign regions without enumerating them.
class RegionMask {
 public:
  RegionMask() = default;
  explicit RegionMask(int n_constraints)
      : n_(n_constraints), words_((n_constraints + 63) / 64, 0) {}

  int size() const { return n_; }

  bool test(int k) const {
    check(k);
    return (words_[static_cast<size_t>(k) / 64] >> (k % 64)) & 1u;
  }
  void set(int k, bool value) {
    check(k);
    const std::uint64_t bit = 1ULL << (k % 64);
    if (value)
      words_[static_cast<size_t>(k) / 64] |= bit;
    else
      words_[static_cast<size_t>(k) / 64] &= ~bit;
  }
  void flip(int k) { set(k, !test(k)); }

  friend bool operator==(const RegionMask& a, const RegionMask& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  friend bool operator!=(const RegionMask& a, const RegionMask& b) {
    return !(a == b);
  }

  /// Plain index for small-K models (bit 0 of the pattern).
  std::uint64_t low_bits() const { return words_.empty() ? 0 : words_[0]; }

 private:
  void check(int k) const {
    if (k < 0 || k >= n_) throw ContractError("RegionMask: constraint index out of range");
  }
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace grhmc
