#pragma once

#include <cstdint>
#include <random>

namespace swarmform {

/// splitmix64, used to derive independent stream seeds from the master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-robot, per-subsystem random stream. Streams derived from the same
/// master seed are independent: draws from one never affect another.
class RngStream {
 public:
  RngStream() : gen_(0) {}
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  /// Stream seed for (master, robot, subsystem); subsystem ids are fixed
  /// small constants per caller.
  static RngStream derive(std::uint64_t master, std::uint64_t robot, std::uint64_t subsystem) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = a ^ (robot * 0x9e3779b97f4a7c15ULL + 0x1234567u);
    std::uint64_t b = splitmix64(s);
    s = b ^ (subsystem * 0xda942042e4dd58b5ULL);
    return RngStream(splitmix64(s));
  }

  double uniform() {  // [0, 1)
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }

  double gaussian(double stddev = 1.0) {
    if (stddev == 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, stddev)(gen_);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    return uniform() < p;
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

enum class Subsystem : std::uint64_t { Encoder = 1, Gps = 2, Comms = 3 };

}  // namespace swarmform
