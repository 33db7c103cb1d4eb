#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace kljn {

// FNV-1a 64-bit hash of a source label ("H,A", "eve.additive.B", ...).
std::uint64_t fnv1a64(std::string_view s);

// SplitMix64 finalizer; bijective scrambler used to combine seed components.
std::uint64_t mix64(std::uint64_t x);

// Deterministic seed for a named stream: combines the master seed, a run (or
// phase) index, and a label hash.  Nested streams are derived by re-keying,
// so every (master_seed, run, label) triple gets an independent generator and
// results never depend on evaluation order or thread scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::uint64_t label_hash = 0);

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::string_view label) {
    return derive_seed(master, index, fnv1a64(label));
}

// Standard-normal stream: mt19937_64 (bit-exact across platforms by the
// standard) plus an explicit Box-Muller transform.  std::normal_distribution
// is implementation-defined and would break byte-identical reports.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    // Uniform double in the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace kljn
