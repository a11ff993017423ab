#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "congamma/bigreal.hpp"
#include "congamma/policy.hpp"

namespace congamma {

struct SieveOptions {
  /// Odd numbers per segment.
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  unsigned threads = 1;
  /// Largest limit a table may be built for.
  std::uint64_t ceiling = std::uint64_t{1} << 32;
};

/// Exact primality up to `limit`, one bit per odd number, built segment by
/// segment. Immutable once built; content does not depend on segment size or
/// thread count.
class PrimeTable {
 public:
  static PrimeTable build(std::uint64_t limit, const SieveOptions& options = {});

  std::uint64_t limit() const { return limit_; }
  std::uint64_t segment_size() const { return segment_size_; }

  bool is_prime(std::uint64_t n) const;
  /// pi(n) for n <= limit.
  std::uint64_t count_up_to(std::uint64_t n) const;
  /// All primes in [lo, hi], hi <= limit.
  std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) const;

  /// Calls f(p) for every prime p <= hi in increasing order.
  template <typename F>
  void for_each_prime(std::uint64_t hi, F&& f) const {
    if (hi > limit_) hi = limit_;
    if (hi >= 2) f(std::uint64_t{2});
    const std::uint64_t last = hi < 3 ? 0 : (hi - 1) / 2;
    for (std::uint64_t w = 0; w * 64 <= last && w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        const int b = __builtin_ctzll(word);
        const std::uint64_t j = w * 64 + static_cast<std::uint64_t>(b);
        if (j > last) return;
        f(2 * j + 1);
        word &= word - 1;
      }
    }
  }

 private:
  PrimeTable() = default;

  std::uint64_t limit_ = 0;
  std::uint64_t segment_size_ = 0;
  // bit j <-> odd number 2j+1; set means prime.
  std::vector<std::uint64_t> bits_;
  // count of set bits in words [0, w).
  std::vector<std::uint32_t> word_prefix_;
};

/// Simple sieve for small bounds (base primes, trial tables).
std::vector<std::uint32_t> small_primes(std::uint32_t bound);

PrimeTable primes_up_to(std::uint64_t limit, const SieveOptions& options = {});

/// #{p prime <= floor(x)}.
std::uint64_t pi_exact(double x, const PrimeTable& table);

/// Riemann's prime-power count Pi(x) = sum_{p^k <= x} 1/k.
BigReal big_pi_exact(double x, const PrimeTable& table, int digits = 50);

/// #{p : p and p+2i prime, p+2i <= x}.
std::uint64_t double_count_exact(std::uint64_t i, std::uint64_t x, const PrimeTable& table);

struct StraddleCount {
  std::uint64_t x = 0;
  /// #{i : 1 <= i <= x-3, x-i and x+i both prime}.
  std::uint64_t count = 0;
};

StraddleCount straddle_count_exact(std::uint64_t x, const PrimeTable& table);

// --- Hardy-Littlewood constant sums --------------------------------------

struct C2iCheckpoint {
  std::uint64_t i = 0;
  /// sum_{m<=i} (C_{2m}/C_2)^2 / (2m)
  BigReal normalized_sum;
};

struct C2iSweepOptions {
  unsigned threads = 1;
  /// Block length; checkpoints must be multiples of it.
  std::uint64_t block = 1'000'000;
  std::uint64_t checkpoint_every = 10'000'000;
  std::uint64_t ceiling = std::uint64_t{1} << 32;
  std::optional<C2iCheckpoint> resume;
  std::function<void(const C2iCheckpoint&)> on_checkpoint;
};

/// (C_{2i}/C_2) = prod_{odd p | i} (p-1)/(p-2), in double.
double c2i_ratio(std::uint64_t i);

/// Compensated double sum of (C_{2i}/C_2)^2/(2i) over i in (lo, hi], computed
/// with a smallest-prime-power sweep. Deterministic for given (lo, hi).
double c2i_block_sum(std::uint64_t lo, std::uint64_t hi);

/// Relative rounding bound of the double sweep: each term carries at most
/// ~30 roundings (at most 15 distinct odd primes below 2^64), and the
/// compensated sum adds O(eps).
inline constexpr double kC2iSweepRelError = 1e-14;

/// sum_{i<=limit} (C_{2i}/C_2)^2/(2i). Blocks are merged in index order, so
/// the result is bit-identical for any thread count.
BigReal c2i_normalized_sum(std::uint64_t limit, int digits, const C2iSweepOptions& options = {});

/// sum_{i<=limit} C_{2i}^2/(2i).
BigReal c2i_square_sum(std::uint64_t limit, const PrecisionPolicy& policy, const C2iSweepOptions& options = {});

}  // namespace congamma
