#include "congamma/sieve.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "congamma/error.hpp"

namespace congamma {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// floor(n^(1/k)) exactly.
std::uint64_t iroot(std::uint64_t n, unsigned k) {
  if (k == 1) return n;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
  auto pow_le = [n, k](std::uint64_t base) {
    unsigned __int128 acc = 1;
    for (unsigned e = 0; e < k; ++e) {
      acc *= base;
      if (acc > n) return false;
    }
    return true;
  };
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

std::uint64_t floor_arg(double x, const char* name) {
  if (!std::isfinite(x)) throw DomainError(std::string(name) + " must be finite", name);
  if (x < 0) return 0;
  return static_cast<std::uint64_t>(std::floor(x));
}

// Sieve odd numbers with index in [j0, j1) into bits (j0, j1 multiples of 64).
void sieve_segment(std::uint64_t j0, std::uint64_t j1, std::uint64_t limit,
                   const std::vector<std::uint32_t>& base, std::vector<std::uint64_t>& bits) {
  for (std::uint64_t w = j0 / 64; w < (j1 + 63) / 64; ++w) bits[w] = ~std::uint64_t{0};
  const std::uint64_t lo = 2 * j0 + 1;
  const std::uint64_t hi = 2 * (j1 - 1) + 1;
  for (std::uint32_t p32 : base) {
    const std::uint64_t p = p32;
    if (p == 2) continue;
    if (p * p > hi) break;
    std::uint64_t start = p * p;
    if (start < lo) {
      start = ((lo + p - 1) / p) * p;
      if (start % 2 == 0) start += p;
    }
    for (std::uint64_t m = start; m <= hi; m += 2 * p) {
      const std::uint64_t j = (m - 1) / 2;
      bits[j / 64] &= ~(std::uint64_t{1} << (j % 64));
    }
  }
  if (j0 == 0) bits[0] &= ~std::uint64_t{1};  // 1 is not prime
  // Clear entries past the limit.
  const std::uint64_t last = limit < 3 ? 0 : (limit - 1) / 2;  // index of largest odd <= limit
  for (std::uint64_t j = std::max(j0, last + 1); j < j1; ++j) {
    bits[j / 64] &= ~(std::uint64_t{1} << (j % 64));
  }
  if (limit < 3 && j0 == 0) bits[0] = 0;
}

}  // namespace

std::vector<std::uint32_t> small_primes(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = true;
  }
  return out;
}

PrimeTable PrimeTable::build(std::uint64_t limit, const SieveOptions& options) {
  if (limit < 2) throw DomainError("prime table limit must be >= 2", "limit");
  if (limit > options.ceiling) {
    throw ResourceError("prime table limit " + std::to_string(limit) + " exceeds ceiling " +
                            std::to_string(options.ceiling),
                        "limit");
  }
  if (options.segment_size == 0) throw ValidationError("segment_size must be positive", "segment_size");

  PrimeTable t;
  t.limit_ = limit;
  // Segments are whole words so segments never share a word.
  t.segment_size_ = ((options.segment_size + 63) / 64) * 64;
  const std::uint64_t n_odd = (limit - 1) / 2 + 1;  // indices 0..(limit-1)/2
  const std::uint64_t n_words = (n_odd + 63) / 64;
  t.bits_.assign(n_words, 0);

  const auto base = small_primes(static_cast<std::uint32_t>(isqrt(limit)));
  const std::uint64_t total_idx = n_words * 64;
  const std::uint64_t n_segments = (total_idx + t.segment_size_ - 1) / t.segment_size_;

  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (std::uint64_t s = next++; s < n_segments; s = next++) {
      const std::uint64_t j0 = s * t.segment_size_;
      const std::uint64_t j1 = std::min(total_idx, j0 + t.segment_size_);
      sieve_segment(j0, j1, limit, base, t.bits_);
    }
  };
  const unsigned n_threads = std::max(1u, options.threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  t.word_prefix_.resize(n_words + 1);
  std::uint32_t acc = 0;
  for (std::uint64_t w = 0; w < n_words; ++w) {
    t.word_prefix_[w] = acc;
    acc += static_cast<std::uint32_t>(__builtin_popcountll(t.bits_[w]));
  }
  t.word_prefix_[n_words] = acc;
  return t;
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n > limit_) throw RangeError("n=" + std::to_string(n) + " beyond table limit " + std::to_string(limit_), "x");
  if (n == 2) return true;
  if (n < 2 || n % 2 == 0) return false;
  const std::uint64_t j = (n - 1) / 2;
  return (bits_[j / 64] >> (j % 64)) & 1u;
}

std::uint64_t PrimeTable::count_up_to(std::uint64_t n) const {
  if (n > limit_) throw RangeError("x=" + std::to_string(n) + " beyond table limit " + std::to_string(limit_), "x");
  if (n < 2) return 0;
  if (n == 2) return 1;
  const std::uint64_t j = (n - 1) / 2;  // largest odd index <= n
  const std::uint64_t w = j / 64;
  const unsigned b = static_cast<unsigned>(j % 64);
  const std::uint64_t mask = b == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (b + 1)) - 1);
  return 1 + word_prefix_[w] + static_cast<std::uint64_t>(__builtin_popcountll(bits_[w] & mask));
}

std::vector<std::uint64_t> PrimeTable::primes_between(std::uint64_t lo, std::uint64_t hi) const {
  if (hi > limit_) throw RangeError("hi beyond table limit", "x");
  std::vector<std::uint64_t> out;
  for_each_prime(hi, [&](std::uint64_t p) {
    if (p >= lo) out.push_back(p);
  });
  return out;
}

PrimeTable primes_up_to(std::uint64_t limit, const SieveOptions& options) {
  return PrimeTable::build(limit, options);
}

std::uint64_t pi_exact(double x, const PrimeTable& table) {
  return table.count_up_to(floor_arg(x, "x"));
}

BigReal big_pi_exact(double x, const PrimeTable& table, int digits) {
  const std::uint64_t n = floor_arg(x, "x");
  if (n > table.limit()) throw RangeError("x beyond table limit", "x");
  BigReal total(0L, digits);
  for (unsigned k = 1;; ++k) {
    const std::uint64_t r = iroot(n, k);
    if (r < 2) break;
    total += BigReal(static_cast<long>(table.count_up_to(r)), digits) / BigReal(static_cast<long>(k), digits);
  }
  return total;
}

std::uint64_t double_count_exact(std::uint64_t i, std::uint64_t x, const PrimeTable& table) {
  if (i < 1) throw DomainError("i must be >= 1", "i");
  if (x < 2 || 2 * i > x - 2) throw DomainError("double_count_exact requires 2i <= x - 2", "x");
  if (x > table.limit()) throw RangeError("x beyond table limit", "x");
  const std::uint64_t gap = 2 * i;
  std::uint64_t count = 0;
  table.for_each_prime(x - gap, [&](std::uint64_t p) {
    if (table.is_prime(p + gap)) ++count;
  });
  return count;
}

StraddleCount straddle_count_exact(std::uint64_t x, const PrimeTable& table) {
  StraddleCount out{x, 0};
  if (x < 4) return out;
  if (2 * x - 3 > table.limit()) {
    throw RangeError("straddle count at x=" + std::to_string(x) + " needs primality up to 2x-3", "x");
  }
  for (std::uint64_t i = 1; i <= x - 3; ++i) {
    if (table.is_prime(x - i) && table.is_prime(x + i)) ++out.count;
  }
  return out;
}

}  // namespace congamma
