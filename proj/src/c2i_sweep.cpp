// Sweep for sum_{i<=N} (C_{2i}/C_2)^2 / (2i).
//
// Each block (lo, hi] keeps, per i, the product of the odd primes (with
// multiplicity) found so far and the running ratio f = prod (p-1)/(p-2).
// Whatever is left of the odd part after the small primes is a single prime.

#include <cmath>
#include <thread>

#include "congamma/counting.hpp"
#include "congamma/error.hpp"
#include "congamma/sieve.hpp"

namespace congamma {

namespace {

std::uint64_t isqrt64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

double ratio_factor(std::uint64_t p) {
  return static_cast<double>(p - 1) / static_cast<double>(p - 2);
}

}  // namespace

double c2i_ratio(std::uint64_t i) {
  if (i == 0) throw DomainError("i must be >= 1", "i");
  std::uint64_t m = i >> __builtin_ctzll(i);
  double f = 1.0;
  for (std::uint64_t p = 3; p * p <= m; p += 2) {
    if (m % p == 0) {
      f *= ratio_factor(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) f *= ratio_factor(m);
  return f;
}

double c2i_block_sum(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return 0.0;
  const std::uint64_t n = hi - lo;
  std::vector<std::uint64_t> prod(n, 1);
  std::vector<double> f(n, 1.0);

  const auto base = small_primes(static_cast<std::uint32_t>(isqrt64(hi)));
  for (std::uint32_t p32 : base) {
    const std::uint64_t p = p32;
    if (p == 2) continue;
    const double factor = ratio_factor(p);
    for (std::uint64_t m = (lo / p + 1) * p; m <= hi; m += p) {
      f[m - lo - 1] *= factor;
      prod[m - lo - 1] *= p;
    }
    for (std::uint64_t pk = p * p; pk <= hi; pk *= p) {
      for (std::uint64_t m = (lo / pk + 1) * pk; m <= hi; m += pk) prod[m - lo - 1] *= p;
    }
  }

  Neumaier acc;
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    const std::uint64_t i = lo + 1 + idx;
    const std::uint64_t odd = i >> __builtin_ctzll(i);
    const std::uint64_t rem = odd / prod[idx];
    double r = f[idx];
    if (rem > 1) r *= ratio_factor(rem);
    acc.add(r * r / (2.0 * static_cast<double>(i)));
  }
  return acc.value();
}

BigReal c2i_normalized_sum(std::uint64_t limit, int digits, const C2iSweepOptions& options) {
  if (limit < 1) throw DomainError("limit must be >= 1", "limit");
  if (limit > options.ceiling) {
    throw ResourceError("c2i limit " + std::to_string(limit) + " exceeds ceiling " + std::to_string(options.ceiling),
                        "limit");
  }
  if (options.block == 0) throw ValidationError("block must be positive", "block");
  if (options.checkpoint_every == 0 || options.checkpoint_every % options.block != 0) {
    throw ValidationError("checkpoint_every must be a positive multiple of block", "checkpoint_every");
  }

  std::uint64_t start = 0;
  BigReal sum(0L, digits);
  if (options.resume) {
    if (options.resume->i > limit) throw ValidationError("resume checkpoint beyond limit", "cache");
    if (options.resume->i % options.block != 0) throw ValidationError("resume checkpoint not block aligned", "cache");
    start = options.resume->i;
    sum = options.resume->normalized_sum.at_digits(digits);
  }

  const std::uint64_t B = options.block;
  const unsigned threads = std::max(1u, options.threads);
  std::vector<double> partial(threads);
  std::uint64_t lo = start;
  while (lo < limit) {
    // One batch: up to `threads` consecutive blocks.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    for (std::uint64_t b = lo; b < limit && ranges.size() < threads;) {
      const std::uint64_t e = std::min(limit, (b / B + 1) * B);
      ranges.emplace_back(b, e);
      b = e;
    }
    if (ranges.size() == 1) {
      partial[0] = c2i_block_sum(ranges[0].first, ranges[0].second);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < ranges.size(); ++k) {
        pool.emplace_back([&, k] { partial[k] = c2i_block_sum(ranges[k].first, ranges[k].second); });
      }
      for (auto& t : pool) t.join();
    }
    for (std::size_t k = 0; k < ranges.size(); ++k) {
      sum += BigReal(partial[k], digits);
      const std::uint64_t end = ranges[k].second;
      if (options.on_checkpoint && end % options.checkpoint_every == 0) {
        options.on_checkpoint(C2iCheckpoint{end, sum});
      }
    }
    lo = ranges.back().second;
  }
  return sum;
}

BigReal c2i_square_sum(std::uint64_t limit, const PrecisionPolicy& policy, const C2iSweepOptions& options) {
  policy.validate();
  const int w = policy.digits + 5;
  const BigReal c2 = twin_constant(policy.with_digits(w));
  return (c2 * c2 * c2i_normalized_sum(limit, w, options)).at_digits(policy.digits);
}

}  // namespace congamma
