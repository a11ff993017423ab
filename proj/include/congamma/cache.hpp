#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "congamma/sieve.hpp"

namespace congamma {

/// One line of a cache file: `kind<TAB>checkpoint_i<TAB>sum_decimal<TAB>digits`.
/// For kind c2i_square_sum the stored sum is the normalised
/// sum_{m<=i} (C_{2m}/C_2)^2/(2m); the C_2^2 factor is applied on use.
struct CacheRecord {
  std::string kind;
  std::uint64_t checkpoint_i = 0;
  std::string sum_decimal;
  int digits = 0;
};

inline constexpr const char* kC2iKind = "c2i_square_sum";

/// Parses a cache file. A missing file is an empty cache. Malformed lines and
/// non-increasing checkpoints raise CorruptionError with the line number.
std::vector<CacheRecord> read_cache(const std::string& path);

std::string format_record(const CacheRecord& record);

/// Resolves --cache: absolute or containing '/' is used as is, a bare name
/// goes under $CONGAMMA_CACHE_DIR (or the working directory). An empty name
/// with CONGAMMA_CACHE_DIR set means "$CONGAMMA_CACHE_DIR/c2i.cache".
std::string resolve_cache_path(const std::string& given);

/// Append-only checkpoint store for the c2i sweep. A single instance is the
/// only writer of its file.
class C2iCache {
 public:
  explicit C2iCache(std::string path);

  const std::string& path() const { return path_; }

  /// Largest checkpoint <= limit, after re-verifying it by recomputing the
  /// segment since the previous checkpoint. Throws CorruptionError on
  /// mismatch.
  std::optional<C2iCheckpoint> resume_for(std::uint64_t limit, const C2iSweepOptions& options);

  /// Appends a record if it extends the file.
  void append(const C2iCheckpoint& checkpoint);

 private:
  std::string path_;
  std::mutex mu_;
  std::vector<std::pair<long, CacheRecord>> records_;  // (line number, record)
};

}  // namespace congamma
