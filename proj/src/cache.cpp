#include "congamma/cache.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "congamma/error.hpp"

namespace congamma {

namespace {

std::vector<std::pair<long, CacheRecord>> read_numbered(const std::string& path) {
  std::vector<std::pair<long, CacheRecord>> out;
  std::ifstream in(path);
  if (!in) return out;
  static const std::regex decimal(R"([+-]?[0-9]+(\.[0-9]*)?([eE][+-]?[0-9]+)?)");
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, '\t')) f.push_back(item);
    if (f.size() != 4) throw CorruptionError("cache line " + std::to_string(line_no) + ": expected 4 fields", line_no);
    CacheRecord r;
    r.kind = f[0];
    if (r.kind != kC2iKind) {
      throw CorruptionError("cache line " + std::to_string(line_no) + ": unknown kind '" + r.kind + "'", line_no);
    }
    const auto [p1, e1] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), r.checkpoint_i);
    if (f[1].empty() || e1 != std::errc() || p1 != f[1].data() + f[1].size() || r.checkpoint_i == 0) {
      throw CorruptionError("cache line " + std::to_string(line_no) + ": bad checkpoint_i", line_no);
    }
    if (!std::regex_match(f[2], decimal)) {
      throw CorruptionError("cache line " + std::to_string(line_no) + ": bad sum_decimal", line_no);
    }
    r.sum_decimal = f[2];
    const auto [p3, e3] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), r.digits);
    if (f[3].empty() || e3 != std::errc() || p3 != f[3].data() + f[3].size() || r.digits < BigReal::kMinDigits) {
      throw CorruptionError("cache line " + std::to_string(line_no) + ": bad digits", line_no);
    }
    if (!out.empty() && r.checkpoint_i <= out.back().second.checkpoint_i) {
      throw CorruptionError("cache line " + std::to_string(line_no) + ": checkpoints must increase", line_no);
    }
    out.emplace_back(line_no, std::move(r));
  }
  return out;
}

}  // namespace

std::vector<CacheRecord> read_cache(const std::string& path) {
  std::vector<CacheRecord> out;
  for (auto& [line, r] : read_numbered(path)) out.push_back(std::move(r));
  return out;
}

std::string format_record(const CacheRecord& r) {
  return r.kind + "\t" + std::to_string(r.checkpoint_i) + "\t" + r.sum_decimal + "\t" + std::to_string(r.digits);
}

std::string resolve_cache_path(const std::string& given) {
  const char* env = std::getenv("CONGAMMA_CACHE_DIR");
  const std::string dir = env && *env ? env : "";
  if (given.empty()) return dir.empty() ? std::string() : dir + "/c2i.cache";
  if (given.front() == '/' || given.find('/') != std::string::npos || dir.empty()) return given;
  return dir + "/" + given;
}

C2iCache::C2iCache(std::string path) : path_(std::move(path)), records_(read_numbered(path_)) {}

std::optional<C2iCheckpoint> C2iCache::resume_for(std::uint64_t limit, const C2iSweepOptions& options) {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t best = records_.size();
  for (std::size_t k = 0; k < records_.size(); ++k) {
    if (records_[k].second.checkpoint_i <= limit) best = k;
  }
  if (best == records_.size()) return std::nullopt;
  const auto& [line, rec] = records_[best];
  if (rec.checkpoint_i % options.block != 0) {
    throw CorruptionError("cache line " + std::to_string(line) + ": checkpoint not aligned to the sweep block", line);
  }
  BigReal stored = BigReal::parse(rec.sum_decimal, rec.digits);
  const int d = rec.digits;

  // Recompute the final segment from the previous checkpoint (or from zero).
  C2iSweepOptions verify = options;
  verify.on_checkpoint = nullptr;
  verify.resume.reset();
  BigReal previous(0L, d);
  int prev_digits = d;
  if (best > 0) {
    const auto& prev = records_[best - 1].second;
    previous = BigReal::parse(prev.sum_decimal, prev.digits);
    prev_digits = prev.digits;
    verify.resume = C2iCheckpoint{prev.checkpoint_i, BigReal(0L, d)};
  }
  const BigReal segment = c2i_normalized_sum(rec.checkpoint_i, d, verify);
  const BigReal diff = abs((stored - previous) - segment);
  const int tol_digits = std::min(d, prev_digits) - 5;
  const BigReal scale = max(BigReal(1L, d), abs(stored));
  if (diff > scale * pow(BigReal(10L, d), -static_cast<long>(tol_digits))) {
    throw CorruptionError("cache line " + std::to_string(line) + ": stored sum fails re-verification", line);
  }
  return C2iCheckpoint{rec.checkpoint_i, stored};
}

void C2iCache::append(const C2iCheckpoint& checkpoint) {
  std::lock_guard<std::mutex> lock(mu_);
  if (path_.empty()) return;
  if (!records_.empty() && checkpoint.i <= records_.back().second.checkpoint_i) return;
  CacheRecord r;
  r.kind = kC2iKind;
  r.checkpoint_i = checkpoint.i;
  r.digits = checkpoint.normalized_sum.digits();
  r.sum_decimal = checkpoint.normalized_sum.str(r.digits);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw ResourceError("cannot write cache file '" + path_ + "'", "cache");
  out << format_record(r) << '\n';
  out.flush();
  const long line = records_.empty() ? 1 : records_.back().first + 1;
  records_.emplace_back(line, std::move(r));
}

}  // namespace congamma
