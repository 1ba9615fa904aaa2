#include "tsg/repetition.hpp"

#include <algorithm>

#include "tsg/errors.hpp"

namespace tsg {
namespace {

constexpr std::uint64_t kMod = (1ULL << 61) - 1;
constexpr std::uint64_t kBase = 0x1f3a5b7c9d2e4f61ULL % kMod;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kMod);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  return s >= kMod ? s - kMod : s;
}

class RollingHash {
 public:
  explicit RollingHash(std::span<const std::uint64_t> ids)
      : prefix_(ids.size() + 1, 0), power_(ids.size() + 1, 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::uint64_t h = mul_mod(prefix_[i], kBase) + (ids[i] % (kMod - 1)) + 1;
      prefix_[i + 1] = h >= kMod ? h - kMod : h;
      power_[i + 1] = mul_mod(power_[i], kBase);
    }
  }

  /// Hash of [i, i + len).
  std::uint64_t get(std::size_t i, std::size_t len) const {
    std::uint64_t sub = mul_mod(prefix_[i], power_[len]);
    std::uint64_t h = prefix_[i + len] + kMod - sub;
    return h >= kMod ? h - kMod : h;
  }

 private:
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> power_;
};

// Largest l <= cap with equal(l) true, assuming equal is monotone (true then false).
template <class Pred>
std::size_t gallop(std::size_t cap, Pred equal) {
  if (cap == 0 || !equal(1)) return 0;
  std::size_t lo = 1, step = 1;
  while (true) {
    std::size_t probe = std::min(cap, lo + step);
    if (probe == lo) return lo;
    if (equal(probe)) {
      lo = probe;
      if (lo == cap) return lo;
      step *= 2;
    } else {
      std::size_t hi = probe;  // equal(hi) false
      while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (equal(mid)) lo = mid; else hi = mid;
      }
      return lo;
    }
  }
}

bool verify_witness(std::span<const std::uint64_t> ids, const PowerWitness& w) {
  std::size_t p = w.base.length;
  std::size_t end = w.base.start + p * w.exponent;
  if (p == 0 || end > ids.size()) return false;
  for (std::size_t i = w.base.start + p; i < end; ++i) {
    if (ids[i] != ids[i - p]) return false;
  }
  return true;
}

PowerScan finish(std::size_t n, std::size_t best_exp, std::size_t best_start, std::size_t best_p) {
  PowerScan scan;
  if (n == 0) return scan;
  scan.order = 1;
  if (best_exp >= 2) {
    scan.order = best_exp;
    scan.witness = PowerWitness{{best_start, best_p}, best_exp};
  }
  return scan;
}

}  // namespace

PowerScan max_power_by_periods(std::span<const std::uint64_t> ids) {
  const std::size_t n = ids.size();
  std::size_t best_exp = 1, best_start = 0, best_p = 0;
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    std::size_t run = 0;  // consecutive i with ids[i] == ids[i - p], ending at current i
    for (std::size_t i = p; i < n; ++i) {
      run = ids[i] == ids[i - p] ? run + 1 : 0;
      std::size_t exp = (run + p) / p;
      if (exp > best_exp) {
        best_exp = exp;
        best_start = i + 1 - (run + p);
        best_p = p;
      }
    }
  }
  return finish(n, best_exp, best_start, best_p);
}

PowerScan max_power(std::span<const std::uint64_t> ids) {
  const std::size_t n = ids.size();
  RollingHash hash(ids);
  std::size_t best_exp = 1, best_start = 0, best_p = 0;
  for (std::size_t p = 1; 2 * p <= n; ++p) {
    // Anchors i, i + p; skip anchors already inside the run found from the previous one.
    std::size_t covered_until = 0;
    for (std::size_t i = 0; i + p < n; i += p) {
      const std::size_t j = i + p;
      if (j < covered_until) continue;
      if (ids[i] != ids[j] && (i == 0 || ids[i - 1] != ids[j - 1])) continue;
      std::size_t fwd = 0;
      if (ids[i] == ids[j]) {
        fwd = gallop(n - j, [&](std::size_t l) { return hash.get(i, l) == hash.get(j, l); });
      }
      std::size_t back = 0;
      if (i > 0 && ids[i - 1] == ids[j - 1]) {
        back = gallop(i, [&](std::size_t l) { return hash.get(i - l, l) == hash.get(j - l, l); });
      }
      std::size_t len = p + fwd + back;
      covered_until = j + fwd;
      std::size_t exp = len / p;
      if (exp > best_exp) {
        best_exp = exp;
        best_start = i - back;
        best_p = p;
      }
    }
  }
  PowerScan scan = finish(n, best_exp, best_start, best_p);
  if (scan.witness && !verify_witness(ids, *scan.witness)) return max_power_by_periods(ids);
  return scan;
}

PowerScan max_power_order(const Word& w) {
  std::vector<std::uint64_t> ids;
  ids.reserve(w.length());
  for (Letter l : w.letters()) ids.push_back(static_cast<std::uint64_t>(static_cast<std::int64_t>(l) + (1LL << 32)));
  return max_power(ids);
}

AperiodicityCheck aperiodicity_from_scan(const PowerScan& scan, std::size_t k) {
  if (k < 1) throw PreconditionError("aperiodicity order k must be at least 1");
  AperiodicityCheck out;
  if (scan.order >= k + 1) {
    out.aperiodic = false;
    out.witness = scan.witness;
  }
  return out;
}

AperiodicityCheck is_k_aperiodic(const Word& w, std::size_t k) {
  return aperiodicity_from_scan(max_power_order(w), k);
}

Word shift_right(const Word& host, Occurrence occ, std::size_t m) {
  if (occ.start + occ.length > host.length()) throw OutOfRange("occurrence lies outside host word");
  std::size_t right = host.length() - occ.start - occ.length;
  if (m < 1 || m > right) {
    throw OutOfRange("shift " + std::to_string(m) + " exceeds the " + std::to_string(right) +
                     " letters to the right of the occurrence");
  }
  return host.subword(occ.start + m, occ.length);
}

}  // namespace tsg
