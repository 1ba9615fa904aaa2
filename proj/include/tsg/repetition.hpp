#pragma once

// Power detection in finite sequences: k-aperiodicity, maximal power order,
// and the right shift R_m(A; W) of a subword.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tsg/word.hpp"

namespace tsg {

/// A contiguous block [start, start + length) of some host sequence.
struct Occurrence {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

/// `exponent` consecutive copies of the block `base` appear starting at base.start.
struct PowerWitness {
  Occurrence base;
  std::size_t exponent = 0;

  friend bool operator==(const PowerWitness&, const PowerWitness&) = default;
};

struct PowerScan {
  /// Largest k with some A^k (A nonempty) occurring; 1 for square-free input, 0 for empty input.
  std::size_t order = 0;
  /// Present iff order >= 2.
  std::optional<PowerWitness> witness;
};

struct AperiodicityCheck {
  bool aperiodic = true;
  std::optional<PowerWitness> witness;

  explicit operator bool() const { return aperiodic; }
};

/// Maximal power order of a sequence of token ids.
///
/// Every run of period p and length >= 2p contains two positions i, i + p with
/// i a multiple of p; extending from those anchors with longest-common-extension
/// queries finds every run in O(n log n) queries. Queries use polynomial hashing;
/// the reported witness is re-verified letter by letter and a collision falls back
/// to the quadratic period scan.
PowerScan max_power(std::span<const std::uint64_t> ids);

/// Quadratic reference scan over all (period, position) pairs.
PowerScan max_power_by_periods(std::span<const std::uint64_t> ids);

/// Maps arbitrary comparable tokens to dense ids preserving equality.
template <class T>
std::vector<std::uint64_t> intern(std::span<const T> seq) {
  std::map<T, std::uint64_t> ids;
  std::vector<std::uint64_t> out;
  out.reserve(seq.size());
  for (const auto& t : seq) {
    auto [it, inserted] = ids.try_emplace(t, ids.size());
    out.push_back(it->second);
  }
  return out;
}

template <class T>
PowerScan max_power_order(std::span<const T> seq) {
  auto ids = intern(seq);
  return max_power(ids);
}

template <class T>
PowerScan max_power_order(const std::vector<T>& seq) {
  return max_power_order(std::span<const T>(seq));
}

PowerScan max_power_order(const Word& w);

/// No (k+1)-th power occurs as a contiguous block. Requires k >= 1.
template <class T>
AperiodicityCheck is_k_aperiodic(std::span<const T> seq, std::size_t k);

template <class T>
AperiodicityCheck is_k_aperiodic(const std::vector<T>& seq, std::size_t k) {
  return is_k_aperiodic(std::span<const T>(seq), k);
}

AperiodicityCheck is_k_aperiodic(const Word& w, std::size_t k);

AperiodicityCheck aperiodicity_from_scan(const PowerScan& scan, std::size_t k);

template <class T>
AperiodicityCheck is_k_aperiodic(std::span<const T> seq, std::size_t k) {
  return aperiodicity_from_scan(max_power_order(seq), k);
}

/// R_m(A; W): the window of |A| letters starting m positions to the right of `occ`.
/// Requires 1 <= m <= letters available to the right of the occurrence.
Word shift_right(const Word& host, Occurrence occ, std::size_t m);

}  // namespace tsg
