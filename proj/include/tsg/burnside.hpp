#pragma once

// A long reduced word xi over {a, b} built from a square-free ternary word,
// the aperiodicity check for products xi^e1 x1 ... xi^ek xk, and the desk-scale
// chain of checks behind non-amenability of free Burnside groups.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tsg/repetition.hpp"
#include "tsg/tree_partition.hpp"
#include "tsg/word.hpp"

namespace tsg {

struct Lemma4Params {
  /// Substitution images are appended while the length is below this, so N
  /// lands in [min_length, min_length + 4].
  std::size_t min_length = 10001;
  /// |alpha| = |beta|
  std::size_t affix = 400;
  /// Windows [u, u + zone_window] must meet D for u in (0, head_zone) and
  /// u in (N - tail_from, N - tail_to).
  std::size_t head_zone = 340;
  std::size_t tail_from = 400;
  std::size_t tail_to = 60;
  std::size_t zone_window = 60;
  /// Windows [u, u + global_window] must meet D for u in (0, N - global_window).
  std::size_t global_window = 1000;
  /// 3 |D cap W| < |B cap W| for W = [u, u + density_window], u in (0, N - density_window).
  std::size_t density_window = 100;
  /// Fresh seeds tried before giving up.
  std::size_t attempts = 64;

  static Lemma4Params full() { return {}; }
  /// N around 1000 with every window scaled by 1/10 except the density window.
  static Lemma4Params desk();
};

struct Lemma4Result {
  /// Reduced word over a, b with b inverted at the positions of D.
  Word xi;
  /// 1-based positions.
  std::vector<std::size_t> b_positions;
  std::vector<std::size_t> d_positions;
  std::size_t attempts = 0;
  /// Conditions (i)-(iv) on xi and (1)-(4) on D, re-derived from xi alone.
  VerificationReport report;
  std::vector<std::string> notes;
};

/// Builds xi for the seed. Throws PreconditionError with diagnostics when no
/// attempt yields a valid D.
Lemma4Result construct_xi_lemma4(std::uint64_t seed, const Lemma4Params& params = Lemma4Params::full());

/// Re-checks (i)-(iv) on xi and recovers D (positions of b^-1) and B to
/// re-check (1)-(4) plus distinctness of the wrap-around gap, by direct window scans.
VerificationReport verify_lemma4(const Word& xi, const Lemma4Params& params);

struct Lemma5Params {
  std::size_t power_bound = 500;
  std::size_t x_aperiodicity = 10;
  std::size_t max_x_length = 192;
  std::size_t affix = 400;
  /// Run verify_lemma4 on xi first; a failing check is a PreconditionError.
  bool check_xi = true;
  Lemma4Params xi_params = Lemma4Params::full();

  static Lemma5Params full() { return {}; }
  static Lemma5Params desk();
};

struct BlockSpan {
  /// Start of xi_i in the reduced product and its length.
  std::size_t xi_begin = 0;
  std::size_t xi_length = 0;
  /// Surviving letters of x_i.
  std::size_t u_length = 0;
  /// xi_i is a contiguous subword of xi^e_i.
  bool contiguous = true;
};

enum class Lemma5Case { None, Short, Long };

struct Lemma5Analysis {
  bool holds = false;
  std::size_t order = 0;
  std::optional<PowerWitness> witness;
  std::size_t reduced_length = 0;
  std::vector<BlockSpan> blocks;
  /// Every block keeps |xi_i| >= |xi| - affix contiguously and |u_i| <= affix.
  bool structure_ok = false;
  /// Short: |A| <= |xi| / 5 and some xi_i holds a 4th power. Long otherwise.
  Lemma5Case violation_case = Lemma5Case::None;
  /// Blocks the witness touches, inclusive.
  std::optional<std::pair<std::size_t, std::size_t>> witness_blocks;
  std::optional<VerificationReport> xi_report;
};

/// Reduces xi^e1 x1 ... xi^ek xk and checks it has no power of order
/// power_bound. Throws PreconditionError when the xs are not
/// x_aperiodicity-aperiodic (the message carries the witness), when some x_i is
/// trivial or too long, or when eps has a bad entry or size.
Lemma5Analysis verify_lemma5(const Word& xi, const std::vector<Word>& xs, const std::vector<int>& eps,
                             const Lemma5Params& params = Lemma5Params::full());

enum class BurnsideFault {
  None,
  /// beta replaced by alpha, so (iv) fails.
  Affix,
  /// a long periodic stretch spliced into the middle of xi.
  Power,
};

struct BurnsideConfig {
  std::size_t samples = 50;
  std::uint64_t seed = 1;
  std::size_t k_max = 20;
  bool desk = false;
  BurnsideFault fault = BurnsideFault::None;
  std::size_t jobs = 1;
};

struct BurnsideSample {
  std::size_t k = 0;
  std::size_t order = 0;
  std::size_t reduced_length = 0;
  bool holds = false;
  Lemma5Case violation_case = Lemma5Case::None;
  std::vector<Word> xs;
  std::vector<int> eps;
};

struct BurnsideStage {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct BurnsideReport {
  std::vector<BurnsideStage> stages;
  std::optional<Lemma4Result> lemma4;
  /// xi after fault injection; what the later stages used.
  Word xi_used;
  std::vector<BurnsideSample> samples;
  /// Implications recorded in order, each with its constants.
  std::vector<std::string> chain;
  std::vector<std::string> external_assumptions;
  /// First failing stage, if any.
  std::optional<std::string> failed_stage;
  bool pass() const { return !failed_stage; }
};

BurnsideReport burnside_pipeline(const BurnsideConfig& config);

/// Uniform length in [1, max_length], then a uniform reduced word of that length over free(2).
Word random_reduced_word(std::mt19937_64& rng, std::size_t max_length);

}  // namespace tsg
