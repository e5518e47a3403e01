#pragma once

#include <memory>
#include <vector>

#include "bitprobe/bit_table.hpp"
#include "bitprobe/core.hpp"
#include "bitprobe/decision_tree.hpp"
#include "bitprobe/rng.hpp"

namespace bitprobe::classical {

using core::MembershipInstance;
using core::SchemeParams;

// Deterministic storage + deterministic query trees. Storage output length
// equals params().space for every instance.
class DeterministicScheme {
 public:
  virtual ~DeterministicScheme() = default;
  virtual SchemeParams params() const = 0;
  virtual BitTable store(const MembershipInstance& instance) const = 0;
  virtual int query(int q, TableReader& reader) const = 0;
  // Materialized decision tree for query q, when the scheme has one
  // (bit vector and search-found schemes do; the perfect-hash scheme's
  // trees are implicit in its query procedure).
  virtual const DecisionTree* tree(int /*q*/) const { return nullptr; }
};

// Deterministic storage + randomized query.
class RandomizedScheme {
 public:
  virtual ~RandomizedScheme() = default;
  virtual SchemeParams params() const = 0;
  virtual BitTable store(const MembershipInstance& instance) const = 0;
  virtual int query(int q, TableReader& reader, SplitRng& rng) const = 0;
};

// Characteristic-vector scheme: s = m, one probe, zero error. The capacity
// defaults to m (any subset can be stored); a smaller n only narrows the set
// enumeration used by the verifier checks.
class BitVectorScheme : public DeterministicScheme {
 public:
  explicit BitVectorScheme(int m);
  BitVectorScheme(int m, int n);
  SchemeParams params() const override;
  BitTable store(const MembershipInstance& instance) const override;
  int query(int q, TableReader& reader) const override;
  const DecisionTree* tree(int q) const override;

 private:
  int m_;
  int n_;
  std::vector<DecisionTree> trees_;
};

// Explicit scheme over the canonical set enumeration (all |S| <= n in
// size-then-lex order): one stored table per set, one tree per query.
// This is the shape exhaustive_search produces.
class TableScheme : public DeterministicScheme {
 public:
  TableScheme(int m, int n, int s, int t, std::vector<BitTable> tables, std::vector<DecisionTree> trees);
  SchemeParams params() const override;
  BitTable store(const MembershipInstance& instance) const override;
  int query(int q, TableReader& reader) const override;
  const DecisionTree* tree(int q) const override;
  const std::vector<BitTable>& tables() const { return tables_; }

 private:
  int m_, n_, s_, t_;
  std::vector<BitTable> tables_;               // indexed by canonical set rank
  std::vector<std::vector<int>> sets_;         // canonical enumeration
  std::vector<DecisionTree> trees_;            // indexed by query element
};

// One-probe randomized scheme with pseudo-random probe sets. Storing S sets
// every location in a member's probe set to 1, so false negatives are
// impossible; false positives are controlled by the calibration factors.
class RandomizedOneProbeScheme : public RandomizedScheme {
 public:
  // Calibrated defaults for (degree_factor, space_factor); see the bench in
  // tests for the measured false-positive rates backing them.
  static constexpr double kDefaultDegreeFactor = 1.0;
  static constexpr double kDefaultSpaceFactor = 2.0;

  RandomizedOneProbeScheme(int m, int n, double epsilon, double degree_factor, double space_factor,
                           uint64_t seed);

  SchemeParams params() const override;
  BitTable store(const MembershipInstance& instance) const override;
  int query(int q, TableReader& reader, SplitRng& rng) const override;

  int degree() const { return degree_; }
  uint64_t seed() const { return seed_; }
  double degree_factor() const { return degree_factor_; }
  double space_factor() const { return space_factor_; }
  const std::vector<int>& probe_set(int q) const { return probe_sets_.at(static_cast<size_t>(q)); }
  // One deterministic probe: trial i of an amplified run with fixed coins.
  int query_with_coin(int q, int coin, TableReader& reader) const;

 private:
  int m_, n_, space_, degree_;
  double epsilon_, degree_factor_, space_factor_;
  uint64_t seed_;
  std::vector<std::vector<int>> probe_sets_;
};

// Synthetic two-sided epsilon-error one-probe scheme: characteristic-vector
// storage, query reads the true bit and flips it with probability epsilon.
// Used to exercise the amplification bounds with a genuinely erring base.
class NoisyOneProbeScheme : public RandomizedScheme {
 public:
  NoisyOneProbeScheme(int m, double epsilon);
  SchemeParams params() const override;
  BitTable store(const MembershipInstance& instance) const override;
  int query(int q, TableReader& reader, SplitRng& rng) const override;

 private:
  int m_;
  double epsilon_;
};

// k-fold repetition, accepting iff strictly more than floor(3k/4) trials
// accept. k = 1 reduces to the base scheme.
class AmplifiedScheme : public RandomizedScheme {
 public:
  AmplifiedScheme(std::shared_ptr<const RandomizedScheme> base, int k);
  SchemeParams params() const override;
  BitTable store(const MembershipInstance& instance) const override;
  int query(int q, TableReader& reader, SplitRng& rng) const override;
  int repetitions() const { return k_; }
  const RandomizedScheme& base() const { return *base_; }
  static int accept_threshold(int k) { return 3 * k / 4; }  // accept iff count > this

 private:
  std::shared_ptr<const RandomizedScheme> base_;
  int k_;
};

// Simplified FKS-style two-level scheme. Layout (all widths fixed by (m, n),
// so s is set-independent):
//   [ first-level seed : 8 ]
//   [ n bucket descriptors : (seed 8, count ceil(log2(n+1)), offset ceil(log2(4n+1))) ]
//   [ 4n slots : (occupied 1, element id ceil(log2 m)) ]
// Bucket b holds count_b members; its slot block has count_b^2 slots and the
// in-bucket hash is searched until injective on the bucket's members. The
// query reads the seed, its bucket descriptor, and one slot, then compares
// the stored id with the query element, so correctness is structural.
class PerfectHashScheme : public DeterministicScheme {
 public:
  struct BuildError : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  // Documented constants: s <= kSpaceConstant * n * log2(m) and
  // probes <= kProbeConstant * log2(m), valid for m >= 256 and n <= m.
  static constexpr int kSpaceConstant = 8;
  static constexpr int kProbeConstant = 4;
  static constexpr int kSeedBits = 6;  // log2(kRetryBudget)
  static constexpr int kRetryBudget = 64;

  PerfectHashScheme(int m, int n, uint64_t build_seed);

  SchemeParams params() const override;
  // Throws BuildError when the seed search exceeds the retry budget
  // (caller reseeds with a different build seed).
  BitTable store(const MembershipInstance& instance) const override;
  int query(int q, TableReader& reader) const override;

  int space() const { return space_; }
  int id_bits() const { return id_bits_; }
  int max_probes() const;

 private:
  int m_, n_;
  uint64_t build_seed_;
  int id_bits_, count_bits_, offset_bits_, slot_bits_, total_slots_, space_;

  int header_bits() const { return kSeedBits; }
  int descriptor_bits() const { return kSeedBits + count_bits_ + offset_bits_; }
  int descriptor_base(int bucket) const { return header_bits() + bucket * descriptor_bits(); }
  int slots_base() const { return header_bits() + n_ * descriptor_bits(); }
  int bucket_of(uint64_t seed1, int x) const;
  int slot_of(uint64_t seed2, int x, int slots) const;
};

struct ErrorRates {
  double false_positive = 0.0;
  double false_negative = 0.0;
  size_t probes_per_query = 0;  // max probes observed over all trials
};

// Monte-Carlo error estimate: FN trials draw uniformly from members, FP
// trials from non-members. Deterministic for a fixed seed. An empty stored
// set has FN rate 0 by definition.
ErrorRates empirical_error(const RandomizedScheme& scheme, const MembershipInstance& instance,
                           int trials, uint64_t seed);
ErrorRates empirical_error(const DeterministicScheme& scheme, const MembershipInstance& instance,
                           int trials, uint64_t seed);

}  // namespace bitprobe::classical
