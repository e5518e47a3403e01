#include "bitprobe/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace bitprobe::classical {

namespace {

uint64_t mix64(uint64_t a, uint64_t b) {
  uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int bits_for(uint64_t max_value) {  // width needed to store values in [0, max_value]
  int w = 1;
  while ((max_value >> w) != 0) ++w;
  return w;
}

}  // namespace

// --- BitVectorScheme ---

BitVectorScheme::BitVectorScheme(int m) : BitVectorScheme(m, m) {}

BitVectorScheme::BitVectorScheme(int m, int n) : m_(m), n_(n) {
  if (m < 1) throw std::invalid_argument("BitVectorScheme: m must be >= 1");
  if (n < 1 || n > m) throw std::invalid_argument("BitVectorScheme: capacity must be in [1, m]");
  trees_.reserve(static_cast<size_t>(m));
  for (int q = 0; q < m; ++q) trees_.push_back(DecisionTree::single_probe(q, 0, 1));
}

SchemeParams BitVectorScheme::params() const {
  return SchemeParams{m_, n_, m_, 1, 0.0, std::nullopt};
}

BitTable BitVectorScheme::store(const MembershipInstance& instance) const {
  if (instance.universe_size != m_)
    throw std::invalid_argument("BitVectorScheme::store: universe size mismatch");
  BitTable table(static_cast<size_t>(m_));
  for (int x : instance.members) table.set(static_cast<size_t>(x), 1);
  return table;
}

int BitVectorScheme::query(int q, TableReader& reader) const {
  return trees_.at(static_cast<size_t>(q)).eval(reader);
}

const DecisionTree* BitVectorScheme::tree(int q) const { return &trees_.at(static_cast<size_t>(q)); }

// --- TableScheme ---

TableScheme::TableScheme(int m, int n, int s, int t, std::vector<BitTable> tables,
                         std::vector<DecisionTree> trees)
    : m_(m), n_(n), s_(s), t_(t), tables_(std::move(tables)), trees_(std::move(trees)) {
  sets_ = core::subsets_up_to(m, n);
  if (tables_.size() != sets_.size())
    throw std::invalid_argument("TableScheme: one table per canonical set required");
  if (trees_.size() != static_cast<size_t>(m))
    throw std::invalid_argument("TableScheme: one tree per query required");
  for (const auto& table : tables_)
    if (table.size() != static_cast<size_t>(s))
      throw std::invalid_argument("TableScheme: table length mismatch");
  for (const auto& tree : trees_) {
    tree.validate(s);
    if (tree.depth() > t) throw std::invalid_argument("TableScheme: tree deeper than t");
  }
}

SchemeParams TableScheme::params() const { return SchemeParams{m_, n_, s_, t_, 0.0, std::nullopt}; }

BitTable TableScheme::store(const MembershipInstance& instance) const {
  if (instance.universe_size != m_) throw std::invalid_argument("TableScheme::store: universe mismatch");
  if (static_cast<int>(instance.members.size()) > n_)
    throw std::invalid_argument("TableScheme::store: set too large");
  for (size_t i = 0; i < sets_.size(); ++i)
    if (sets_[i] == instance.members) return tables_[i];
  throw std::logic_error("TableScheme::store: set not in canonical enumeration");
}

int TableScheme::query(int q, TableReader& reader) const {
  return trees_.at(static_cast<size_t>(q)).eval(reader);
}

const DecisionTree* TableScheme::tree(int q) const { return &trees_.at(static_cast<size_t>(q)); }

// --- RandomizedOneProbeScheme ---

RandomizedOneProbeScheme::RandomizedOneProbeScheme(int m, int n, double epsilon, double degree_factor,
                                                   double space_factor, uint64_t seed)
    : m_(m),
      n_(n),
      epsilon_(epsilon),
      degree_factor_(degree_factor),
      space_factor_(space_factor),
      seed_(seed) {
  if (m < 2 || n < 1) throw std::invalid_argument("RandomizedOneProbeScheme: need m >= 2, n >= 1");
  if (!(epsilon > 0.0) || !(epsilon < 0.5))
    throw std::invalid_argument("RandomizedOneProbeScheme: epsilon must be in (0, 1/2)");
  double log_m = std::log2(static_cast<double>(m));
  space_ = static_cast<int>(std::ceil(space_factor * n * log_m / (epsilon * epsilon)));
  degree_ = static_cast<int>(std::ceil(degree_factor * log_m / epsilon));
  if (space_ < 1 || degree_ < 1)
    throw std::invalid_argument("RandomizedOneProbeScheme: factors yield empty table or probe set");

  SplitRng base = SplitRng(seed).split("probe-set");
  probe_sets_.resize(static_cast<size_t>(m));
  for (int q = 0; q < m; ++q) {
    SplitRng rq = base.split(static_cast<uint64_t>(q));
    auto& set = probe_sets_[static_cast<size_t>(q)];
    set.reserve(static_cast<size_t>(degree_));
    for (int i = 0; i < degree_; ++i)
      set.push_back(static_cast<int>(rq.next_below(static_cast<uint64_t>(space_))));
  }
}

SchemeParams RandomizedOneProbeScheme::params() const {
  return SchemeParams{m_, n_, space_, 1, epsilon_, std::nullopt};
}

BitTable RandomizedOneProbeScheme::store(const MembershipInstance& instance) const {
  if (instance.universe_size != m_)
    throw std::invalid_argument("RandomizedOneProbeScheme::store: universe mismatch");
  BitTable table(static_cast<size_t>(space_));
  for (int x : instance.members)
    for (int loc : probe_sets_[static_cast<size_t>(x)]) table.set(static_cast<size_t>(loc), 1);
  return table;
}

int RandomizedOneProbeScheme::query(int q, TableReader& reader, SplitRng& rng) const {
  int coin = static_cast<int>(rng.next_below(static_cast<uint64_t>(degree_)));
  return query_with_coin(q, coin, reader);
}

int RandomizedOneProbeScheme::query_with_coin(int q, int coin, TableReader& reader) const {
  return reader.get(static_cast<size_t>(probe_sets_.at(static_cast<size_t>(q))[static_cast<size_t>(coin)]));
}

// --- NoisyOneProbeScheme ---

NoisyOneProbeScheme::NoisyOneProbeScheme(int m, double epsilon) : m_(m), epsilon_(epsilon) {
  if (m < 1) throw std::invalid_argument("NoisyOneProbeScheme: m must be >= 1");
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("NoisyOneProbeScheme: epsilon must be in [0, 1)");
}

SchemeParams NoisyOneProbeScheme::params() const {
  return SchemeParams{m_, m_, m_, 1, epsilon_, std::nullopt};
}

BitTable NoisyOneProbeScheme::store(const MembershipInstance& instance) const {
  if (instance.universe_size != m_)
    throw std::invalid_argument("NoisyOneProbeScheme::store: universe mismatch");
  BitTable table(static_cast<size_t>(m_));
  for (int x : instance.members) table.set(static_cast<size_t>(x), 1);
  return table;
}

int NoisyOneProbeScheme::query(int q, TableReader& reader, SplitRng& rng) const {
  int bit = reader.get(static_cast<size_t>(q));
  return rng.bernoulli(epsilon_) ? 1 - bit : bit;
}

// --- AmplifiedScheme ---

AmplifiedScheme::AmplifiedScheme(std::shared_ptr<const RandomizedScheme> base, int k)
    : base_(std::move(base)), k_(k) {
  if (!base_) throw std::invalid_argument("AmplifiedScheme: null base");
  if (k < 1) throw std::invalid_argument("AmplifiedScheme: k must be >= 1");
  if (base_->params().probes != 1)
    throw std::invalid_argument("AmplifiedScheme: base must be a one-probe scheme");
}

SchemeParams AmplifiedScheme::params() const {
  SchemeParams p = base_->params();
  p.probes = k_;
  p.repetition = k_;
  return p;
}

BitTable AmplifiedScheme::store(const MembershipInstance& instance) const { return base_->store(instance); }

int AmplifiedScheme::query(int q, TableReader& reader, SplitRng& rng) const {
  int accepts = 0;
  for (int i = 0; i < k_; ++i) accepts += base_->query(q, reader, rng);
  return accepts > accept_threshold(k_) ? 1 : 0;
}

// --- PerfectHashScheme ---

PerfectHashScheme::PerfectHashScheme(int m, int n, uint64_t build_seed)
    : m_(m), n_(n), build_seed_(build_seed) {
  if (m < 2 || n < 1 || n > m) throw std::invalid_argument("PerfectHashScheme: need m >= 2, 1 <= n <= m");
  id_bits_ = bits_for(static_cast<uint64_t>(m - 1));
  count_bits_ = bits_for(static_cast<uint64_t>(n));
  total_slots_ = 4 * n;
  offset_bits_ = bits_for(static_cast<uint64_t>(total_slots_));
  slot_bits_ = 1 + id_bits_;
  space_ = header_bits() + n * descriptor_bits() + total_slots_ * slot_bits_;
}

SchemeParams PerfectHashScheme::params() const {
  return SchemeParams{m_, n_, space_, max_probes(), 0.0, std::nullopt};
}

int PerfectHashScheme::max_probes() const { return header_bits() + descriptor_bits() + slot_bits_; }

int PerfectHashScheme::bucket_of(uint64_t seed1, int x) const {
  return static_cast<int>(mix64(mix64(build_seed_, seed1), static_cast<uint64_t>(x)) %
                          static_cast<uint64_t>(n_));
}

int PerfectHashScheme::slot_of(uint64_t seed2, int x, int slots) const {
  return static_cast<int>(mix64(mix64(build_seed_ ^ 0x517CC1B727220A95ull, seed2),
                                static_cast<uint64_t>(x)) %
                          static_cast<uint64_t>(slots));
}

namespace {

void write_field(BitTable& table, int base, int width, uint64_t value) {
  for (int i = 0; i < width; ++i) table.set(static_cast<size_t>(base + i), (value >> i) & 1);
}

uint64_t read_field(TableReader& reader, int base, int width) {
  uint64_t value = 0;
  for (int i = 0; i < width; ++i)
    value |= static_cast<uint64_t>(reader.get(static_cast<size_t>(base + i))) << i;
  return value;
}

}  // namespace

BitTable PerfectHashScheme::store(const MembershipInstance& instance) const {
  if (instance.universe_size != m_)
    throw std::invalid_argument("PerfectHashScheme::store: universe mismatch");
  if (static_cast<int>(instance.members.size()) > n_)
    throw std::invalid_argument("PerfectHashScheme::store: set larger than capacity");

  // first level: find a seed whose bucket loads fit the fixed slot region
  std::vector<std::vector<int>> buckets;
  uint64_t seed1 = 0;
  bool found = false;
  for (uint64_t cand = 0; cand < kRetryBudget; ++cand) {
    buckets.assign(static_cast<size_t>(n_), {});
    for (int x : instance.members) buckets[static_cast<size_t>(bucket_of(cand, x))].push_back(x);
    long long slots_needed = 0;
    for (const auto& b : buckets) slots_needed += static_cast<long long>(b.size()) * b.size();
    if (slots_needed <= total_slots_) {
      seed1 = cand;
      found = true;
      break;
    }
  }
  if (!found) throw BuildError("PerfectHashScheme: first-level seed search exhausted retry budget");

  BitTable table(static_cast<size_t>(space_));
  write_field(table, 0, kSeedBits, seed1);

  int offset = 0;
  for (int b = 0; b < n_; ++b) {
    const auto& bucket = buckets[static_cast<size_t>(b)];
    int count = static_cast<int>(bucket.size());
    int slots = count * count;
    uint64_t seed2 = 0;
    if (count > 1) {
      bool ok = false;
      for (uint64_t cand = 0; cand < kRetryBudget; ++cand) {
        std::vector<char> used(static_cast<size_t>(slots), 0);
        bool injective = true;
        for (int x : bucket) {
          int slot = slot_of(cand, x, slots);
          if (used[static_cast<size_t>(slot)]) {
            injective = false;
            break;
          }
          used[static_cast<size_t>(slot)] = 1;
        }
        if (injective) {
          seed2 = cand;
          ok = true;
          break;
        }
      }
      if (!ok) throw BuildError("PerfectHashScheme: second-level seed search exhausted retry budget");
    }

    int base = descriptor_base(b);
    write_field(table, base, kSeedBits, seed2);
    write_field(table, base + kSeedBits, count_bits_, static_cast<uint64_t>(count));
    write_field(table, base + kSeedBits + count_bits_, offset_bits_, static_cast<uint64_t>(offset));
    for (int x : bucket) {
      int slot = count == 1 ? 0 : slot_of(seed2, x, slots);
      int slot_base = slots_base() + (offset + slot) * slot_bits_;
      write_field(table, slot_base, 1, 1);
      write_field(table, slot_base + 1, id_bits_, static_cast<uint64_t>(x));
    }
    offset += slots;
  }
  return table;
}

int PerfectHashScheme::query(int q, TableReader& reader) const {
  uint64_t seed1 = read_field(reader, 0, kSeedBits);
  int b = bucket_of(seed1, q);
  int base = descriptor_base(b);
  uint64_t seed2 = read_field(reader, base, kSeedBits);
  int count = static_cast<int>(read_field(reader, base + kSeedBits, count_bits_));
  int offset = static_cast<int>(read_field(reader, base + kSeedBits + count_bits_, offset_bits_));
  if (count == 0) return 0;
  int slots = count * count;
  int slot = count == 1 ? 0 : slot_of(seed2, q, slots);
  int slot_base = slots_base() + (offset + slot) * slot_bits_;
  if (read_field(reader, slot_base, 1) == 0) return 0;
  uint64_t id = read_field(reader, slot_base + 1, id_bits_);
  return id == static_cast<uint64_t>(q) ? 1 : 0;
}

// --- empirical_error ---

namespace {

template <typename QueryFn>
ErrorRates measure(const MembershipInstance& instance, const BitTable& table, int trials, uint64_t seed,
                   QueryFn&& run_query) {
  if (trials < 1) throw std::invalid_argument("empirical_error: trials must be >= 1");
  SplitRng root(seed);
  ErrorRates rates;

  const int member_count = static_cast<int>(instance.members.size());
  const int non_member_count = instance.universe_size - member_count;

  if (member_count > 0) {
    SplitRng fn_rng = root.split("fn");
    long long wrong = 0;
    for (int i = 0; i < trials; ++i) {
      SplitRng trial = fn_rng.split(static_cast<uint64_t>(i));
      int q = instance.members[trial.next_below(static_cast<uint64_t>(member_count))];
      TableReader reader(table);
      if (run_query(q, reader, trial) != 1) ++wrong;
      rates.probes_per_query = std::max(rates.probes_per_query, reader.reads);
    }
    rates.false_negative = static_cast<double>(wrong) / trials;
  }

  if (non_member_count > 0) {
    SplitRng fp_rng = root.split("fp");
    long long wrong = 0;
    for (int i = 0; i < trials; ++i) {
      SplitRng trial = fp_rng.split(static_cast<uint64_t>(i));
      int q;
      do {
        q = static_cast<int>(trial.next_below(static_cast<uint64_t>(instance.universe_size)));
      } while (instance.contains(q));
      TableReader reader(table);
      if (run_query(q, reader, trial) != 0) ++wrong;
      rates.probes_per_query = std::max(rates.probes_per_query, reader.reads);
    }
    rates.false_positive = static_cast<double>(wrong) / trials;
  }
  return rates;
}

}  // namespace

ErrorRates empirical_error(const RandomizedScheme& scheme, const MembershipInstance& instance,
                           int trials, uint64_t seed) {
  BitTable table = scheme.store(instance);
  return measure(instance, table, trials, seed,
                 [&](int q, TableReader& reader, SplitRng& rng) { return scheme.query(q, reader, rng); });
}

ErrorRates empirical_error(const DeterministicScheme& scheme, const MembershipInstance& instance,
                           int trials, uint64_t seed) {
  BitTable table = scheme.store(instance);
  return measure(instance, table, trials, seed,
                 [&](int q, TableReader& reader, SplitRng&) { return scheme.query(q, reader); });
}

}  // namespace bitprobe::classical
