#include "bitprobe/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace bitprobe::core {

namespace {
constexpr double kE = 2.718281828459045235360287471352662;
}

MembershipInstance::MembershipInstance(int m, int n, std::vector<int> members_in)
    : universe_size(m), capacity(n), members(std::move(members_in)) {
  if (m < 1) throw std::invalid_argument("MembershipInstance: universe size must be positive");
  if (n < 1 || n > m) throw std::invalid_argument("MembershipInstance: capacity must be in [1, m]");
  if (static_cast<int>(members.size()) > n)
    throw std::invalid_argument("MembershipInstance: more members than capacity");
  for (size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 0 || members[i] >= m)
      throw std::invalid_argument("MembershipInstance: member out of range");
    if (i > 0 && members[i] <= members[i - 1])
      throw std::invalid_argument("MembershipInstance: members must be strictly increasing");
  }
}

bool MembershipInstance::contains(int q) const {
  return std::binary_search(members.begin(), members.end(), q);
}

MembershipInstance random_instance(int m, int n, int count, SplitRng& rng) {
  if (count > n) throw std::invalid_argument("random_instance: count exceeds capacity");
  if (count > m) throw std::invalid_argument("random_instance: count exceeds universe");
  std::set<int> picked;
  while (static_cast<int>(picked.size()) < count)
    picked.insert(static_cast<int>(rng.next_below(static_cast<uint64_t>(m))));
  return MembershipInstance(m, n, std::vector<int>(picked.begin(), picked.end()));
}

void SchemeParams::validate() const {
  if (m < 1 || n < 1 || n > m) throw std::invalid_argument("SchemeParams: need 1 <= n <= m");
  if (space < 1) throw std::invalid_argument("SchemeParams: space must be >= 1");
  if (probes < 1) throw std::invalid_argument("SchemeParams: probes must be >= 1");
  if (error < 0.0 || error >= 1.0) throw std::invalid_argument("SchemeParams: error must be in [0, 1)");
  if (repetition && *repetition < 1) throw std::invalid_argument("SchemeParams: repetition must be >= 1");
}

int max_pairwise_intersection(const SetFamily& family) {
  int worst = 0;
  for (size_t a = 0; a < family.sets.size(); ++a) {
    for (size_t b = a + 1; b < family.sets.size(); ++b) {
      const auto& x = family.sets[a];
      const auto& y = family.sets[b];
      int count = 0;
      size_t i = 0, j = 0;
      while (i < x.size() && j < y.size()) {
        if (x[i] < y[j])
          ++i;
        else if (x[i] > y[j])
          ++j;
        else
          ++count, ++i, ++j;
      }
      worst = std::max(worst, count);
    }
  }
  return worst;
}

BigInt binomial(long long a, long long i) {
  if (i < 0 || i > a) return 0;
  if (i > a - i) i = a - i;
  BigInt r = 1;
  for (long long j = 1; j <= i; ++j) {
    r *= (a - i + j);
    r /= j;
  }
  return r;
}

BigInt binom_sum(long long a, long long b) {
  if (a < 0 || b < 0) throw std::invalid_argument("binom_sum: arguments must be nonnegative");
  long long top = std::min(a, b);
  BigInt total = 0;
  BigInt term = 1;  // C(a, 0)
  for (long long i = 0;; ++i) {
    total += term;
    if (i == top) break;
    term *= (a - i);
    term /= (i + 1);
  }
  return total;
}

bool tradeoff_feasible(int m, int n, int s, int t) {
  if (m < 1 || n < 1 || s < 1 || t < 1 || n > m)
    throw std::invalid_argument("tradeoff_feasible: need m, n, s, t >= 1 and n <= m");
  return binom_sum(m, n) <= binom_sum(s, static_cast<long long>(n) * t);
}

int min_space_lower_bound(int m, int n, int t) {
  if (m < n || n < 1 || t < 1) throw std::invalid_argument("min_space_lower_bound: need m >= n >= 1, t >= 1");
  for (int s = 1;; ++s) {
    if (tradeoff_feasible(m, n, s, t)) return s;
  }
}

BigInt greedy_family_size_bound(int m, int n) {
  if (n < 1 || m < 4 * n) throw std::invalid_argument("greedy_family_size_bound: need m >= 4n >= 4");
  if (n % 2 == 0) {
    BigInt num = boost::multiprecision::pow(BigInt(m), static_cast<unsigned>(n / 2));
    BigInt den = boost::multiprecision::pow(BigInt(4 * n), static_cast<unsigned>(n / 2));
    return (num + den - 1) / den;
  }
  // odd n: smallest integer t with t^2 * (4n)^n >= m^n
  BigInt num = boost::multiprecision::pow(BigInt(m), static_cast<unsigned>(n));
  BigInt den = boost::multiprecision::pow(BigInt(4 * n), static_cast<unsigned>(n));
  BigInt quotient = num / den;
  BigInt t = boost::multiprecision::sqrt(quotient);
  while (t * t * den >= num && t > 0) --t;
  while (t * t * den < num) ++t;
  return t;
}

namespace {

// Packs an ascending run of elements (10 bits each) into a hash key.
uint64_t pack_subset(const int* elems, int count) {
  uint64_t key = 0;
  for (int i = 0; i < count; ++i) key = (key << 10) | static_cast<uint64_t>(elems[i] + 1);
  return key;
}

struct GreedyState {
  int m, n, threshold;              // threshold = floor(n/2)
  uint64_t target;
  std::vector<std::vector<int>> accepted;
  std::unordered_set<uint64_t> blocked;  // (threshold+1)-subsets of accepted sets
  std::vector<int> cur;
  std::vector<int> scratch;
  bool done = false;

  // True iff some (threshold+1)-subset of cur+{e} that contains e is blocked.
  bool conflicts(int e) const {
    int need = threshold;  // elements to pick from cur
    if (static_cast<int>(cur.size()) < need) return false;
    if (blocked.empty()) return false;
    // iterate over 'need'-combinations of cur indices
    std::vector<int> idx(need);
    for (int i = 0; i < need; ++i) idx[i] = i;
    std::vector<int> subset(need + 1);
    while (true) {
      for (int i = 0; i < need; ++i) subset[i] = cur[idx[i]];
      subset[need] = e;
      if (blocked.count(pack_subset(subset.data(), need + 1))) return true;
      if (need == 0) break;
      int pos = need - 1;
      while (pos >= 0 && idx[pos] == static_cast<int>(cur.size()) - need + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < need; ++i) idx[i] = idx[i - 1] + 1;
    }
    return false;
  }

  void accept() {
    accepted.push_back(cur);
    const int k = threshold + 1;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> subset(k);
    while (true) {
      for (int i = 0; i < k; ++i) subset[i] = cur[idx[i]];
      blocked.insert(pack_subset(subset.data(), k));
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (accepted.size() >= target) done = true;
  }

  // Depth-first scan in lexicographic order. Returns true when the caller
  // should unwind to prefix length `threshold`: once a descendant was
  // accepted, every ancestor prefix longer than `threshold` is fully blocked.
  bool extend(int start) {
    for (int e = start; e < m; ++e) {
      if (m - e < n - static_cast<int>(cur.size())) break;
      if (conflicts(e)) continue;
      cur.push_back(e);
      if (static_cast<int>(cur.size()) == n) {
        accept();
        cur.pop_back();
        if (done) return true;
        if (static_cast<int>(cur.size()) > threshold) return true;
        continue;
      }
      bool unwind = extend(e + 1);
      cur.pop_back();
      if (done) return true;
      if (unwind && static_cast<int>(cur.size()) > threshold) return true;
    }
    return false;
  }
};

}  // namespace

SetFamily greedy_family(int m, int n) {
  if (n < 1) throw std::invalid_argument("greedy_family: n must be >= 1");
  if (m < 4 * n) throw std::invalid_argument("greedy_family: requires m >= 4n (bound formula degenerate)");
  if (m > 1023) throw ResourceLimitError("greedy_family: m > 1023 exceeds the packed-subset key width");
  if (n / 2 + 1 > 6) throw ResourceLimitError("greedy_family: n > 11 exceeds the packed-subset key width");
  BigInt bound = greedy_family_size_bound(m, n);
  if (bound > 1000000) throw ResourceLimitError("greedy_family: target family size beyond desk-scale cap");

  GreedyState st;
  st.m = m;
  st.n = n;
  st.threshold = n / 2;
  st.target = bound.convert_to<uint64_t>();
  st.extend(0);

  SetFamily family;
  family.universe_size = m;
  family.set_size = n;
  family.sets = std::move(st.accepted);
  return family;
}

double amplification_bound_positive(double epsilon, int k) {
  if (epsilon < 0.0 || k < 1) throw std::invalid_argument("amplification_bound_positive: bad arguments");
  return std::pow(4.0 * kE * epsilon, k / 4.0);
}

double amplification_bound_negative(double epsilon, int k) {
  if (epsilon < 0.0 || k < 1) throw std::invalid_argument("amplification_bound_negative: bad arguments");
  return std::pow(4.0 * kE * epsilon, 3.0 * k / 4.0);
}

AmplificationParams amplification_params(int m, double epsilon) {
  if (m < 2) throw std::invalid_argument("amplification_params: m must be >= 2");
  if (!(epsilon > 0.0) || !(4.0 * kE * epsilon < 1.0))
    throw std::invalid_argument("amplification_params: requires 0 < 4e*epsilon < 1");
  double lower = 4.0 * std::log2(27.0 * m) / (3.0 * std::log2(1.0 / (4.0 * kE * epsilon)));
  AmplificationParams p;
  p.k = static_cast<int>(std::ceil(lower));
  if (p.k < 1) p.k = 1;
  p.bound_positive = amplification_bound_positive(epsilon, p.k);
  p.bound_negative = amplification_bound_negative(epsilon, p.k);
  return p;
}

LowerBoundReference lower_bound_formulas(int m, int n, double epsilon, int p) {
  if (p < 1) throw std::invalid_argument("lower_bound_formulas: p must be >= 1");
  if (n < 1 || m < n) throw std::invalid_argument("lower_bound_formulas: need m >= n >= 1");
  if (!(epsilon > static_cast<double>(n) / m) || !(epsilon < 1.0))
    throw std::invalid_argument("lower_bound_formulas: requires n/m < epsilon < 1");

  LowerBoundReference r;
  r.delta = std::pow(epsilon, 1.0 / p);
  double log_m_over_n = std::log2(static_cast<double>(m) / n);
  if (epsilon < 0.125) {
    r.quantum_one_probe =
        n * log_m_over_n / (std::pow(epsilon, 1.0 / 6.0) * std::log2(1.0 / epsilon));
  }
  if (epsilon < std::pow(2.0, -3.0 * p)) {
    r.quantum_p_probe = n * log_m_over_n / (std::pow(r.delta, 1.0 / 6.0) * std::log2(1.0 / r.delta));
  }
  if (epsilon < std::pow(18.0, -p) && epsilon > std::pow(static_cast<double>(m), -1.0 / 3.0) &&
      std::pow(static_cast<double>(m), 1.0 / 3.0) > 18.0 * n) {
    r.classical_p_probe =
        n * std::log2(static_cast<double>(m)) / (std::pow(r.delta, 0.4) * std::log2(1.0 / r.delta));
  }
  return r;
}

std::vector<std::vector<int>> subsets_up_to(int m, int n) {
  std::vector<std::vector<int>> out;
  out.push_back({});
  for (int size = 1; size <= std::min(n, m); ++size) {
    std::vector<int> cur(size);
    for (int i = 0; i < size; ++i) cur[i] = i;
    while (true) {
      out.push_back(cur);
      int pos = size - 1;
      while (pos >= 0 && cur[pos] == m - size + pos) --pos;
      if (pos < 0) break;
      ++cur[pos];
      for (int i = pos + 1; i < size; ++i) cur[i] = cur[i - 1] + 1;
    }
  }
  return out;
}

}  // namespace bitprobe::core
