#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <vector>

#include "bitprobe/rng.hpp"

namespace bitprobe::core {

using BigInt = boost::multiprecision::cpp_int;

// Thrown when an operation is asked to run beyond its documented size caps.
// The CLI maps this to its own exit status, distinct from verification failure.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A universe of size m, a capacity n, and a stored subset S with |S| <= n.
struct MembershipInstance {
  int universe_size = 0;                 // m
  int capacity = 0;                      // n
  std::vector<int> members;              // strictly increasing, values in [0, m)

  MembershipInstance(int m, int n, std::vector<int> members_in);
  bool contains(int q) const;
};

MembershipInstance random_instance(int m, int n, int count, SplitRng& rng);

struct SchemeParams {
  int m = 0;
  int n = 0;
  int space = 0;                         // s
  int probes = 0;                        // t (classical) or p (quantum)
  double error = 0.0;                    // epsilon
  std::optional<int> repetition;         // k, for amplified schemes

  void validate() const;
};

// Family of n-element sets; when produced by greedy_family, pairwise
// intersections are at most floor(n/2).
struct SetFamily {
  int universe_size = 0;
  int set_size = 0;
  std::vector<std::vector<int>> sets;
};

int max_pairwise_intersection(const SetFamily& family);

BigInt binomial(long long a, long long i);

// Sum_{i=0}^{min(a,b)} C(a, i), exact.
BigInt binom_sum(long long a, long long b);

// The space-vs-probes inequality: Sum_{i<=n} C(m,i) <= Sum_{i<=nt} C(s,i).
bool tradeoff_feasible(int m, int n, int s, int t);

// Smallest s for which tradeoff_feasible(m, n, s, t) holds.
int min_space_lower_bound(int m, int n, int t);

// ceil((m/(4n))^(n/2)), exact integer arithmetic (including odd n via
// integer ceil-sqrt of (m/(4n))^n).
BigInt greedy_family_size_bound(int m, int n);

// Greedy construction of n-sets with pairwise intersections <= floor(n/2):
// n-subsets are scanned in lexicographic order and a set is accepted iff it
// intersects every previously accepted set in <= floor(n/2) elements.
// Enumeration stops once ceil((m/(4n))^(n/2)) sets are accepted, so the
// result is a deterministic prefix of the full greedy family.
SetFamily greedy_family(int m, int n);

struct AmplificationParams {
  int k = 0;
  double bound_positive = 0.0;           // (4e*eps)^(k/4)
  double bound_negative = 0.0;           // (4e*eps)^(3k/4)
};

double amplification_bound_positive(double epsilon, int k);
double amplification_bound_negative(double epsilon, int k);

// k = ceil(4*log(27m) / (3*log(1/(4e*eps)))) with both tail bounds.
// Requires 0 < 4e*eps < 1 and m >= 2.
AmplificationParams amplification_params(int m, double epsilon);

// Reference evaluations of the Omega-expressions with constant 1. Logs are
// base 2. Each entry is present only when the corresponding theorem's
// hypothesis holds for (m, n, epsilon, p); these are reference values, not
// certified space bounds.
struct LowerBoundReference {
  double delta = 0.0;                            // epsilon^(1/p)
  std::optional<double> quantum_one_probe;       // n*log2(m/n) / (eps^(1/6)*log2(1/eps)), needs eps < 1/8
  std::optional<double> quantum_p_probe;         // same in delta, needs eps < 2^(-3p)
  std::optional<double> classical_p_probe;       // n*log2(m) / (delta^(2/5)*log2(1/delta)),
                                                 // needs 18^(-p) > eps > m^(-1/3) and m^(1/3) > 18n
};

LowerBoundReference lower_bound_formulas(int m, int n, double epsilon, int p);

// All subsets of [0, m) of size <= n, ordered by size then lexicographically
// within each size. This is the canonical set enumeration used by the
// verifier's flat storage-assignment tables.
std::vector<std::vector<int>> subsets_up_to(int m, int n);

}  // namespace bitprobe::core
