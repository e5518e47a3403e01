#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bitprobe/core.hpp"
#include "bitprobe/polynomial.hpp"
#include "bitprobe/schemes.hpp"

namespace bitprobe::verifier {

using classical::DecisionTree;
using classical::DeterministicScheme;
using classical::RandomizedOneProbeScheme;
using classical::TableScheme;
using core::BigInt;
using core::MembershipInstance;

// Expands a decision tree into the multilinear polynomial it computes:
// a node probing j becomes (1 - y_j)*left + y_j*right. Requires s <= 20.
MultilinearPolynomial tree_to_polynomial(const DecisionTree& tree, int num_vars);

// Evaluation vector of query q over all 2^s tables.
FunctionTable query_function_table(const DeterministicScheme& scheme, int q);

// Phi(S) = product of the member query functions over all 2^s tables;
// Phi({}) is the constant 1 function.
FunctionTable phi_product(const DeterministicScheme& scheme, const std::vector<int>& members);

struct IndependenceReport {
  int rank = 0;
  BigInt expected;  // sum_{i<=n} C(m, i)
  bool pass = false;
  int rows = 0;
  size_t cols = 0;
};

struct VerifierCaps {
  int max_s = 14;
  long long max_rows = 4096;
};

// Rank over the rationals of the matrix whose rows are Phi(S) for all
// |S| <= n in canonical order; passes iff the rank equals sum_{i<=n} C(m,i).
IndependenceReport independence_check(const DeterministicScheme& scheme, const VerifierCaps& caps = {});

// Same computation from explicit per-query evaluation vectors; supports the
// one-sided/nondeterministic variant where f_i takes integer values >= 1 on
// positive instances.
IndependenceReport independence_check_tables(const std::vector<FunctionTable>& query_tables, int m,
                                             int n, const VerifierCaps& caps = {});

struct DegreeReport {
  int max_degree = 0;
  int bound = 0;  // n * t
  bool pass = false;
};

// Max degree of Phi(S) as a polynomial over all |S| <= n; requires the
// scheme to expose materialized decision trees.
DegreeReport degree_bound_check(const DeterministicScheme& scheme, const VerifierCaps& caps = {});

struct SearchLimits {
  int max_m = 5;
  int max_n = 2;
  int max_s = 5;
  int max_t = 2;
  uint64_t max_nodes = 200'000'000;
};

struct SearchOutcome {
  bool found = false;                       // otherwise: exhaustively certified none
  std::shared_ptr<TableScheme> scheme;      // set when found
  uint64_t nodes_visited = 0;               // partial assignments examined
  uint64_t tables_assigned = 0;             // candidate table placements tried
  int set_count = 0;                        // number of distinct stored sets
  double wall_ms = 0.0;
};

// Complete backtracking search over injective storage assignments
// x : {S : |S| <= n} -> {0,1}^s (two sets sharing a table can never both be
// answered correctly), pruning a partial assignment as soon as some query
// admits no depth-<=t tree on the sets assigned so far. Either returns the
// first scheme in enumeration order or certifies that none exists.
SearchOutcome exhaustive_search(int m, int n, int s, int t, const SearchLimits& limits = {});

struct DerandomizeOptions {
  uint64_t coin_budget = 1u << 20;  // full enumeration when d^k fits, else sampling
  uint64_t sample_seed = 0;
};

struct DerandomizeResult {
  enum class Status { found, none_exists, budget_exhausted };
  Status status = Status::budget_exhausted;
  std::vector<int> coins;            // best coin sequence seen (the witness when found)
  std::vector<uint8_t> instance_ok;  // per-instance pass vector for `coins`
  int success_count = 0;
  int target = 0;                    // ceil(|instances| / 2)
  uint64_t sequences_tried = 0;
  bool exhaustive = false;
};

// Searches for a fixed coin sequence (k probe-set indices shared across
// queries) that answers every query correctly for at least half of the
// supplied instances, for the k-fold amplified version of `base`.
DerandomizeResult derandomize(const RandomizedOneProbeScheme& base, int k,
                              const std::vector<MembershipInstance>& instances,
                              const DerandomizeOptions& options = {});

}  // namespace bitprobe::verifier
