#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "bitprobe/verifier.hpp"

using namespace bitprobe;
using namespace bitprobe::verifier;
using classical::BitVectorScheme;
using classical::DecisionTree;
using core::BigInt;
using core::MembershipInstance;

namespace {

DecisionTree random_tree(int s, int depth, SplitRng& rng) {
  DecisionTree tree;
  auto build = [&](auto&& self, int remaining) -> int {
    if (remaining == 0 || rng.next_below(4) == 0) {
      tree.nodes.push_back({-1, static_cast<int>(rng.next_below(2)), -1, -1});
      return static_cast<int>(tree.nodes.size()) - 1;
    }
    int c0 = self(self, remaining - 1);
    int c1 = self(self, remaining - 1);
    tree.nodes.push_back({static_cast<int>(rng.next_below(static_cast<uint64_t>(s))), -1, c0, c1});
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  tree.root = build(build, depth);
  return tree;
}

}  // namespace

TEST_CASE("tree_to_polynomial on canonical shapes") {
  // depth-1 "probe j, output the bit" is exactly y_j
  auto probe = DecisionTree::single_probe(2, 0, 1);
  auto poly = tree_to_polynomial(probe, 4);
  REQUIRE(poly.coefficients().size() == 1);
  CHECK(poly.coefficients().begin()->first == (1u << 2));
  CHECK(poly.coefficients().begin()->second == 1);
  CHECK(poly.degree() == 1);

  auto leaf = tree_to_polynomial(DecisionTree::constant(1), 4);
  CHECK(leaf.degree() == 0);
  CHECK(leaf.eval_mask(0) == 1);

  auto zero = tree_to_polynomial(DecisionTree::constant(0), 4);
  CHECK(zero.degree() == 0);
  CHECK(zero.coefficients().empty());
}

TEST_CASE("tree_to_polynomial agrees with tree evaluation exhaustively") {
  SplitRng rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    int s = 2 + static_cast<int>(rng.next_below(3));  // 2..4
    int depth = static_cast<int>(rng.next_below(4));  // 0..3
    auto tree = random_tree(s, depth, rng);
    auto poly = tree_to_polynomial(tree, s);
    CHECK(poly.degree() <= tree.depth());
    for (uint64_t idx = 0; idx < (uint64_t{1} << s); ++idx) {
      BitTable table = BitTable::from_lex_index(idx, static_cast<size_t>(s));
      TableReader reader(table);
      CHECK(poly.eval(table) == BigInt(tree.eval(reader)));
    }
  }
}

TEST_CASE("phi_product basics") {
  BitVectorScheme scheme(3);

  // empty set: the constant 1 function
  auto phi_empty = phi_product(scheme, {});
  for (const auto& v : phi_empty.values) CHECK(v == 1);

  // singleton: the evaluation table of f_i
  auto phi_one = phi_product(scheme, {1});
  CHECK(phi_one == query_function_table(scheme, 1));

  // S = {1,2} on the bit-vector scheme: 1 exactly on tables with bits 1,2 set
  auto phi = phi_product(scheme, {1, 2});
  int ones = 0;
  for (uint64_t idx = 0; idx < 8; ++idx) {
    BitTable table = BitTable::from_lex_index(idx, 3);
    BigInt expected = (table.get(1) == 1 && table.get(2) == 1) ? 1 : 0;
    CHECK(phi.values[idx] == expected);
    if (expected == 1) ++ones;
  }
  CHECK(ones == 2);
}

TEST_CASE("independence_check on bit-vector schemes") {
  auto r1 = independence_check(BitVectorScheme(3, 1));
  CHECK(r1.rank == 4);
  CHECK(r1.expected == 4);
  CHECK(r1.pass);

  auto r3 = independence_check(BitVectorScheme(3, 3));
  CHECK(r3.rank == 8);
  CHECK(r3.expected == 8);
  CHECK(r3.pass);
}

TEST_CASE("independence_check_tables supports one-sided integer-valued queries") {
  // f_i >= 1 on positive instances, exactly 0 on negatives: mimics a
  // nondeterministic query scheme summed over its accepting trees
  const int s = 3, m = 3;
  std::vector<FunctionTable> tables;
  for (int i = 0; i < m; ++i) {
    FunctionTable f;
    f.num_vars = s;
    f.values.resize(8);
    for (uint64_t idx = 0; idx < 8; ++idx) {
      BitTable x = BitTable::from_lex_index(idx, 3);
      f.values[idx] = x.get(static_cast<size_t>(i)) == 1
                          ? BigInt(1 + x.get(static_cast<size_t>((i + 1) % 3)))
                          : BigInt(0);
    }
    tables.push_back(std::move(f));
  }
  for (int n = 1; n <= 3; ++n) {
    auto report = independence_check_tables(tables, m, n);
    CHECK(report.pass);
    CHECK(BigInt(report.rank) == core::binom_sum(m, n));
  }
}

TEST_CASE("degree_bound_check on bit-vector schemes") {
  auto report = degree_bound_check(BitVectorScheme(3, 2));
  CHECK(report.bound == 2);
  CHECK(report.max_degree <= 2);
  CHECK(report.pass);

  // combined inequality: sum_{i<=n} C(m,i) <= binom_sum(s, nt)
  auto ind = independence_check(BitVectorScheme(3, 2));
  CHECK(BigInt(ind.rank) <= core::binom_sum(3, 2));
}

TEST_CASE("exact_rank pins simple cases") {
  std::vector<std::vector<BigInt>> id3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(exact_rank(id3) == 3);
  std::vector<std::vector<BigInt>> dup{{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
  CHECK(exact_rank(dup) == 2);
  std::vector<std::vector<BigInt>> zero{{0, 0}, {0, 0}};
  CHECK(exact_rank(zero) == 0);
}

TEST_CASE("exhaustive_search finds schemes and certifies absence") {
  auto found = exhaustive_search(3, 1, 3, 1);
  REQUIRE(found.found);
  REQUIRE(found.scheme != nullptr);
  // the found scheme answers every query on every stored set
  for (const auto& set : core::subsets_up_to(3, 1)) {
    MembershipInstance instance(3, 1, set);
    BitTable table = found.scheme->store(instance);
    for (int q = 0; q < 3; ++q) {
      TableReader reader(table);
      CHECK(found.scheme->query(q, reader) == (instance.contains(q) ? 1 : 0));
      CHECK(reader.reads <= 1);
    }
  }
  CHECK(core::tradeoff_feasible(3, 1, 3, 1));

  auto none = exhaustive_search(3, 1, 2, 1);
  CHECK_FALSE(none.found);
  CHECK(core::min_space_lower_bound(3, 1, 1) == 3);

  // inequality fails at (4,1,2,2): the search must certify none
  CHECK_FALSE(core::tradeoff_feasible(4, 1, 2, 2));
  auto none2 = exhaustive_search(4, 1, 2, 2);
  CHECK_FALSE(none2.found);
}

namespace {

// flat reference search, non-injective assignments included: enumerates all
// (2^s)^N storage assignments and tests each query against every depth-<=t
// tree by direct recursion
bool reference_search(int m, int n, int s, int t) {
  auto sets = core::subsets_up_to(m, n);
  const int count = static_cast<int>(sets.size());
  std::vector<int> assign(static_cast<size_t>(count), 0);
  std::function<bool(const std::vector<int>&, std::vector<int>, int)> solvable =
      [&](const std::vector<int>& answers, std::vector<int> alive, int depth) -> bool {
    bool all0 = true, all1 = true;
    for (int k : alive) (answers[static_cast<size_t>(k)] ? all0 : all1) = false;
    if (all0 || all1) return true;
    if (depth == 0) return false;
    for (int j = 0; j < s; ++j) {
      std::vector<int> on, off;
      for (int k : alive)
        (((assign[static_cast<size_t>(k)] >> (s - 1 - j)) & 1) ? on : off).push_back(k);
      if (solvable(answers, on, depth - 1) && solvable(answers, off, depth - 1)) return true;
    }
    return false;
  };
  std::vector<std::vector<int>> answers(static_cast<size_t>(m),
                                        std::vector<int>(static_cast<size_t>(count), 0));
  for (int k = 0; k < count; ++k)
    for (int q : sets[static_cast<size_t>(k)]) answers[static_cast<size_t>(q)][static_cast<size_t>(k)] = 1;

  std::vector<int> all(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) all[static_cast<size_t>(k)] = k;
  while (true) {
    bool ok = true;
    for (int q = 0; q < m && ok; ++q) ok = solvable(answers[static_cast<size_t>(q)], all, t);
    if (ok) return true;
    int pos = count - 1;
    while (pos >= 0 && assign[static_cast<size_t>(pos)] == (1 << s) - 1) {
      assign[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return false;
    ++assign[static_cast<size_t>(pos)];
  }
}

}  // namespace

TEST_CASE("exhaustive_search agrees with a flat reference enumeration") {
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= std::min(2, m); ++n)
      for (int s = 1; s <= 3; ++s)
        for (int t = 1; t <= 2; ++t) {
          CAPTURE(m);
          CAPTURE(n);
          CAPTURE(s);
          CAPTURE(t);
          CHECK(exhaustive_search(m, n, s, t).found == reference_search(m, n, s, t));
        }
}

TEST_CASE("exhaustive_search respects resource caps") {
  SearchLimits tight;
  tight.max_nodes = 3;
  CHECK_THROWS_AS(exhaustive_search(4, 2, 4, 2, tight), core::ResourceLimitError);
  SearchLimits defaults;
  CHECK_THROWS_AS(exhaustive_search(6, 1, 4, 1, defaults), core::ResourceLimitError);  // m beyond cap
}

TEST_CASE("derandomize on an exact instance list accepts the first sequence") {
  classical::RandomizedOneProbeScheme base(8, 2, 0.2, 0.5, 1.0, 11);
  // the empty set stores an all-zero table: every query answers absent, and
  // every coin sequence is correct
  std::vector<MembershipInstance> instances{MembershipInstance(8, 2, {})};
  auto result = derandomize(base, 2, instances);
  CHECK(result.status == DerandomizeResult::Status::found);
  CHECK(result.success_count == 1);
  CHECK(result.sequences_tried == 1);
  CHECK(result.exhaustive);
}

TEST_CASE("derandomize finds a sequence good for at least half the sets") {
  // calibrated low-error scheme at tiny scale; the averaging argument
  // guarantees a good sequence exists, the search must find one
  classical::RandomizedOneProbeScheme base(8, 1, 0.05, 2.0, 4.0, 17);
  std::vector<MembershipInstance> instances;
  for (int x = 0; x < 8; ++x) instances.emplace_back(8, 1, std::vector<int>{x});
  auto result = derandomize(base, 4, instances, {.coin_budget = 1u << 22, .sample_seed = 0});
  CHECK(result.status == DerandomizeResult::Status::found);
  CHECK(result.success_count >= result.target);
  // the witness's pass vector is consistent
  int ok = 0;
  for (auto flag : result.instance_ok) ok += flag;
  CHECK(ok == result.success_count);
}

TEST_CASE("derandomize reports an adversarial scheme as having no good sequence") {
  // space_factor tuned so the table collapses to one location: storing any
  // member marks it, and every non-member query answers present
  classical::RandomizedOneProbeScheme base(2, 1, 0.45, 0.5, 0.2, 1);
  REQUIRE(base.params().space == 1);
  std::vector<MembershipInstance> instances{MembershipInstance(2, 1, {0}),
                                            MembershipInstance(2, 1, {1})};
  auto result = derandomize(base, 1, instances);
  CHECK(result.status == DerandomizeResult::Status::none_exists);
  CHECK(result.success_count == 0);
  CHECK(result.exhaustive);
}
