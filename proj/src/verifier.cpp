#include "bitprobe/verifier.hpp"

#include <algorithm>
#include <chrono>

namespace bitprobe::verifier {

MultilinearPolynomial tree_to_polynomial(const DecisionTree& tree, int num_vars) {
  if (num_vars > 20) throw core::ResourceLimitError("tree_to_polynomial: s > 20");
  tree.validate(num_vars);

  // bottom-up over nodes: (1 - y_j) * p0 + y_j * p1
  std::vector<std::optional<MultilinearPolynomial>> memo(tree.nodes.size());
  auto expand = [&](auto&& self, int at) -> const MultilinearPolynomial& {
    auto& slot = memo[static_cast<size_t>(at)];
    if (slot) return *slot;
    const auto& node = tree.nodes[static_cast<size_t>(at)];
    if (node.probe < 0) {
      slot = MultilinearPolynomial::constant(num_vars, node.leaf);
      return *slot;
    }
    const auto& p0 = self(self, node.child0);
    const auto& p1 = self(self, node.child1);
    MultilinearPolynomial y = MultilinearPolynomial::variable(num_vars, node.probe);
    slot = p0 + y * (p1 - p0);
    return *slot;
  };
  return expand(expand, tree.root);
}

FunctionTable query_function_table(const DeterministicScheme& scheme, int q) {
  const int s = scheme.params().space;
  if (s > 20) throw core::ResourceLimitError("query_function_table: s > 20");
  FunctionTable out;
  out.num_vars = s;
  out.values.resize(size_t{1} << s);
  for (uint64_t idx = 0; idx < (uint64_t{1} << s); ++idx) {
    BitTable table = BitTable::from_lex_index(idx, static_cast<size_t>(s));
    TableReader reader(table);
    out.values[idx] = scheme.query(q, reader);
  }
  return out;
}

FunctionTable phi_product(const DeterministicScheme& scheme, const std::vector<int>& members) {
  const auto p = scheme.params();
  if (static_cast<int>(members.size()) > p.n)
    throw std::invalid_argument("phi_product: more members than capacity");
  FunctionTable phi = FunctionTable::constant_one(p.space);
  for (int q : members) phi = pointwise_product(phi, query_function_table(scheme, q));
  return phi;
}

IndependenceReport independence_check_tables(const std::vector<FunctionTable>& query_tables, int m,
                                             int n, const VerifierCaps& caps) {
  if (query_tables.size() != static_cast<size_t>(m))
    throw std::invalid_argument("independence_check_tables: one table per query required");
  const int s = query_tables.empty() ? 0 : query_tables[0].num_vars;
  if (s > caps.max_s) throw core::ResourceLimitError("independence_check: s beyond cap");
  BigInt expected = core::binom_sum(m, n);
  if (expected > caps.max_rows) throw core::ResourceLimitError("independence_check: too many sets");

  auto sets = core::subsets_up_to(m, n);
  std::vector<std::vector<BigInt>> rows;
  rows.reserve(sets.size());
  for (const auto& set : sets) {
    FunctionTable phi = FunctionTable::constant_one(s);
    for (int q : set) phi = pointwise_product(phi, query_tables[static_cast<size_t>(q)]);
    rows.push_back(std::move(phi.values));
  }

  IndependenceReport report;
  report.rows = static_cast<int>(rows.size());
  report.cols = size_t{1} << s;
  report.expected = expected;
  report.rank = exact_rank(std::move(rows));
  report.pass = (BigInt(report.rank) == expected);
  return report;
}

IndependenceReport independence_check(const DeterministicScheme& scheme, const VerifierCaps& caps) {
  const auto p = scheme.params();
  if (p.space > caps.max_s) throw core::ResourceLimitError("independence_check: s beyond cap");
  std::vector<FunctionTable> tables;
  tables.reserve(static_cast<size_t>(p.m));
  for (int q = 0; q < p.m; ++q) tables.push_back(query_function_table(scheme, q));
  return independence_check_tables(tables, p.m, p.n, caps);
}

DegreeReport degree_bound_check(const DeterministicScheme& scheme, const VerifierCaps& caps) {
  const auto p = scheme.params();
  if (p.space > caps.max_s || p.space > 20)
    throw core::ResourceLimitError("degree_bound_check: s beyond cap");
  if (core::binom_sum(p.m, p.n) > caps.max_rows)
    throw core::ResourceLimitError("degree_bound_check: too many sets");

  std::vector<MultilinearPolynomial> query_polys;
  query_polys.reserve(static_cast<size_t>(p.m));
  for (int q = 0; q < p.m; ++q) {
    const DecisionTree* tree = scheme.tree(q);
    if (tree == nullptr)
      throw std::invalid_argument("degree_bound_check: scheme has no materialized tree");
    query_polys.push_back(tree_to_polynomial(*tree, p.space));
  }

  DegreeReport report;
  report.bound = p.n * p.probes;
  for (const auto& set : core::subsets_up_to(p.m, p.n)) {
    MultilinearPolynomial phi = MultilinearPolynomial::constant(p.space, 1);
    for (int q : set) phi = phi * query_polys[static_cast<size_t>(q)];
    report.max_degree = std::max(report.max_degree, phi.degree());
  }
  report.pass = report.max_degree <= report.bound;
  return report;
}

namespace {

struct Searcher {
  int m, n, s, t;
  uint64_t max_nodes;
  std::vector<std::vector<int>> sets;
  int set_count = 0;
  std::vector<uint64_t> answers;  // per query: bit k = (q in sets[k])
  std::vector<uint64_t> cols;     // per location j: bit k = assigned table of set k has bit j = 1
  std::vector<int> tables;        // assigned table value (lex index) per set
  uint64_t used = 0;
  uint64_t nodes = 0;
  uint64_t placements = 0;

  // Is there a depth-<=depth tree classifying `answers_q` restricted to the
  // assigned sets in `alive`?
  bool feasible(uint64_t answers_q, uint64_t alive, int depth) const {
    uint64_t positive = answers_q & alive;
    if (positive == 0 || positive == alive) return true;
    if (depth == 0) return false;
    for (int j = 0; j < s; ++j) {
      uint64_t on = alive & cols[static_cast<size_t>(j)];
      if (on == 0 || on == alive) continue;  // probe does not split; a tree never needs it
      if (feasible(answers_q, alive & ~on, depth - 1) && feasible(answers_q, on, depth - 1)) return true;
    }
    return false;
  }

  bool assign(int k) {
    ++nodes;
    if (placements > max_nodes)
      throw core::ResourceLimitError("exhaustive_search: node budget exhausted");
    if (k == set_count) return true;
    const uint64_t alive = (set_count == 64 ? ~uint64_t{0} : (uint64_t{1} << (k + 1)) - 1);
    for (int v = 0; v < (1 << s); ++v) {
      if (used & (uint64_t{1} << v)) continue;
      ++placements;
      tables[static_cast<size_t>(k)] = v;
      used |= uint64_t{1} << v;
      for (int j = 0; j < s; ++j)
        if ((v >> (s - 1 - j)) & 1) cols[static_cast<size_t>(j)] |= uint64_t{1} << k;

      bool ok = true;
      for (int q = 0; q < m && ok; ++q) ok = feasible(answers[static_cast<size_t>(q)], alive, t);
      if (ok && assign(k + 1)) return true;

      used &= ~(uint64_t{1} << v);
      for (int j = 0; j < s; ++j) cols[static_cast<size_t>(j)] &= ~(uint64_t{1} << k);
    }
    return false;
  }

  DecisionTree build_tree(int q) const {
    DecisionTree tree;
    const uint64_t all = (set_count == 64 ? ~uint64_t{0} : (uint64_t{1} << set_count) - 1);
    auto build = [&](auto&& self, uint64_t alive, int depth) -> int {
      uint64_t positive = answers[static_cast<size_t>(q)] & alive;
      if (positive == 0 || positive == alive) {
        tree.nodes.push_back({-1, positive == 0 ? 0 : 1, -1, -1});
        return static_cast<int>(tree.nodes.size()) - 1;
      }
      for (int j = 0; j < s; ++j) {
        uint64_t on = alive & cols[static_cast<size_t>(j)];
        if (on == 0 || on == alive) continue;
        if (feasible(answers[static_cast<size_t>(q)], alive & ~on, depth - 1) &&
            feasible(answers[static_cast<size_t>(q)], on, depth - 1)) {
          int c0 = self(self, alive & ~on, depth - 1);
          int c1 = self(self, on, depth - 1);
          tree.nodes.push_back({j, -1, c0, c1});
          return static_cast<int>(tree.nodes.size()) - 1;
        }
      }
      throw std::logic_error("exhaustive_search: tree extraction on infeasible query");
    };
    tree.root = build(build, all, t);
    return tree;
  }
};

}  // namespace

SearchOutcome exhaustive_search(int m, int n, int s, int t, const SearchLimits& limits) {
  if (m < 1 || n < 1 || n > m || s < 1 || t < 1)
    throw std::invalid_argument("exhaustive_search: need m, n, s, t >= 1 and n <= m");
  if (m > limits.max_m || n > limits.max_n || s > limits.max_s || t > limits.max_t)
    throw core::ResourceLimitError("exhaustive_search: parameters beyond configured caps");
  if (s > 6) throw core::ResourceLimitError("exhaustive_search: s > 6 unsupported");

  auto start = std::chrono::steady_clock::now();
  Searcher searcher;
  searcher.m = m;
  searcher.n = n;
  searcher.s = s;
  searcher.t = t;
  searcher.max_nodes = limits.max_nodes;
  searcher.sets = core::subsets_up_to(m, n);
  searcher.set_count = static_cast<int>(searcher.sets.size());
  if (searcher.set_count > 64)
    throw core::ResourceLimitError("exhaustive_search: more than 64 stored sets");

  SearchOutcome outcome;
  outcome.set_count = searcher.set_count;

  // Injective assignments require at least as many tables as sets.
  if (searcher.set_count <= (1 << s)) {
    searcher.answers.assign(static_cast<size_t>(m), 0);
    for (int k = 0; k < searcher.set_count; ++k)
      for (int q : searcher.sets[static_cast<size_t>(k)])
        searcher.answers[static_cast<size_t>(q)] |= uint64_t{1} << k;
    searcher.cols.assign(static_cast<size_t>(s), 0);
    searcher.tables.assign(static_cast<size_t>(searcher.set_count), 0);

    if (searcher.assign(0)) {
      outcome.found = true;
      std::vector<BitTable> tables;
      tables.reserve(static_cast<size_t>(searcher.set_count));
      for (int v : searcher.tables)
        tables.push_back(BitTable::from_lex_index(static_cast<uint64_t>(v), static_cast<size_t>(s)));
      std::vector<DecisionTree> trees;
      trees.reserve(static_cast<size_t>(m));
      for (int q = 0; q < m; ++q) trees.push_back(searcher.build_tree(q));
      outcome.scheme =
          std::make_shared<TableScheme>(m, n, s, t, std::move(tables), std::move(trees));
    }
  }

  outcome.nodes_visited = searcher.nodes;
  outcome.tables_assigned = searcher.placements;
  outcome.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return outcome;
}

DerandomizeResult derandomize(const RandomizedOneProbeScheme& base, int k,
                              const std::vector<MembershipInstance>& instances,
                              const DerandomizeOptions& options) {
  if (k < 1) throw std::invalid_argument("derandomize: k must be >= 1");
  if (instances.empty()) throw std::invalid_argument("derandomize: no instances supplied");
  const int m = base.params().m;
  const int d = base.degree();
  const int threshold = classical::AmplifiedScheme::accept_threshold(k);

  std::vector<BitTable> stored;
  stored.reserve(instances.size());
  for (const auto& instance : instances) stored.push_back(base.store(instance));

  // coin space size d^k, saturating at the budget + 1
  uint64_t space = 1;
  bool enumerable = true;
  for (int i = 0; i < k; ++i) {
    if (space > options.coin_budget / static_cast<uint64_t>(d)) {
      enumerable = false;
      break;
    }
    space *= static_cast<uint64_t>(d);
  }
  enumerable = enumerable && space <= options.coin_budget;

  DerandomizeResult result;
  result.target = static_cast<int>((instances.size() + 1) / 2);
  result.exhaustive = enumerable;

  std::vector<int> coins(static_cast<size_t>(k), 0);
  SplitRng sampler = SplitRng(options.sample_seed).split("derandomize");
  const uint64_t total = enumerable ? space : options.coin_budget;

  auto evaluate = [&](const std::vector<int>& cs, std::vector<uint8_t>& ok) {
    int successes = 0;
    ok.assign(instances.size(), 0);
    for (size_t idx = 0; idx < instances.size(); ++idx) {
      bool all_correct = true;
      for (int q = 0; q < m && all_correct; ++q) {
        int accepts = 0;
        for (int i = 0; i < k; ++i)
          accepts += stored[idx].get(static_cast<size_t>(base.probe_set(q)[static_cast<size_t>(cs[i])]));
        int answer = accepts > threshold ? 1 : 0;
        all_correct = (answer == (instances[idx].contains(q) ? 1 : 0));
      }
      if (all_correct) {
        ok[idx] = 1;
        ++successes;
      }
    }
    return successes;
  };

  std::vector<uint8_t> ok;
  for (uint64_t seq = 0; seq < total; ++seq) {
    if (enumerable) {
      uint64_t v = seq;  // lexicographic odometer, last coin fastest
      for (int i = k - 1; i >= 0; --i) {
        coins[static_cast<size_t>(i)] = static_cast<int>(v % static_cast<uint64_t>(d));
        v /= static_cast<uint64_t>(d);
      }
    } else {
      SplitRng rng = sampler.split(seq);
      for (int i = 0; i < k; ++i)
        coins[static_cast<size_t>(i)] = static_cast<int>(rng.next_below(static_cast<uint64_t>(d)));
    }
    int successes = evaluate(coins, ok);
    ++result.sequences_tried;
    if (successes > result.success_count) {
      result.success_count = successes;
      result.coins = coins;
      result.instance_ok = ok;
    }
    if (successes >= result.target) {
      result.status = DerandomizeResult::Status::found;
      return result;
    }
  }
  result.status = enumerable ? DerandomizeResult::Status::none_exists
                             : DerandomizeResult::Status::budget_exhausted;
  return result;
}

}  // namespace bitprobe::verifier
