#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "bitprobe/quantum.hpp"
#include "bitprobe/verifier.hpp"

using namespace bitprobe;
using namespace bitprobe::quantum;
using classical::BitVectorScheme;
using classical::DecisionTree;
using core::MembershipInstance;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

QuantumScheme identity_layers(int s, int t, int z) {
  QuantumScheme scheme;
  scheme.layout.address_count = s;
  scheme.layout.work_size = z;
  scheme.probes = t;
  for (int i = 0; i <= t; ++i) scheme.layers.push_back(Matrix::Identity(scheme.dim(), scheme.dim()));
  return scheme;
}

// test-only scheme carrying explicit depth-1 trees
struct TinyScheme : classical::DeterministicScheme {
  int m, s;
  std::vector<DecisionTree> trees;
  TinyScheme(int m_in, int s_in, std::vector<DecisionTree> trees_in)
      : m(m_in), s(s_in), trees(std::move(trees_in)) {}
  core::SchemeParams params() const override { return {m, m, s, 1, 0.0, std::nullopt}; }
  BitTable store(const MembershipInstance&) const override {
    throw std::logic_error("unused");
  }
  int query(int q, TableReader& reader) const override {
    return trees.at(static_cast<size_t>(q)).eval(reader);
  }
  const DecisionTree* tree(int q) const override { return &trees.at(static_cast<size_t>(q)); }
};

}  // namespace

TEST_CASE("oracle diagonal structure and involution") {
  RegisterLayout layout{3, 2};
  auto zero = oracle_matrix(BitTable(3), layout);
  for (int v : zero.diagonal) CHECK(v == 1);

  BitTable table = BitTable::from_string("010");
  auto oracle = oracle_matrix(table, layout);
  for (int i = 0; i < layout.dim(); ++i) {
    int j = layout.address_of(i);
    int b = layout.data_bit_of(i);
    int expected = (b == 1 && j == 1) ? -1 : 1;
    CHECK(oracle.diagonal[static_cast<size_t>(i)] == expected);
    CHECK(oracle.diagonal[static_cast<size_t>(i)] * oracle.diagonal[static_cast<size_t>(i)] == 1);
  }
  CHECK_THROWS_AS(oracle_matrix(BitTable(4), layout), std::invalid_argument);
}

TEST_CASE("compose_scheme structure") {
  // identity layers, t=1: W equals the oracle itself
  auto scheme = identity_layers(3, 1, 2);
  BitTable table = BitTable::from_string("101");
  Matrix w = compose_scheme(scheme, table);
  CHECK(max_abs(w - oracle_dense(oracle_matrix(table, scheme.layout))) == 0.0);

  // all-zero table: the oracle is the identity, W is the layer product
  auto random = random_scheme(2, 2, 2, 31);
  Matrix composed = compose_scheme(random, BitTable(2));
  Matrix product = random.layers[2] * random.layers[1] * random.layers[0];
  CHECK(max_abs(composed - product) < 1e-12);
}

TEST_CASE("compositions stay unitary") {
  SplitRng rng(99);
  for (int trial = 0; trial < 8; ++trial) {
    int s = 2 + static_cast<int>(rng.next_below(3));
    int t = 1 + static_cast<int>(rng.next_below(3));
    auto scheme = random_scheme(s, t, 2, rng.next_u64());
    BitTable table(static_cast<size_t>(s));
    for (int j = 0; j < s; ++j) table.set(static_cast<size_t>(j), static_cast<int>(rng.next_below(2)));
    Matrix w = compose_scheme(scheme, table);
    Matrix defect = w.adjoint() * w - Matrix::Identity(w.rows(), w.cols());
    CHECK(max_abs(defect) <= 1e-8);
  }
}

TEST_CASE("bit-vector encoding reproduces the classical scheme exhaustively") {
  BitVectorScheme classical_scheme(3);
  QuantumScheme scheme = encode_classical_as_quantum(classical_scheme);
  CHECK(scheme.probes == 1);
  CHECK(scheme.layout.address_count == 3);
  CHECK(scheme.dim() >= 3);  // m <= D constraint

  for (uint64_t idx = 0; idx < 8; ++idx) {
    BitTable table = BitTable::from_lex_index(idx, 3);
    Matrix w = compose_scheme(scheme, table);
    for (int q = 0; q < 3; ++q) {
      TableReader reader(table);
      int expected = classical_scheme.query(q, reader);
      double p1 = run_query_with_operator(scheme, w, q);
      CHECK(p1 == doctest::Approx(expected).epsilon(1e-9));
      // outcome probabilities are normalized
      double total = w.col(scheme.query_embedding[static_cast<size_t>(q)]).squaredNorm();
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  // empty-set table: every query answers absent with certainty
  Matrix w0 = compose_scheme(scheme, BitTable(3));
  for (int q = 0; q < 3; ++q) CHECK(run_query_with_operator(scheme, w0, q) < 1e-12);
}

TEST_CASE("encoding handles negated and constant depth-1 trees") {
  std::vector<DecisionTree> trees;
  trees.push_back(DecisionTree::single_probe(0, 0, 1));
  trees.push_back(DecisionTree::single_probe(1, 1, 0));  // negated branch
  trees.push_back(DecisionTree::constant(1));
  trees.push_back(DecisionTree::single_probe(0, 1, 1));  // constant disguised as a probe
  TinyScheme tiny(4, 2, std::move(trees));
  QuantumScheme scheme = encode_classical_as_quantum(tiny);

  for (uint64_t idx = 0; idx < 4; ++idx) {
    BitTable table = BitTable::from_lex_index(idx, 2);
    Matrix w = compose_scheme(scheme, table);
    for (int q = 0; q < 4; ++q) {
      TableReader reader(table);
      int expected = tiny.query(q, reader);
      CHECK(run_query_with_operator(scheme, w, q) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("encoding rejects deeper trees and unembedded queries") {
  std::vector<DecisionTree> trees;
  DecisionTree deep;
  deep.nodes.push_back({-1, 0, -1, -1});
  deep.nodes.push_back({-1, 1, -1, -1});
  deep.nodes.push_back({1, -1, 0, 1});
  deep.nodes.push_back({0, -1, 2, 0});
  deep.root = 3;
  trees.push_back(deep);
  TinyScheme tiny(1, 2, std::move(trees));
  CHECK_THROWS_AS(encode_classical_as_quantum(tiny), std::invalid_argument);

  QuantumScheme scheme = encode_classical_as_quantum(BitVectorScheme(3));
  CHECK_THROWS_AS(run_query(scheme, BitTable(3), 5), std::invalid_argument);
}

TEST_CASE("parity decomposition of the bare oracle") {
  // t=1, identity layers: A_empty projects onto b=0, A_{j} onto (j, b=1)
  auto scheme = identity_layers(2, 1, 2);
  auto decomposition = parity_decompose(scheme);
  CHECK(decomposition.max_reconstruction_error <= 1e-9);
  CHECK(decomposition.max_high_order_norm <= 1e-9);
  REQUIRE(decomposition.terms.size() == 3);  // {}, {0}, {1}
  for (const auto& [mask, a] : decomposition.terms) {
    for (int i = 0; i < scheme.dim(); ++i) {
      for (int k = 0; k < scheme.dim(); ++k) {
        double expected = 0.0;
        if (i == k) {
          int j = scheme.layout.address_of(i);
          int b = scheme.layout.data_bit_of(i);
          if (mask == 0)
            expected = (b == 0) ? 1.0 : 0.0;
          else
            expected = (b == 1 && mask == (1u << j)) ? 1.0 : 0.0;
        }
        CHECK(std::abs(a(i, k) - expected) <= 1e-9);
      }
    }
  }
}

TEST_CASE("parity decomposition of a probe-free scheme is its single layer") {
  QuantumScheme scheme;
  scheme.layout = {2, 2};
  scheme.probes = 0;
  scheme.layers.push_back(random_scheme(2, 0, 2, 5).layers[0]);
  auto decomposition = parity_decompose(scheme);
  REQUIRE(decomposition.terms.size() == 1);
  CHECK(decomposition.terms[0].first == 0);
  CHECK(max_abs(decomposition.terms[0].second - scheme.layers[0]) <= 1e-12);
}

TEST_CASE("parity decomposition of random schemes: reconstruction and degree bound") {
  SplitRng rng(2718);
  for (int trial = 0; trial < 12; ++trial) {
    int s = 2 + static_cast<int>(rng.next_below(3));           // 2..4
    int t = 1 + static_cast<int>(rng.next_below(std::min(3, s)));  // 1..min(3,s)
    auto scheme = random_scheme(s, t, 2, rng.next_u64());
    auto decomposition = parity_decompose(scheme);
    CHECK(decomposition.max_reconstruction_error <= 1e-9);
    CHECK(decomposition.max_high_order_norm <= 1e-9);
    for (const auto& [mask, a] : decomposition.terms)
      CHECK(std::popcount(mask) <= t);
  }
}

TEST_CASE("tensor power rank of the encoded bit-vector scheme") {
  QuantumScheme scheme = encode_classical_as_quantum(BitVectorScheme(3));
  std::vector<BitTable> tables;
  for (const auto& set : core::subsets_up_to(3, 1)) {
    MembershipInstance instance(3, 1, set);
    tables.push_back(BitVectorScheme(3).store(instance));
  }
  auto report = tensor_power_rank(scheme, tables, 1);
  CHECK(report.rank == 4);
  CHECK(report.dim_bound == 4);
  CHECK(report.independent);

  // exponent 0: every power is the scalar 1
  auto trivial = tensor_power_rank(scheme, tables, 0);
  CHECK(trivial.rank == 1);

  // claim-2 bound at n' = 1 over every table of a random scheme
  auto random = random_scheme(3, 2, 2, 12345);
  std::vector<BitTable> all_tables;
  for (uint64_t idx = 0; idx < 8; ++idx) all_tables.push_back(BitTable::from_lex_index(idx, 3));
  auto bound_report = tensor_power_rank(random, all_tables, 1);
  CHECK(core::BigInt(bound_report.rank) <= bound_report.dim_bound);
}

TEST_CASE("one-sided error scheme keeps full tensor-power rank") {
  const int m = 3;
  QuantumScheme scheme = one_sided_leaky_encoding(m, 0.4);
  BitVectorScheme storage(m);

  // errs only on positive instances
  for (const auto& set : core::subsets_up_to(m, m)) {
    MembershipInstance instance(m, m, set);
    BitTable table = storage.store(instance);
    Matrix w = compose_scheme(scheme, table);
    for (int q = 0; q < m; ++q) {
      double p1 = run_query_with_operator(scheme, w, q);
      if (instance.contains(q)) {
        CHECK(p1 > 0.5);
        CHECK(p1 < 1.0 - 1e-6);
      } else {
        CHECK(p1 <= 1e-12);
      }
    }
  }

  for (int n = 1; n <= 2; ++n) {
    std::vector<BitTable> tables;
    for (const auto& set : core::subsets_up_to(m, n)) {
      MembershipInstance instance(m, n, set);
      tables.push_back(storage.store(instance));
    }
    auto report = tensor_power_rank(scheme, tables, n);
    CHECK(core::BigInt(report.rank) == core::binom_sum(m, n));
    CHECK(report.independent);
  }
}

TEST_CASE("tensor exponent formula") {
  CHECK(tensor_exponent(16, 2, 0.01) == 2);
  CHECK(tensor_exponent(8, 2, 0.01) == 2);
  CHECK(tensor_exponent(1, 2, 0.01) == 0);
  CHECK_THROWS_AS(tensor_exponent(16, 2, 0.3), std::invalid_argument);
}

TEST_CASE("gram matrix on the synthetic equal-overlap family") {
  const double eps = 0.01;
  const double delta = 2.0 * std::sqrt(eps);
  const int count = 8, n = 2;
  core::SetFamily family;
  family.universe_size = 2 * count;
  family.set_size = n;
  for (int a = 0; a < count; ++a) family.sets.push_back({2 * a, 2 * a + 1});

  int texp = tensor_exponent(count, n, eps);
  REQUIRE(texp == 2);
  auto images = synthetic_overlap_images(family, delta, count + 1);
  auto report = gram_matrix(images, family, eps, texp);

  CHECK(report.max_diag_error <= 1e-9);
  // every off-diagonal entry is exactly delta^(n*texp)
  double expected_offdiag = std::pow(delta, n * texp);
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      if (a != b) CHECK(std::abs(report.entries(a, b) - expected_offdiag) <= 1e-12);

  double expected_margin = 1.0 - (count - 1) * std::pow(delta, n * texp / 2.0);
  CHECK(report.dominance_margin == doctest::Approx(expected_margin).epsilon(1e-9));
  CHECK(report.nonsingular_by_margin);
  CHECK(report.min_singular_value >= report.dominance_margin - 1e-6);
}

TEST_CASE("gram matrix from an exact scheme is the identity") {
  const int m = 16, n = 2;
  QuantumScheme scheme = encode_classical_as_quantum(BitVectorScheme(m));
  auto family = core::greedy_family(m, n);
  REQUIRE(family.sets.size() >= 2);
  BitVectorScheme storage(m);
  auto images = scheme_images(
      scheme,
      [&](const std::vector<int>& set) {
        return storage.store(MembershipInstance(m, n, set));
      },
      family);
  auto report = gram_matrix(images, family, 1e-4, 1);
  CHECK(report.max_diag_error <= 1e-9);
  CHECK(report.max_offdiag <= 1e-9);
  CHECK(report.min_singular_value >= 1.0 - 1e-9);
}

TEST_CASE("gram matrix rejects families with oversized intersections") {
  core::SetFamily bad;
  bad.universe_size = 8;
  bad.set_size = 2;
  bad.sets = {{0, 1}, {0, 2}, {0, 3}};
  // n = 2: intersections of 1 are allowed, so force a duplicate pair
  bad.sets.push_back({0, 1});
  auto images = synthetic_overlap_images(bad, 0.1, 10);
  CHECK_THROWS_AS(gram_matrix(images, bad, 0.01, 1), std::invalid_argument);
}

TEST_CASE("scheme files round trip and validate") {
  auto scheme = random_scheme(2, 1, 2, 777);
  scheme.query_embedding = {scheme.layout.index(0, 0, 0), scheme.layout.index(1, 0, 0)};
  scheme.validate();
  std::stringstream file;
  save_scheme(scheme, file);
  auto loaded = load_scheme(file);
  CHECK(loaded.probes == scheme.probes);
  CHECK(loaded.query_embedding == scheme.query_embedding);
  for (size_t i = 0; i < scheme.layers.size(); ++i)
    CHECK(max_abs(loaded.layers[i] - scheme.layers[i]) == 0.0);

  // a corrupted layer fails the strict unitarity validation on load
  std::stringstream broken_stream;
  scheme.layers[0](0, 0) += Complex(0.1, 0.0);
  save_scheme(scheme, broken_stream);
  CHECK_THROWS_AS(load_scheme(broken_stream), std::invalid_argument);
}

TEST_CASE("layout validation") {
  RegisterLayout bad{3, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RegisterLayout ok{3, 2};
  for (int i = 0; i < ok.dim(); ++i)
    CHECK(ok.index(ok.address_of(i), ok.data_bit_of(i), ok.work_of(i)) == i);
}
