#include "bitprobe/quantum.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "bitprobe/rng.hpp"

namespace bitprobe::quantum {

namespace {

constexpr double kUnitaryTolerance = 1e-9;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void require_unitary(const Matrix& u, const char* what) {
  if (u.rows() != u.cols()) throw std::invalid_argument(std::string(what) + ": not square");
  Matrix defect = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  if (max_abs(defect) > kUnitaryTolerance)
    throw std::invalid_argument(std::string(what) + ": not unitary within 1e-9");
}

}  // namespace

void RegisterLayout::validate() const {
  if (address_count < 1) throw std::invalid_argument("RegisterLayout: address_count must be >= 1");
  if (work_size < 2) throw std::invalid_argument("RegisterLayout: work_size must be >= 2");
}

void QuantumScheme::validate() const {
  layout.validate();
  if (probes < 0) throw std::invalid_argument("QuantumScheme: negative probe count");
  if (layers.size() != static_cast<size_t>(probes) + 1)
    throw std::invalid_argument("QuantumScheme: need probes + 1 layers");
  const int d = dim();
  for (const auto& layer : layers) {
    if (layer.rows() != d || layer.cols() != d)
      throw std::invalid_argument("QuantumScheme: layer dimension mismatch");
    require_unitary(layer, "QuantumScheme layer");
  }
  std::set<int> seen;
  for (int idx : query_embedding) {
    if (idx < 0 || idx >= d) throw std::invalid_argument("QuantumScheme: embedding index out of range");
    if (!seen.insert(idx).second) throw std::invalid_argument("QuantumScheme: embedding not injective");
    if (layout.data_bit_of(idx) != 0 || layout.output_bit_of(idx) != 0)
      throw std::invalid_argument("QuantumScheme: embedded queries must have data and output bits 0");
  }
}

OracleSpec oracle_matrix(const BitTable& table, const RegisterLayout& layout) {
  layout.validate();
  if (table.size() != static_cast<size_t>(layout.address_count))
    throw std::invalid_argument("oracle_matrix: table length must equal address count");
  OracleSpec oracle{table, {}};
  const int d = layout.dim();
  oracle.diagonal.resize(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    int j = layout.address_of(i);
    int b = layout.data_bit_of(i);
    oracle.diagonal[static_cast<size_t>(i)] = (b && table.get(static_cast<size_t>(j))) ? -1 : 1;
  }
  return oracle;
}

Matrix oracle_dense(const OracleSpec& oracle) {
  const auto d = static_cast<Eigen::Index>(oracle.diagonal.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    m(i, i) = static_cast<double>(oracle.diagonal[static_cast<size_t>(i)]);
  return m;
}

Matrix compose_scheme(const QuantumScheme& scheme, const BitTable& table) {
  if (scheme.layers.empty()) throw std::invalid_argument("compose_scheme: scheme has no layers");
  OracleSpec oracle = oracle_matrix(table, scheme.layout);
  Matrix w = scheme.layers[0];
  for (int probe = 1; probe <= scheme.probes; ++probe) {
    // oracle is diagonal: scale rows
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      if (oracle.diagonal[static_cast<size_t>(i)] < 0) w.row(i) = -w.row(i);
    w = scheme.layers[static_cast<size_t>(probe)] * w;
  }
  return w;
}

double run_query_with_operator(const QuantumScheme& scheme, const Matrix& w, int q) {
  if (q < 0 || q >= scheme.universe_size())
    throw std::invalid_argument("run_query: query outside the embedding's domain");
  const int col = scheme.query_embedding[static_cast<size_t>(q)];
  double p1 = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    if (scheme.layout.output_bit_of(static_cast<int>(i)) == 1) p1 += std::norm(w(i, col));
  return p1;
}

double run_query(const QuantumScheme& scheme, const BitTable& table, int q) {
  return run_query_with_operator(scheme, compose_scheme(scheme, table), q);
}

QuantumScheme encode_classical_as_quantum(const classical::DeterministicScheme& classical_scheme) {
  const auto params = classical_scheme.params();
  const int m = params.m;
  const int s = params.space;

  // per-query routing: probe address, kind (branch with sign, or constant)
  struct Route {
    int address = 0;
    bool branch = false;
    int sign = 1;   // +1: leaf(bit) = bit, -1: negated
    int leaf = 0;   // constant output when !branch
    int tag = 0;    // work index
  };
  std::vector<Route> routes(static_cast<size_t>(m));
  std::vector<int> group_size(static_cast<size_t>(s), 0);
  for (int q = 0; q < m; ++q) {
    const classical::DecisionTree* tree = classical_scheme.tree(q);
    if (tree == nullptr)
      throw std::invalid_argument("encode_classical_as_quantum: scheme has no materialized trees");
    if (tree->depth() > 1)
      throw std::invalid_argument("encode_classical_as_quantum: only depth-1 queries supported");
    Route& route = routes[static_cast<size_t>(q)];
    const auto& root = tree->nodes[static_cast<size_t>(tree->root)];
    if (root.probe < 0) {
      route.branch = false;
      route.address = 0;
      route.leaf = root.leaf;
    } else {
      int leaf0 = tree->nodes[static_cast<size_t>(root.child0)].leaf;
      int leaf1 = tree->nodes[static_cast<size_t>(root.child1)].leaf;
      route.address = root.probe;
      if (leaf0 == leaf1) {
        route.branch = false;
        route.leaf = leaf0;
      } else {
        route.branch = true;
        route.sign = (leaf1 == 1) ? 1 : -1;
      }
    }
    int c = group_size[static_cast<size_t>(route.address)]++;
    route.tag = 2 * c + (route.branch ? 0 : route.leaf);
  }

  QuantumScheme scheme;
  scheme.layout.address_count = s;
  int max_group = *std::max_element(group_size.begin(), group_size.end());
  scheme.layout.work_size = 2 * std::max({(m + s - 1) / s, max_group, 1});
  scheme.probes = 1;
  const int d = scheme.layout.dim();

  scheme.query_embedding.resize(static_cast<size_t>(m));
  for (int q = 0; q < m; ++q)
    scheme.query_embedding[static_cast<size_t>(q)] = scheme.layout.index(q % s, 0, 2 * (q / s));

  // U_0: route each embedded query to its prepared state, then complete the
  // remaining columns to an orthonormal basis.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix u0 = Matrix::Zero(d, d);
  std::vector<char> column_used(static_cast<size_t>(d), 0);
  std::vector<CVector> assigned;
  for (int q = 0; q < m; ++q) {
    const Route& route = routes[static_cast<size_t>(q)];
    CVector v = CVector::Zero(d);
    if (route.branch) {
      v(scheme.layout.index(route.address, 0, route.tag)) = inv_sqrt2;
      v(scheme.layout.index(route.address, 1, route.tag)) = route.sign * inv_sqrt2;
    } else {
      v(scheme.layout.index(route.address, 0, route.tag)) = 1.0;
    }
    int col = scheme.query_embedding[static_cast<size_t>(q)];
    u0.col(col) = v;
    column_used[static_cast<size_t>(col)] = 1;
    assigned.push_back(std::move(v));
  }
  int next_free = 0;
  for (int i = 0; i < d; ++i) {
    CVector w = CVector::Zero(d);
    w(i) = 1.0;
    for (const auto& v : assigned) w -= v.dot(w) * v;
    double norm = w.norm();
    if (norm < 1e-8) continue;
    w /= norm;
    while (next_free < d && column_used[static_cast<size_t>(next_free)]) ++next_free;
    if (next_free >= d) break;
    u0.col(next_free) = w;
    column_used[static_cast<size_t>(next_free)] = 1;
    assigned.push_back(std::move(w));
  }

  // U_1 = CNOT(data -> output) . H(data bit on branch-tagged (address, work) blocks)
  Matrix h = Matrix::Zero(d, d);
  std::set<std::pair<int, int>> branch_tags;
  for (int q = 0; q < m; ++q) {
    const Route& route = routes[static_cast<size_t>(q)];
    if (route.branch) branch_tags.insert({route.address, route.tag});
  }
  for (int j = 0; j < s; ++j) {
    for (int z = 0; z < scheme.layout.work_size; ++z) {
      int i0 = scheme.layout.index(j, 0, z);
      int i1 = scheme.layout.index(j, 1, z);
      if (branch_tags.count({j, z})) {
        h(i0, i0) = inv_sqrt2;
        h(i0, i1) = inv_sqrt2;
        h(i1, i0) = inv_sqrt2;
        h(i1, i1) = -inv_sqrt2;
      } else {
        h(i0, i0) = 1.0;
        h(i1, i1) = 1.0;
      }
    }
  }
  Matrix cnot = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    int j = scheme.layout.address_of(i);
    int b = scheme.layout.data_bit_of(i);
    int z = scheme.layout.work_of(i);
    cnot(scheme.layout.index(j, b, z ^ b), i) = 1.0;
  }

  scheme.layers = {std::move(u0), cnot * h};
  scheme.validate();
  return scheme;
}

QuantumScheme random_scheme(int address_count, int probes, int work_size, uint64_t seed) {
  QuantumScheme scheme;
  scheme.layout.address_count = address_count;
  scheme.layout.work_size = work_size;
  scheme.layout.validate();
  scheme.probes = probes;
  const int d = scheme.layout.dim();
  SplitRng root = SplitRng(seed).split("layers");
  for (int layer = 0; layer <= probes; ++layer) {
    SplitRng rng = root.split(static_cast<uint64_t>(layer));
    Matrix g(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) g(r, c) = Complex(rng.next_normal(), rng.next_normal());
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
      Complex diag = r(c, c);
      double mag = std::abs(diag);
      q.col(c) *= (mag > 0) ? diag / mag : Complex(1.0, 0.0);
    }
    scheme.layers.push_back(std::move(q));
  }
  scheme.validate();
  return scheme;
}

QuantumScheme one_sided_leaky_encoding(int m, double angle) {
  QuantumScheme scheme = encode_classical_as_quantum(classical::BitVectorScheme(m));
  const auto& layout = scheme.layout;
  Matrix rotation = Matrix::Identity(scheme.dim(), scheme.dim());
  for (int j = 0; j < layout.address_count; ++j) {
    int i0 = layout.index(j, 1, 0);
    int i1 = layout.index(j, 1, 1);
    rotation(i1, i1) = std::cos(angle);
    rotation(i0, i1) = std::sin(angle);
    rotation(i1, i0) = -std::sin(angle);
    rotation(i0, i0) = std::cos(angle);
  }
  scheme.layers.back() = rotation * scheme.layers.back();
  scheme.validate();
  return scheme;
}

ParityDecomposition parity_decompose(const QuantumScheme& scheme) {
  const int s = scheme.layout.address_count;
  if (s > 6) throw core::ResourceLimitError("parity_decompose: s > 6 (2^s compositions)");
  if (scheme.probes > s) throw std::invalid_argument("parity_decompose: requires t <= s");

  const uint64_t table_count = uint64_t{1} << s;
  const int d = scheme.dim();
  std::vector<Matrix> w;
  w.reserve(table_count);
  for (uint64_t idx = 0; idx < table_count; ++idx)
    w.push_back(compose_scheme(scheme, BitTable::from_lex_index(idx, static_cast<size_t>(s))));

  ParityDecomposition out;
  out.address_count = s;
  out.probes = scheme.probes;

  // lexmask(T): table-index bits touched by locations in T
  auto lexmask = [&](uint32_t t_mask) {
    uint64_t mask = 0;
    for (int j = 0; j < s; ++j)
      if ((t_mask >> j) & 1) mask |= uint64_t{1} << (s - 1 - j);
    return mask;
  };

  std::vector<std::pair<uint32_t, Matrix>> all_terms;
  for (uint32_t t_mask = 0; t_mask < (uint32_t{1} << s); ++t_mask) {
    uint64_t xmask = lexmask(t_mask);
    Matrix a = Matrix::Zero(d, d);
    for (uint64_t idx = 0; idx < table_count; ++idx) {
      if (std::popcount(idx & xmask) & 1)
        a -= w[idx];
      else
        a += w[idx];
    }
    a /= static_cast<double>(table_count);
    if (std::popcount(t_mask) <= scheme.probes) {
      all_terms.emplace_back(t_mask, std::move(a));
    } else {
      out.max_high_order_norm = std::max(out.max_high_order_norm, max_abs(a));
    }
  }

  // reconstruction from the kept terms only
  for (uint64_t idx = 0; idx < table_count; ++idx) {
    Matrix rec = Matrix::Zero(d, d);
    for (const auto& [t_mask, a] : all_terms) {
      if (std::popcount(idx & lexmask(t_mask)) & 1)
        rec -= a;
      else
        rec += a;
    }
    out.max_reconstruction_error = std::max(out.max_reconstruction_error, max_abs(rec - w[idx]));
  }
  out.terms = std::move(all_terms);
  return out;
}

RankReport tensor_power_rank(const QuantumScheme& scheme, const std::vector<BitTable>& tables,
                             int exponent, double tol_factor) {
  if (exponent < 0) throw std::invalid_argument("tensor_power_rank: negative exponent");
  if (tables.size() > 512) throw core::ResourceLimitError("tensor_power_rank: more than 512 sets");
  const int d = scheme.dim();
  double flat_len = std::pow(static_cast<double>(d) * d, exponent);
  if (flat_len > static_cast<double>(uint64_t{1} << 22))
    throw core::ResourceLimitError("tensor_power_rank: flattened length beyond 2^22");
  const auto rows = static_cast<Eigen::Index>(tables.size());
  const auto cols = static_cast<Eigen::Index>(exponent == 0 ? 1 : flat_len);
  if (static_cast<double>(rows) * static_cast<double>(cols) > static_cast<double>(uint64_t{1} << 24))
    throw core::ResourceLimitError("tensor_power_rank: matrix beyond 2^24 entries");

  RankReport report;
  report.operator_count = static_cast<int>(tables.size());
  report.dim_bound = core::binom_sum(scheme.layout.address_count,
                                     static_cast<long long>(exponent) * scheme.probes);
  if (rows == 0) return report;

  Matrix x(rows, cols);
  for (Eigen::Index row = 0; row < rows; ++row) {
    Matrix w = compose_scheme(scheme, tables[static_cast<size_t>(row)]);
    CVector flat = CVector::Ones(1);
    CVector wvec(static_cast<Eigen::Index>(d) * d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) wvec(static_cast<Eigen::Index>(c) * d + r) = w(r, c);
    for (int rep = 0; rep < exponent; ++rep) {
      CVector next(flat.size() * wvec.size());
      for (Eigen::Index i = 0; i < flat.size(); ++i)
        next.segment(i * wvec.size(), wvec.size()) = flat(i) * wvec;
      flat.swap(next);
    }
    x.row(row) = flat.transpose();
  }

  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& sigma = svd.singularValues();
  report.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  report.tolerance = tol_factor * sigma_max;
  report.rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > report.tolerance && sigma(i) > 0) ++report.rank;
  report.independent = (report.rank == report.operator_count);
  return report;
}

int tensor_exponent(int family_size, int n, double epsilon) {
  if (family_size < 1 || n < 1) throw std::invalid_argument("tensor_exponent: bad family");
  if (!(epsilon > 0.0) || !(epsilon < 0.25))
    throw std::invalid_argument("tensor_exponent: requires 0 < epsilon < 1/4");
  double value = 4.0 * std::log2(static_cast<double>(family_size)) /
                 (n * std::log2(1.0 / (4.0 * epsilon)));
  return static_cast<int>(std::ceil(value));
}

GramImages scheme_images(const QuantumScheme& scheme,
                         const std::function<BitTable(const std::vector<int>&)>& storage,
                         const core::SetFamily& family) {
  std::set<int> universe;
  for (const auto& set : family.sets) universe.insert(set.begin(), set.end());
  GramImages images(family.sets.size());
  for (size_t a = 0; a < family.sets.size(); ++a) {
    Matrix w = compose_scheme(scheme, storage(family.sets[a]));
    for (int e : universe) {
      if (e < 0 || e >= scheme.universe_size())
        throw std::invalid_argument("scheme_images: family element outside the embedding's domain");
      images[a][e] = w.col(scheme.query_embedding[static_cast<size_t>(e)]);
    }
  }
  return images;
}

GramImages synthetic_overlap_images(const core::SetFamily& family, double delta, int dim) {
  const int count = static_cast<int>(family.sets.size());
  if (dim < count + 1)
    throw std::invalid_argument("synthetic_overlap_images: dim must be at least |F| + 1");
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("synthetic_overlap_images: bad delta");
  GramImages images(static_cast<size_t>(count));
  for (int a = 0; a < count; ++a) {
    CVector v = CVector::Zero(dim);
    v(0) = std::sqrt(delta);
    v(a + 1) = std::sqrt(1.0 - delta);
    // cross inner products need every set's elements present on every row
    for (const auto& set : family.sets)
      for (int e : set) images[static_cast<size_t>(a)][e] = v;
  }
  return images;
}

GramReport gram_matrix(const GramImages& images, const core::SetFamily& family, double epsilon,
                       int texp) {
  const int count = static_cast<int>(family.sets.size());
  if (count < 1) throw std::invalid_argument("gram_matrix: empty family");
  if (texp < 1) throw std::invalid_argument("gram_matrix: tensor exponent must be >= 1");
  if (static_cast<int>(images.size()) != count)
    throw std::invalid_argument("gram_matrix: one image row per family set required");
  if (core::max_pairwise_intersection(family) > family.set_size / 2)
    throw std::invalid_argument("gram_matrix: family violates the pairwise-intersection invariant");

  GramReport report;
  report.tensor_exponent = texp;
  report.entries = Matrix(count, count);
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      Complex product(1.0, 0.0);
      for (int e : family.sets[static_cast<size_t>(b)]) {
        const auto& ua = images[static_cast<size_t>(a)].at(e);
        const auto& ub = images[static_cast<size_t>(b)].at(e);
        product *= ua.dot(ub);
      }
      Complex value(1.0, 0.0);
      for (int rep = 0; rep < texp; ++rep) value *= product;
      report.entries(a, b) = value;
      double mag = std::abs(value);
      if (a == b)
        report.max_diag_error = std::max(report.max_diag_error, std::abs(mag - 1.0));
      else
        report.max_offdiag = std::max(report.max_offdiag, mag);
    }
  }

  double delta = 2.0 * std::sqrt(epsilon);
  report.dominance_margin =
      1.0 - (count - 1) * std::pow(delta, family.set_size * texp / 2.0);
  report.nonsingular_by_margin = report.dominance_margin > 0.0;

  Eigen::JacobiSVD<Matrix> svd(report.entries);
  report.min_singular_value = svd.singularValues()(svd.singularValues().size() - 1);
  return report;
}

void save_scheme(const QuantumScheme& scheme, std::ostream& os) {
  nlohmann::json doc;
  doc["format"] = "bitprobe-qscheme v1";
  doc["address_count"] = scheme.layout.address_count;
  doc["work_size"] = scheme.layout.work_size;
  doc["probes"] = scheme.probes;
  doc["embedding"] = scheme.query_embedding;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : scheme.layers) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < layer.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.cols(); ++c)
        rows.push_back({layer(r, c).real(), layer(r, c).imag()});
    layers.push_back(std::move(rows));
  }
  doc["layers"] = std::move(layers);
  os << doc.dump(2) << "\n";
}

QuantumScheme load_scheme(std::istream& is) {
  nlohmann::json doc = nlohmann::json::parse(is);
  if (doc.at("format").get<std::string>() != "bitprobe-qscheme v1")
    throw std::runtime_error("load_scheme: unsupported format");
  QuantumScheme scheme;
  scheme.layout.address_count = doc.at("address_count").get<int>();
  scheme.layout.work_size = doc.at("work_size").get<int>();
  scheme.probes = doc.at("probes").get<int>();
  scheme.query_embedding = doc.at("embedding").get<std::vector<int>>();
  const int d = scheme.layout.dim();
  for (const auto& flat : doc.at("layers")) {
    if (static_cast<int>(flat.size()) != d * d)
      throw std::runtime_error("load_scheme: layer entry count mismatch");
    Matrix layer(d, d);
    Eigen::Index at = 0;
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c, ++at)
        layer(r, c) = Complex(flat[static_cast<size_t>(at)][0].get<double>(),
                              flat[static_cast<size_t>(at)][1].get<double>());
    scheme.layers.push_back(std::move(layer));
  }
  scheme.validate();
  return scheme;
}

}  // namespace bitprobe::quantum
