#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "bitprobe/bit_table.hpp"
#include "bitprobe/core.hpp"
#include "bitprobe/schemes.hpp"

namespace bitprobe::quantum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Basis convention |j, b, z>: address j in [0, s), data bit b, work index z
// in [0, Z). Basis index = (j*2 + b)*Z + z. The output bit is the least
// significant bit of z (the "rightmost" measured bit).
struct RegisterLayout {
  int address_count = 0;  // s
  int work_size = 2;      // Z >= 2

  int dim() const { return address_count * 2 * work_size; }
  int index(int address, int data_bit, int work) const {
    return (address * 2 + data_bit) * work_size + work;
  }
  int address_of(int i) const { return i / (2 * work_size); }
  int data_bit_of(int i) const { return (i / work_size) % 2; }
  int work_of(int i) const { return i % work_size; }
  int output_bit_of(int i) const { return work_of(i) & 1; }
  void validate() const;
};

// t-probe query scheme: layers U_0..U_t composed with the phase oracle as
// U_t O U_{t-1} O ... U_1 O U_0.
struct QuantumScheme {
  RegisterLayout layout;
  int probes = 0;
  std::vector<Matrix> layers;       // probes + 1 unitaries, D x D
  std::vector<int> query_embedding;  // universe element -> basis index, data/output bits 0

  int dim() const { return layout.dim(); }
  int universe_size() const { return static_cast<int>(query_embedding.size()); }
  // unitarity within 1e-9, layer count, embedding injectivity and bit
  // conventions
  void validate() const;
};

// Diagonal phase oracle: entry at |j, b, z> equals (-1)^(b * x_j).
struct OracleSpec {
  BitTable table;
  std::vector<int> diagonal;  // +1/-1, length D
};

OracleSpec oracle_matrix(const BitTable& table, const RegisterLayout& layout);
Matrix oracle_dense(const OracleSpec& oracle);

// W = U_t O U_{t-1} O ... U_1 O U_0 for the given table.
Matrix compose_scheme(const QuantumScheme& scheme, const BitTable& table);

// Probability that measuring the output bit of W|q> gives 1.
double run_query(const QuantumScheme& scheme, const BitTable& table, int q);
double run_query_with_operator(const QuantumScheme& scheme, const Matrix& w, int q);

// Reversible embedding of a deterministic one-probe classical scheme:
// U_0 routes each query to its probe address in a data-bit superposition,
// the oracle writes the probed bit into the relative phase, and U_1 turns the
// phase back into the output bit (Hadamard on the data bit followed by a
// data-to-output CNOT permutation). Rejects trees deeper than one probe.
QuantumScheme encode_classical_as_quantum(const classical::DeterministicScheme& scheme);

// Haar-ish random layers via QR of complex Gaussian matrices; the embedding
// is left empty (no query convention is needed for spectrum/rank checks).
QuantumScheme random_scheme(int address_count, int probes, int work_size, uint64_t seed);

// Synthetic one-sided-error scheme: the encoded bit-vector scheme followed by
// a rotation that leaks output-1 amplitude into output-0 on the data-bit-1
// states only. Positive queries then succeed with probability cos(angle)^2
// while negative queries remain exact.
QuantumScheme one_sided_leaky_encoding(int m, double angle);

// The expansion W_x = sum_T (-1)^{[x]_T} A_T with A_T recovered by Fourier
// inversion over all 2^s tables: A_T = 2^{-s} sum_x (-1)^{[x]_T} W_x.
struct ParityDecomposition {
  int address_count = 0;
  int probes = 0;
  std::vector<std::pair<uint32_t, Matrix>> terms;  // mask bit j <=> location j in T, |T| <= probes
  double max_reconstruction_error = 0.0;           // over all 2^s tables
  double max_high_order_norm = 0.0;                // max ||A_T||_max over |T| > probes
};

ParityDecomposition parity_decompose(const QuantumScheme& scheme);

struct RankReport {
  int rank = 0;
  core::BigInt dim_bound;            // binom_sum(s, exponent * probes)
  bool independent = false;          // rank == number of operators
  int operator_count = 0;
  std::vector<double> singular_values;
  double tolerance = 0.0;            // absolute cutoff used (tol_factor * sigma_max)
};

// Flattens W^{(x)} tensor powers to rows and counts singular values above
// tol_factor * sigma_max. Row order follows `tables`.
RankReport tensor_power_rank(const QuantumScheme& scheme, const std::vector<BitTable>& tables,
                             int exponent, double tol_factor = 1e-6);

// tensor exponent from the amplification-style formula
// ceil(4*log2(|F|) / (n*log2(1/(4*eps)))), base-2 logs
int tensor_exponent(int family_size, int n, double epsilon);

// images[a][element] = W_{S_a} |element>
using GramImages = std::vector<std::map<int, CVector>>;

GramImages scheme_images(const QuantumScheme& scheme,
                         const std::function<BitTable(const std::vector<int>&)>& storage,
                         const core::SetFamily& family);

// Unit vectors with every cross overlap exactly delta:
// v_a = sqrt(1-delta)*u_a + sqrt(delta)*u_0 over an orthonormal {u_i}.
GramImages synthetic_overlap_images(const core::SetFamily& family, double delta, int dim);

struct GramReport {
  Matrix entries;
  int tensor_exponent = 0;
  double min_singular_value = 0.0;
  double dominance_margin = 0.0;    // 1 - (|F|-1) * delta^(n*texp/2), delta = 2*sqrt(eps)
  bool nonsingular_by_margin = false;
  double max_diag_error = 0.0;
  double max_offdiag = 0.0;
};

// M(S,T) = (prod_{i in T} <W_S i | W_T i>)^texp over the family, with the
// diagonal-dominance margin and the measured minimum singular value.
// Rejects families whose pairwise intersections exceed floor(n/2).
GramReport gram_matrix(const GramImages& images, const core::SetFamily& family, double epsilon,
                       int texp);

// Scheme file IO (strict: validates unitarity and layout on load).
void save_scheme(const QuantumScheme& scheme, std::ostream& os);
QuantumScheme load_scheme(std::istream& is);

}  // namespace bitprobe::quantum
