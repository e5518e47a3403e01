#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bitprobe/bit_table.hpp"
#include "bitprobe/core.hpp"

namespace bitprobe::verifier {

using core::BigInt;

// Multilinear polynomial over y_1..y_s with integer coefficients, stored as
// monomial-mask -> coefficient with no zero entries. Products reduce by
// y^2 = y (mask union).
class MultilinearPolynomial {
 public:
  explicit MultilinearPolynomial(int num_vars);
  static MultilinearPolynomial constant(int num_vars, BigInt value);
  static MultilinearPolynomial variable(int num_vars, int j);

  int num_vars() const { return num_vars_; }
  const std::map<uint32_t, BigInt>& coefficients() const { return coeffs_; }
  int degree() const;  // 0 for the zero polynomial

  // assignment bit j gives the value of y_j
  BigInt eval_mask(uint32_t assignment) const;
  BigInt eval(const bitprobe::BitTable& table) const;

  MultilinearPolynomial& operator+=(const MultilinearPolynomial& other);
  MultilinearPolynomial& operator-=(const MultilinearPolynomial& other);
  friend MultilinearPolynomial operator+(MultilinearPolynomial a, const MultilinearPolynomial& b) {
    return a += b;
  }
  friend MultilinearPolynomial operator-(MultilinearPolynomial a, const MultilinearPolynomial& b) {
    return a -= b;
  }
  friend MultilinearPolynomial operator*(const MultilinearPolynomial& a, const MultilinearPolynomial& b);

 private:
  void set(uint32_t mask, BigInt value);
  int num_vars_;
  std::map<uint32_t, BigInt> coeffs_;
};

// A function {0,1}^s -> Z as its full evaluation vector, indexed by the
// lexicographic order of table strings (BitTable::lex_index).
struct FunctionTable {
  int num_vars = 0;
  std::vector<BigInt> values;  // length 2^num_vars

  static FunctionTable constant_one(int num_vars);
  bool operator==(const FunctionTable&) const = default;
};

FunctionTable pointwise_product(const FunctionTable& a, const FunctionTable& b);

// Exact rank over the rationals of an integer matrix (fraction-free Bareiss
// elimination; no tolerances).
int exact_rank(std::vector<std::vector<BigInt>> rows);

}  // namespace bitprobe::verifier
