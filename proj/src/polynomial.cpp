#include "bitprobe/polynomial.hpp"

#include <bit>
#include <stdexcept>

namespace bitprobe::verifier {

MultilinearPolynomial::MultilinearPolynomial(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > 20)
    throw std::invalid_argument("MultilinearPolynomial: num_vars must be in [0, 20]");
}

MultilinearPolynomial MultilinearPolynomial::constant(int num_vars, BigInt value) {
  MultilinearPolynomial p(num_vars);
  p.set(0, std::move(value));
  return p;
}

MultilinearPolynomial MultilinearPolynomial::variable(int num_vars, int j) {
  if (j < 0 || j >= num_vars) throw std::invalid_argument("MultilinearPolynomial: variable out of range");
  MultilinearPolynomial p(num_vars);
  p.set(1u << j, 1);
  return p;
}

void MultilinearPolynomial::set(uint32_t mask, BigInt value) {
  if (value == 0)
    coeffs_.erase(mask);
  else
    coeffs_[mask] = std::move(value);
}

int MultilinearPolynomial::degree() const {
  int d = 0;
  for (const auto& [mask, coeff] : coeffs_) d = std::max(d, std::popcount(mask));
  return d;
}

BigInt MultilinearPolynomial::eval_mask(uint32_t assignment) const {
  BigInt total = 0;
  for (const auto& [mask, coeff] : coeffs_)
    if ((mask & assignment) == mask) total += coeff;
  return total;
}

BigInt MultilinearPolynomial::eval(const bitprobe::BitTable& table) const {
  if (static_cast<int>(table.size()) != num_vars_)
    throw std::invalid_argument("MultilinearPolynomial::eval: table size mismatch");
  uint32_t assignment = 0;
  for (int j = 0; j < num_vars_; ++j)
    if (table.get(static_cast<size_t>(j))) assignment |= 1u << j;
  return eval_mask(assignment);
}

MultilinearPolynomial& MultilinearPolynomial::operator+=(const MultilinearPolynomial& other) {
  if (num_vars_ != other.num_vars_) throw std::invalid_argument("polynomial arity mismatch");
  for (const auto& [mask, coeff] : other.coeffs_) {
    auto it = coeffs_.find(mask);
    if (it == coeffs_.end()) {
      coeffs_.emplace(mask, coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) coeffs_.erase(it);
    }
  }
  return *this;
}

MultilinearPolynomial& MultilinearPolynomial::operator-=(const MultilinearPolynomial& other) {
  if (num_vars_ != other.num_vars_) throw std::invalid_argument("polynomial arity mismatch");
  for (const auto& [mask, coeff] : other.coeffs_) {
    auto it = coeffs_.find(mask);
    if (it == coeffs_.end()) {
      coeffs_.emplace(mask, -coeff);
    } else {
      it->second -= coeff;
      if (it->second == 0) coeffs_.erase(it);
    }
  }
  return *this;
}

MultilinearPolynomial operator*(const MultilinearPolynomial& a, const MultilinearPolynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw std::invalid_argument("polynomial arity mismatch");
  MultilinearPolynomial out(a.num_vars_);
  for (const auto& [ma, ca] : a.coeffs_) {
    for (const auto& [mb, cb] : b.coeffs_) {
      uint32_t mask = ma | mb;
      auto it = out.coeffs_.find(mask);
      if (it == out.coeffs_.end()) {
        out.coeffs_.emplace(mask, ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second == 0) out.coeffs_.erase(it);
      }
    }
  }
  return out;
}

FunctionTable FunctionTable::constant_one(int num_vars) {
  FunctionTable t;
  t.num_vars = num_vars;
  t.values.assign(size_t{1} << num_vars, BigInt(1));
  return t;
}

FunctionTable pointwise_product(const FunctionTable& a, const FunctionTable& b) {
  if (a.num_vars != b.num_vars || a.values.size() != b.values.size())
    throw std::invalid_argument("pointwise_product: shape mismatch");
  FunctionTable out;
  out.num_vars = a.num_vars;
  out.values.resize(a.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

int exact_rank(std::vector<std::vector<BigInt>> rows) {
  if (rows.empty()) return 0;
  const size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw std::invalid_argument("exact_rank: ragged matrix");

  size_t rank = 0;
  BigInt prev = 1;
  for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
    size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const BigInt& lead = rows[rank][col];
    for (size_t i = rank + 1; i < rows.size(); ++i) {
      // Bareiss step: exact division keeps entries integral
      for (size_t j = col + 1; j < cols; ++j)
        rows[i][j] = (rows[i][j] * lead - rows[i][col] * rows[rank][j]) / prev;
      rows[i][col] = 0;
    }
    prev = lead;
    ++rank;
  }
  return static_cast<int>(rank);
}

}  // namespace bitprobe::verifier
