#pragma once

// Dense exact linear algebra over Q for the small matrices this project
// meets (rank <= 10 lattices, condition matrices of a few dozen rows).

#include <vector>

#include "rapprox/numeric.hpp"

namespace rapprox {

using MatQ = std::vector<std::vector<Rat>>;

// Reduced row echelon form in place; returns pivot column indices in order.
std::vector<size_t> rref(MatQ& m);

size_t rank(MatQ m);

// Basis of the right kernel in the RREF convention: one vector per free
// column (ascending), with unit coefficient on the free column.
std::vector<std::vector<Rat>> kernel_basis(MatQ m, size_t cols);

// Inverse of a square nonsingular matrix; fails on singular input.
MatQ inverse(MatQ m);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

// Sylvester signature of a symmetric matrix via exact congruence
// diagonalization.
Signature symmetric_signature(MatQ m);

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b);

std::vector<Rat> mat_vec(const MatQ& m, const std::vector<Rat>& v);

}  // namespace rapprox
