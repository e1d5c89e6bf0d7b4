#include "rapprox/linalg.hpp"

namespace rapprox {

std::vector<size_t> rref(MatQ& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && m[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[r]);
    Rat inv = m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank(MatQ m) { return rref(m).size(); }

std::vector<std::vector<Rat>> kernel_basis(MatQ m, size_t cols) {
  if (m.empty()) m.push_back(std::vector<Rat>(cols, Rat(0)));
  for (auto& row : m)
    if (row.size() != cols) fail(Errc::dimension_mismatch, "kernel of a ragged matrix");
  std::vector<size_t> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rat>> basis;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rat> v(cols, Rat(0));
    v[f] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

MatQ inverse(MatQ m) {
  size_t n = m.size();
  for (auto& row : m)
    if (row.size() != n) fail(Errc::dimension_mismatch, "inverse of a nonsquare matrix");
  for (size_t i = 0; i < n; ++i) {
    m[i].resize(2 * n, Rat(0));
    m[i][n + i] = 1;
  }
  std::vector<size_t> pivots = rref(m);
  if (pivots.size() != n || (n > 0 && pivots.back() != n - 1))
    fail(Errc::singular_gram, "matrix is singular");
  MatQ out(n, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i][j] = m[i][n + j];
  return out;
}

Signature symmetric_signature(MatQ m) {
  size_t n = m.size();
  for (auto& row : m)
    if (row.size() != n) fail(Errc::dimension_mismatch, "signature of a nonsquare matrix");
  Signature sig;
  for (size_t k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      size_t j = k + 1;
      while (j < n && m[j][j] == 0) ++j;
      if (j < n) {
        std::swap(m[k], m[j]);
        for (auto& row : m) std::swap(row[k], row[j]);
      } else {
        // all remaining diagonal entries vanish: look for an off-diagonal
        // hyperbolic pair and fold it onto the diagonal
        size_t a = n, b = n;
        for (size_t i = k; i < n && a == n; ++i)
          for (size_t l = i + 1; l < n; ++l)
            if (m[i][l] != 0) {
              a = i;
              b = l;
              break;
            }
        if (a == n) {
          sig.zero += static_cast<int>(n - k);
          return sig;
        }
        if (a != k) {
          std::swap(m[k], m[a]);
          for (auto& row : m) std::swap(row[k], row[a]);
        }
        for (size_t j2 = 0; j2 < n; ++j2) m[k][j2] += m[b][j2];
        for (size_t i2 = 0; i2 < n; ++i2) m[i2][k] += m[i2][b];
      }
    }
    if (m[k][k] == 0) {
      ++sig.zero;
      continue;
    }
    for (size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      Rat f = m[i][k] / m[k][k];
      for (size_t j = 0; j < n; ++j) m[i][j] -= f * m[k][j];
      for (size_t j = 0; j < n; ++j) m[j][i] -= f * m[j][k];
    }
    if (m[k][k] > 0)
      ++sig.positive;
    else
      ++sig.negative;
  }
  return sig;
}

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "dot of unequal lengths");
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Rat> mat_vec(const MatQ& m, const std::vector<Rat>& v) {
  std::vector<Rat> out;
  out.reserve(m.size());
  for (const auto& row : m) out.push_back(dot(row, v));
  return out;
}

}  // namespace rapprox
