#include "gkz/linalg.hpp"

#include "gkz/error.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace gkz {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    for (long long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1;
  return id;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
  if (rows.empty()) return IntMatrix();
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "rows of unequal length");
    }
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& columns) {
  return from_rows(columns).transposed();
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
  }
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

IntVector operator*(const IntMatrix& a, const IntVector& v) {
  if (a.cols() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector product shape");
  }
  IntVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SnfWorker {
  IntMatrix a;
  IntMatrix u;
  IntMatrix v;

  explicit SnfWorker(const IntMatrix& m)
      : a(m), u(IntMatrix::identity(m.rows())), v(IntMatrix::identity(m.cols())) {}

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
    for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(i, j), u(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, j), a(i, k));
    for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, j), v(i, k));
  }
  // row_i += q * row_k
  void add_row(std::size_t i, std::size_t k, const Integer& q) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += q * a(k, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) += q * u(k, j);
  }
  // col_j += q * col_k
  void add_col(std::size_t j, std::size_t k, const Integer& q) {
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) += q * a(i, k);
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) += q * v(i, k);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = -a(i, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) = -u(i, j);
  }

  bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    Integer best;
    for (std::size_t i = t; i < a.rows(); ++i)
      for (std::size_t j = t; j < a.cols(); ++j) {
        if (a(i, j) == 0) continue;
        Integer mag = abs(a(i, j));
        if (!found || mag < best) {
          found = true;
          best = mag;
          pi = i;
          pj = j;
        }
      }
    return found;
  }

  void run() {
    const std::size_t limit = std::min(a.rows(), a.cols());
    std::size_t t = 0;
    while (t < limit) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(t, pi, pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        add_row(i, t, Integer(-(a(i, t) / a(t, t))));
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        add_col(j, t, Integer(-(a(t, j) / a(t, t))));
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;  // remainders are smaller than the pivot

      bool divides = true;
      for (std::size_t i = t + 1; i < a.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j) {
          if (a(i, j) % a(t, t) != 0) {
            add_row(t, i, Integer(1));
            divides = false;
            break;
          }
        }
      if (!divides) continue;

      if (a(t, t) < 0) negate_row(t);
      ++t;
    }
  }
};

}  // namespace

std::size_t SnfDecomposition::rank() const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
    if (S(i, i) != 0) ++r;
  return r;
}

IntVector SnfDecomposition::diagonal() const {
  IntVector d;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
  return d;
}

SnfDecomposition smith_normal_form(const IntMatrix& m) {
  SnfWorker w(m);
  w.run();
  return {std::move(w.a), std::move(w.u), std::move(w.v)};
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  }
  // Bareiss fraction-free elimination.
  IntMatrix a = m;
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<IntVector> integer_kernel_basis(const IntMatrix& m) {
  const SnfDecomposition snf = smith_normal_form(m);
  const std::size_t r = snf.rank();
  std::vector<IntVector> basis;
  // M V = U^{-1} S, so the trailing columns of V span the kernel.
  for (std::size_t j = r; j < m.cols(); ++j) {
    IntVector col = snf.V.column(j);
    auto first = std::find_if(col.begin(), col.end(), [](const Integer& z) { return z != 0; });
    if (first != col.end() && *first < 0)
      for (auto& z : col) z = -z;
    basis.push_back(std::move(col));
  }
  return basis;
}

std::size_t rational_rank(const IntMatrix& m) {
  IntMatrix a = m;
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(rank, j), a(piv, j));
    for (std::size_t i = rank + 1; i < a.rows(); ++i) {
      for (std::size_t j = col + 1; j < a.cols(); ++j)
        a(i, j) = (a(i, j) * a(rank, col) - a(i, col) * a(rank, j)) / prev;
      a(i, col) = 0;
    }
    prev = a(rank, col);
    ++rank;
  }
  return rank;
}

std::size_t rational_rank(const RatMatrix& m) {
  RatMatrix a = m;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols && rank < a.rows; ++col) {
    std::size_t piv = rank;
    while (piv < a.rows && a(piv, col) == 0) ++piv;
    if (piv == a.rows) continue;
    for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(rank, j), a(piv, j));
    for (std::size_t i = rank + 1; i < a.rows; ++i) {
      if (a(i, col) == 0) continue;
      const Rational f = a(i, col) / a(rank, col);
      for (std::size_t j = col; j < a.cols; ++j) a(i, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

std::optional<RatVector> solve_rational(const IntMatrix& m, const RatVector& rhs) {
  if (rhs.size() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "right-hand side has " + std::to_string(rhs.size()) +
                    " entries, matrix has " + std::to_string(m.rows()) + " rows");
  }
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  RatMatrix a(rows, cols + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = Rational(m(i, j));
    a(i, cols) = rhs[i];
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a(piv, col) == 0) ++piv;
    if (piv == rows) continue;
    for (std::size_t j = 0; j <= cols; ++j) std::swap(a(rank, j), a(piv, j));
    const Rational lead = a(rank, col);
    for (std::size_t j = col; j <= cols; ++j) a(rank, j) /= lead;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = col; j <= cols; ++j) a(i, j) -= f * a(rank, j);
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < rows; ++i)
    if (a(i, cols) != 0) return std::nullopt;
  RatVector x(cols);
  for (std::size_t k = 0; k < rank; ++k) x[pivot_cols[k]] = a(k, cols);
  return x;
}

Integer dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const IntVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

IntVector primitive(IntVector v) {
  Integer g = 0;
  for (const auto& z : v) g = gcd(g, abs(z));
  if (g > 1)
    for (auto& z : v) z /= g;
  return v;
}

// ---------------------------------------------------------------------------
// Cones

namespace {

void check_full_dimensional(const std::vector<IntVector>& generators) {
  if (generators.empty()) {
    throw Error(ErrorCode::NotFullDimensional, "cone has no generators");
  }
  const std::size_t dim = generators.front().size();
  for (const auto& g : generators)
    if (g.size() != dim) throw Error(ErrorCode::DimensionMismatch, "generator length");
  if (dim == 0 || rational_rank(IntMatrix::from_rows(generators)) != dim) {
    throw Error(ErrorCode::NotFullDimensional,
                "generators do not span the ambient space of dimension " +
                    std::to_string(dim));
  }
}

// Calls visit(indices) for every k-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<IntVector> cone_facet_normals(const std::vector<IntVector>& generators) {
  check_full_dimensional(generators);
  const std::size_t dim = generators.front().size();
  std::vector<IntVector> normals;

  auto consider = [&](const IntVector& candidate) {
    bool any_pos = false, any_neg = false;
    for (const auto& g : generators) {
      const Integer s = dot(candidate, g);
      any_pos = any_pos || s > 0;
      any_neg = any_neg || s < 0;
    }
    if (any_pos && any_neg) return;
    IntVector n = candidate;
    if (any_neg)
      for (auto& z : n) z = -z;
    normals.push_back(primitive(std::move(n)));
  };

  if (dim == 1) {
    consider(IntVector{1});
    consider(IntVector{-1});
  } else {
    for_each_subset(generators.size(), dim - 1, [&](const std::vector<std::size_t>& idx) {
      std::vector<IntVector> rows;
      for (std::size_t i : idx) rows.push_back(generators[i]);
      const IntMatrix face = IntMatrix::from_rows(rows);
      if (rational_rank(face) != dim - 1) return;
      const auto kernel = integer_kernel_basis(face);
      consider(kernel.front());
    });
  }
  std::sort(normals.begin(), normals.end());
  normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
  return normals;
}

bool cone_interior_contains(const std::vector<IntVector>& generators,
                            const RatVector& point) {
  const auto normals = cone_facet_normals(generators);
  if (point.size() != generators.front().size()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension");
  }
  for (const auto& n : normals)
    if (dot(n, point) <= 0) return false;
  return true;
}

}  // namespace gkz
