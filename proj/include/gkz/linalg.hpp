#pragma once

// Exact integer and rational linear algebra. Nothing here touches floating
// point; all routines are pure functions of their arguments.

#include "gkz/arith.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gkz {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows);
  static IntMatrix from_columns(const std::vector<IntVector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  IntVector row(std::size_t i) const;
  IntVector column(std::size_t j) const;
  IntMatrix transposed() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);

/// Dense rational matrix, used for rank checks on exact rational maps.
struct RatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
};

/// U * M * V == S with U, V unimodular and S diagonal with s1 | s2 | ...
struct SnfDecomposition {
  IntMatrix S;
  IntMatrix U;
  IntMatrix V;

  std::size_t rank() const;
  IntVector diagonal() const;
};

// Pivot: smallest nonzero absolute value in the active block, ties broken by
// the lowest (row, col). Diagonal entries come out nonnegative.
SnfDecomposition smith_normal_form(const IntMatrix& m);

Integer determinant(const IntMatrix& m);

// Z-basis of {v : M v = 0}, each vector normalized to a positive first
// nonzero entry. Empty for injective M.
std::vector<IntVector> integer_kernel_basis(const IntMatrix& m);

std::size_t rational_rank(const IntMatrix& m);
std::size_t rational_rank(const RatMatrix& m);

// One exact solution of M x = rhs (free variables set to zero), or nullopt
// when the system is inconsistent. Throws DimensionMismatch.
std::optional<RatVector> solve_rational(const IntMatrix& m, const RatVector& rhs);

Integer dot(const IntVector& a, const IntVector& b);
Rational dot(const IntVector& a, const RatVector& b);
IntVector primitive(IntVector v);

// Inward primitive normals of the facets of cone(generators), sorted and
// deduplicated. Brute force over all (dim - 1)-subsets of generators: cost
// C(#generators, dim - 1) small determinant/kernel computations, fine for
// roughly a dozen generators in dimension <= 4. Throws NotFullDimensional.
std::vector<IntVector> cone_facet_normals(const std::vector<IntVector>& generators);

// True iff <n, point> > 0 for every inward facet normal n.
bool cone_interior_contains(const std::vector<IntVector>& generators,
                            const RatVector& point);

}  // namespace gkz
