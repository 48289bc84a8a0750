#pragma once

#include "gkz/arith.hpp"
#include "gkz/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gkz {

/// A weight block: the exponent vectors w_{k,1}, ..., w_{k,m_k} in Z^n.
using WeightBlock = std::vector<IntVector>;

/// The GKZ datum. A is (r + n) x m with rows 1..r the block indicators and
/// rows r+1..r+n the stacked weight vectors; beta = (beta_1..beta_r, 0..0).
class GkzSystem {
 public:
  std::size_t r() const noexcept { return blocks_.size(); }
  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return matrix_.cols(); }

  const std::vector<WeightBlock>& weight_blocks() const noexcept { return blocks_; }
  const RatVector& beta_head() const noexcept { return beta_head_; }
  RatVector beta() const;
  const IntMatrix& matrix() const noexcept { return matrix_; }

  std::vector<IntVector> columns() const;
  // Block index of a global column, and its first global column.
  std::size_t block_of(std::size_t column) const { return column_block_.at(column); }
  std::size_t block_offset(std::size_t k) const { return block_offsets_.at(k); }

 private:
  friend GkzSystem assemble_system(std::size_t, std::size_t,
                                   const std::vector<WeightBlock>&, const RatVector&);
  std::size_t n_ = 0;
  std::vector<WeightBlock> blocks_;
  RatVector beta_head_;
  IntMatrix matrix_;
  std::vector<std::size_t> column_block_;
  std::vector<std::size_t> block_offsets_;
};

struct BoxOperator {
  IntVector nu_plus;
  IntVector nu_minus;

  friend bool operator==(const BoxOperator&, const BoxOperator&) = default;
  friend auto operator<=>(const BoxOperator&, const BoxOperator&) = default;
};

struct EulerOperator {
  std::size_t row_index = 0;  // 1-based
  IntVector coefficients;
  Rational beta_i;
};

// Throws ShapeError, IntegralBeta, NotFullRank or LatticeNotSpanned, checked
// in that order.
GkzSystem assemble_system(std::size_t r, std::size_t n,
                          const std::vector<WeightBlock>& weight_blocks,
                          const RatVector& beta_head);

// -beta in the open cone spanned by the columns of A.
bool check_semi_nonresonant(const GkzSystem& sys);

std::vector<EulerOperator> euler_operators(const GkzSystem& sys);

// Twice the largest column 1-norm of A.
std::size_t default_degree_bound(const GkzSystem& sys);

// Every kernel vector nu with |nu+| <= degree_bound, one per sign class
// (first nonzero entry of nu positive), sorted by (nu+, nu-).
std::vector<BoxOperator> box_operators(const GkzSystem& sys, std::size_t degree_bound);

std::string render(const BoxOperator& op);
std::string render(const EulerOperator& op);

struct SystemReport {
  bool valid = true;
  bool hypothesis = false;
  std::size_t euler_count = 0;
  std::size_t box_count = 0;
  std::size_t degree_bound = 0;
  Integer volume = 0;
};

SystemReport system_report(const GkzSystem& sys);

}  // namespace gkz
