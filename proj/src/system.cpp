#include "gkz/system.hpp"

#include "gkz/error.hpp"
#include "gkz/volume.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace gkz {

RatVector GkzSystem::beta() const {
  RatVector full = beta_head_;
  full.resize(r() + n_, Rational(0));
  return full;
}

std::vector<IntVector> GkzSystem::columns() const {
  std::vector<IntVector> cols;
  cols.reserve(m());
  for (std::size_t j = 0; j < m(); ++j) cols.push_back(matrix_.column(j));
  return cols;
}

GkzSystem assemble_system(std::size_t r, std::size_t n,
                          const std::vector<WeightBlock>& weight_blocks,
                          const RatVector& beta_head) {
  if (r == 0) throw Error(ErrorCode::ShapeError, "r must be at least 1");
  if (n == 0) throw Error(ErrorCode::ShapeError, "n must be at least 1");
  if (weight_blocks.size() != r) {
    throw Error(ErrorCode::ShapeError, "expected " + std::to_string(r) +
                                           " weight blocks, got " +
                                           std::to_string(weight_blocks.size()));
  }
  if (beta_head.size() != r) {
    throw Error(ErrorCode::ShapeError, "expected " + std::to_string(r) +
                                           " beta entries, got " +
                                           std::to_string(beta_head.size()));
  }
  for (std::size_t k = 0; k < r; ++k) {
    if (weight_blocks[k].empty()) {
      throw Error(ErrorCode::ShapeError, "weight block " + std::to_string(k + 1) + " is empty");
    }
    for (std::size_t j = 0; j < weight_blocks[k].size(); ++j) {
      if (weight_blocks[k][j].size() != n) {
        throw Error(ErrorCode::ShapeError,
                    "weight " + std::to_string(j + 1) + " of block " + std::to_string(k + 1) +
                        " has length " + std::to_string(weight_blocks[k][j].size()) +
                        ", expected " + std::to_string(n));
      }
    }
  }
  for (std::size_t k = 0; k < r; ++k) {
    if (is_integral(beta_head[k])) {
      throw Error(ErrorCode::IntegralBeta,
                  "beta_" + std::to_string(k + 1) + " = " + to_string(beta_head[k]) +
                      " is an integer");
    }
  }

  GkzSystem sys;
  sys.n_ = n;
  sys.blocks_ = weight_blocks;
  sys.beta_head_ = beta_head;
  std::size_t m = 0;
  for (const auto& b : weight_blocks) {
    sys.block_offsets_.push_back(m);
    m += b.size();
  }
  sys.matrix_ = IntMatrix(r + n, m);
  std::size_t col = 0;
  for (std::size_t k = 0; k < r; ++k) {
    for (const auto& w : weight_blocks[k]) {
      sys.matrix_(k, col) = 1;
      for (std::size_t i = 0; i < n; ++i) sys.matrix_(r + i, col) = w[i];
      sys.column_block_.push_back(k);
      ++col;
    }
  }

  const SnfDecomposition snf = smith_normal_form(sys.matrix_);
  if (snf.rank() != r + n) {
    throw Error(ErrorCode::NotFullRank, "A has rank " + std::to_string(snf.rank()) +
                                            ", expected " + std::to_string(r + n));
  }
  Integer index = 1;
  for (const auto& d : snf.diagonal()) index *= d;
  if (index != 1) {
    throw Error(ErrorCode::LatticeNotSpanned,
                "columns of A generate a sublattice of index " + to_string(index));
  }
  return sys;
}

bool check_semi_nonresonant(const GkzSystem& sys) {
  RatVector minus_beta = sys.beta();
  for (auto& b : minus_beta) b = -b;
  return cone_interior_contains(sys.columns(), minus_beta);
}

std::vector<EulerOperator> euler_operators(const GkzSystem& sys) {
  std::vector<EulerOperator> ops;
  const RatVector beta = sys.beta();
  for (std::size_t i = 0; i < sys.matrix().rows(); ++i) {
    ops.push_back({i + 1, sys.matrix().row(i), beta[i]});
  }
  return ops;
}

std::size_t default_degree_bound(const GkzSystem& sys) {
  Integer best = 0;
  for (const auto& col : sys.columns()) {
    Integer norm = 0;
    for (const auto& z : col) norm += abs(z);
    best = std::max(best, norm);
  }
  return 2 * static_cast<std::size_t>(best);
}

namespace {

using Exponents = std::vector<int>;

void enumerate_monomials(std::size_t m, int degree, std::size_t pos, Exponents& cur,
                         std::vector<Exponents>& out) {
  if (pos + 1 == m) {
    cur[pos] = degree;
    out.push_back(cur);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[pos] = e;
    enumerate_monomials(m, degree - e, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

bool disjoint(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) return false;
  return true;
}

IntVector to_int_vector(const Exponents& e) { return IntVector(e.begin(), e.end()); }

}  // namespace

std::vector<BoxOperator> box_operators(const GkzSystem& sys, std::size_t degree_bound) {
  const std::size_t m = sys.m();
  const std::size_t rows = sys.matrix().rows();
  std::vector<std::vector<long long>> a(rows, std::vector<long long>(m));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Integer& z = sys.matrix()(i, j);
      if (abs(z) > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::ShapeError, "matrix entry too large for box enumeration");
      }
      a[i][j] = static_cast<long long>(z);
    }

  std::vector<BoxOperator> ops;
  Exponents cur(m, 0);
  for (std::size_t degree = 1; degree <= degree_bound; ++degree) {
    std::vector<Exponents> monomials;
    enumerate_monomials(m, static_cast<int>(degree), 0, cur, monomials);
    std::map<std::vector<long long>, std::vector<std::size_t>> fibers;
    for (std::size_t idx = 0; idx < monomials.size(); ++idx) {
      std::vector<long long> image(rows, 0);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < m; ++j) image[i] += a[i][j] * monomials[idx][j];
      fibers[image].push_back(idx);
    }
    for (const auto& [image, members] : fibers) {
      for (std::size_t p = 0; p < members.size(); ++p)
        for (std::size_t q = 0; q < members.size(); ++q) {
          const Exponents& plus = monomials[members[p]];
          const Exponents& minus = monomials[members[q]];
          if (!(plus > minus) || !disjoint(plus, minus)) continue;
          ops.push_back({to_int_vector(plus), to_int_vector(minus)});
        }
    }
  }
  std::sort(ops.begin(), ops.end());
  return ops;
}

namespace {

std::string render_monomial(const IntVector& exponents) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (exponents[j] == 0) continue;
    if (!first) os << '*';
    first = false;
    os << 'D' << (j + 1);
    if (exponents[j] != 1) os << '^' << exponents[j];
  }
  return first ? std::string("1") : os.str();
}

}  // namespace

std::string render(const BoxOperator& op) {
  return render_monomial(op.nu_plus) + " - " + render_monomial(op.nu_minus);
}

std::string render(const EulerOperator& op) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < op.coefficients.size(); ++j) {
    if (op.coefficients[j] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << op.coefficients[j] << "*x" << (j + 1) << "*D" << (j + 1);
  }
  if (first) os << '0';
  os << " - (" << to_string(op.beta_i) << ')';
  return os.str();
}

SystemReport system_report(const GkzSystem& sys) {
  SystemReport rep;
  rep.valid = true;
  rep.hypothesis = check_semi_nonresonant(sys);
  rep.euler_count = euler_operators(sys).size();
  rep.degree_bound = default_degree_bound(sys);
  rep.box_count = box_operators(sys, rep.degree_bound).size();
  rep.volume = normalized_volume(PointConfiguration{sys.columns()});
  return rep;
}

}  // namespace gkz
