#include "gkz/volume.hpp"

#include "gkz/error.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace gkz {

namespace {

IntMatrix inverse_unimodular(const IntMatrix& u) {
  const std::size_t n = u.rows();
  IntMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RatVector e(n, Rational(0));
    e[j] = 1;
    const auto col = solve_rational(u, e);
    for (std::size_t i = 0; i < n; ++i) {
      inv(i, j) = boost::multiprecision::numerator((*col)[i]);
    }
  }
  return inv;
}

IntVector subtract(const IntVector& a, const IntVector& b) {
  IntVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

int rational_det_sign(std::vector<RatVector> rows) {
  const std::size_t n = rows.size();
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && rows[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(rows[piv], rows[col]);
      sign = -sign;
    }
    if (rows[col][col] < 0) sign = -sign;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (rows[i][col] == 0) continue;
      const Rational f = rows[i][col] / rows[col][col];
      for (std::size_t j = col; j < n; ++j) rows[i][j] -= f * rows[col][j];
    }
  }
  return sign;
}

// Incremental placing state over the points inserted so far.
class Placer {
 public:
  explicit Placer(const std::vector<IntVector>& points) : points_(points) {}

  void place(std::size_t i) {
    if (frame_.empty()) {
      frame_.push_back(i);
      simplices_.push_back({i});
      placed_.push_back(i);
      return;
    }
    if (!in_span(points_[i])) {
      frame_.push_back(i);
      for (auto& s : simplices_) s.push_back(i);
      placed_.push_back(i);
      recompute_coordinates();
      return;
    }
    if (frame_.size() == 1) return;  // repeated point

    placed_.push_back(i);
    coords_[i] = coordinates(points_[i]);
    std::map<std::vector<std::size_t>, std::pair<int, std::size_t>> facets;
    for (const auto& s : simplices_) {
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        std::vector<std::size_t> f;
        for (std::size_t t = 0; t < s.size(); ++t)
          if (t != drop) f.push_back(s[t]);
        std::sort(f.begin(), f.end());
        auto& entry = facets[f];
        entry.first += 1;
        entry.second = s[drop];
      }
    }
    std::vector<std::vector<std::size_t>> added;
    for (const auto& [facet, info] : facets) {
      if (info.first != 1) continue;
      const int side_new = orientation(facet, i);
      const int side_opp = orientation(facet, info.second);
      if (side_new != 0 && side_new == -side_opp) {
        auto s = facet;
        s.push_back(i);
        added.push_back(std::move(s));
      }
    }
    for (auto& s : added) simplices_.push_back(std::move(s));
  }

  std::size_t dimension() const { return frame_.empty() ? 0 : frame_.size() - 1; }
  const std::vector<std::vector<std::size_t>>& simplices() const { return simplices_; }

 private:
  IntMatrix frame_matrix() const {
    const std::size_t k = frame_.size() - 1;
    IntMatrix b(points_[frame_[0]].size(), k);
    for (std::size_t c = 0; c < k; ++c) {
      const IntVector e = subtract(points_[frame_[c + 1]], points_[frame_[0]]);
      for (std::size_t r = 0; r < e.size(); ++r) b(r, c) = e[r];
    }
    return b;
  }

  std::optional<RatVector> solve_in_frame(const IntVector& p) const {
    const IntVector d = subtract(p, points_[frame_[0]]);
    if (frame_.size() == 1) {
      const bool zero = std::all_of(d.begin(), d.end(), [](const Integer& z) { return z == 0; });
      return zero ? std::optional<RatVector>(RatVector{}) : std::nullopt;
    }
    return solve_rational(frame_matrix(), to_rationals(d));
  }

  bool in_span(const IntVector& p) const { return solve_in_frame(p).has_value(); }
  RatVector coordinates(const IntVector& p) const { return *solve_in_frame(p); }

  void recompute_coordinates() {
    coords_.clear();
    for (std::size_t j : placed_) coords_[j] = coordinates(points_[j]);
  }

  int orientation(const std::vector<std::size_t>& facet, std::size_t q) const {
    const RatVector& base = coords_.at(facet[0]);
    std::vector<RatVector> rows;
    auto edge = [&](std::size_t idx) {
      const RatVector& c = coords_.at(idx);
      RatVector e(c.size());
      for (std::size_t t = 0; t < c.size(); ++t) e[t] = c[t] - base[t];
      return e;
    };
    for (std::size_t t = 1; t < facet.size(); ++t) rows.push_back(edge(facet[t]));
    rows.push_back(edge(q));
    return rational_det_sign(std::move(rows));
  }

  const std::vector<IntVector>& points_;
  std::vector<std::size_t> frame_;
  std::vector<std::size_t> placed_;
  std::map<std::size_t, RatVector> coords_;
  std::vector<std::vector<std::size_t>> simplices_;
};

}  // namespace

AffineReduction affine_reduce(const PointConfiguration& config) {
  if (config.points.empty()) {
    throw Error(ErrorCode::DegenerateConfiguration, "empty point configuration");
  }
  const std::size_t ambient = config.points.front().size();
  for (const auto& p : config.points)
    if (p.size() != ambient) throw Error(ErrorCode::DimensionMismatch, "point length");

  AffineReduction out;
  out.origin = config.points.front();
  const std::size_t count = config.points.size();
  if (count == 1 || ambient == 0) {
    out.points.assign(count, IntVector{});
    out.basis = IntMatrix(ambient, 0);
    return out;
  }

  IntMatrix diffs(ambient, count - 1);
  for (std::size_t j = 1; j < count; ++j)
    for (std::size_t i = 0; i < ambient; ++i)
      diffs(i, j - 1) = config.points[j][i] - out.origin[i];

  // U D V = S: rows of U D beyond the rank vanish, row i of U D is divisible
  // by s_i, and the lattice D Z^{count-1} has basis s_i * U^{-1} e_i.
  const SnfDecomposition snf = smith_normal_form(diffs);
  const std::size_t k = snf.rank();
  const IntMatrix ud = snf.U * diffs;
  const IntMatrix u_inv = inverse_unimodular(snf.U);

  out.dim = k;
  out.points.push_back(IntVector(k, Integer(0)));
  for (std::size_t j = 0; j + 1 < count; ++j) {
    IntVector p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = ud(i, j) / snf.S(i, i);
    out.points.push_back(std::move(p));
  }
  out.basis = IntMatrix(ambient, k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < ambient; ++i) out.basis(i, c) = u_inv(i, c) * snf.S(c, c);
  return out;
}

Triangulation placing_triangulation(const std::vector<IntVector>& points) {
  if (points.empty()) {
    throw Error(ErrorCode::DegenerateConfiguration, "no points to triangulate");
  }
  const std::size_t d = points.front().size();
  Placer placer(points);
  for (std::size_t i = 0; i < points.size(); ++i) placer.place(i);
  if (placer.dimension() == 0 || placer.dimension() != d) {
    throw Error(ErrorCode::DegenerateConfiguration,
                "points span an affine space of dimension " +
                    std::to_string(placer.dimension()) + " inside Z^" + std::to_string(d));
  }
  Triangulation tri;
  for (const auto& s : placer.simplices()) {
    IntMatrix edges(d, d);
    for (std::size_t c = 0; c < d; ++c) {
      const IntVector e = subtract(points[s[c + 1]], points[s[0]]);
      for (std::size_t r = 0; r < d; ++r) edges(r, c) = e[r];
    }
    auto sorted = s;
    std::sort(sorted.begin(), sorted.end());
    tri.simplices.push_back(std::move(sorted));
    tri.volumes.push_back(abs(determinant(edges)));
  }
  return tri;
}

Integer normalized_volume(const PointConfiguration& config) {
  const AffineReduction red = affine_reduce(config);
  const Triangulation tri = placing_triangulation(red.points);
  Integer total = 0;
  for (const auto& v : tri.volumes) total += v;
  return total;
}

}  // namespace gkz
