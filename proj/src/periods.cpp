#include "gkz/periods.hpp"

#include "gkz/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <limits>

namespace gkz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxNodes = std::size_t{1} << 16;
constexpr std::size_t kPanelOrder = 16;
constexpr double kMinMargin = 1e-3;

Complex horner(std::span<const Complex> coeffs, Complex z) {
  Complex acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

Complex ipow(Complex z, long long e) {
  if (e < 0) return 1.0 / ipow(z, -e);
  Complex out = 1.0;
  Complex base = z;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// One block of the integrand in a chart: b(t) = t^{lowest} * poly(t).
struct ChartBlock {
  std::vector<long long> exponents;  // per column of the block
  long long lowest = 0;
  std::vector<Complex> poly;         // ascending, degree = lattice length
  double beta = 0.0;
  Rational beta_exact;
};

struct ChartData {
  Chart chart = Chart::Direct;
  std::vector<ChartBlock> blocks;
  std::vector<Complex> zeros;            // all blocks, chart coordinate
  std::vector<std::size_t> zero_blocks;  // block of each zero
  Rational origin_exponent;              // exponent of prod b^beta at the origin
  double sign = 1.0;                     // dt/t = sign * du/u
};

void require_curve(const GkzSystem& sys, const EvaluationPoint& x) {
  if (sys.n() != 1) {
    throw Error(ErrorCode::UnsupportedDimension, "periods need n = 1");
  }
  if (x.x.size() != sys.r()) {
    throw Error(ErrorCode::ShapeError, "evaluation point has " + std::to_string(x.x.size()) +
                                           " blocks, expected " + std::to_string(sys.r()));
  }
  for (std::size_t k = 0; k < sys.r(); ++k) {
    if (x.x[k].size() != sys.weight_blocks()[k].size()) {
      throw Error(ErrorCode::ShapeError,
                  "block " + std::to_string(k + 1) + " of the evaluation point has " +
                      std::to_string(x.x[k].size()) + " coefficients, expected " +
                      std::to_string(sys.weight_blocks()[k].size()));
    }
  }
}

ChartBlock make_block(const GkzSystem& sys, const EvaluationPoint& x, std::size_t k, Chart chart) {
  ChartBlock blk;
  const auto& weights = sys.weight_blocks()[k];
  for (const auto& w : weights) {
    const long long e = static_cast<long long>(w[0]);
    blk.exponents.push_back(chart == Chart::Direct ? e : -e);
  }
  blk.lowest = *std::min_element(blk.exponents.begin(), blk.exponents.end());
  const long long highest = *std::max_element(blk.exponents.begin(), blk.exponents.end());
  blk.poly.assign(static_cast<std::size_t>(highest - blk.lowest + 1), Complex(0.0));
  for (std::size_t j = 0; j < weights.size(); ++j) {
    blk.poly[static_cast<std::size_t>(blk.exponents[j] - blk.lowest)] += x.x[k][j];
  }
  blk.beta_exact = sys.beta_head()[k];
  blk.beta = static_cast<double>(blk.beta_exact);
  return blk;
}

ChartData make_chart(const GkzSystem& sys, const EvaluationPoint& x, Chart chart) {
  require_curve(sys, x);
  ChartData data;
  data.chart = chart;
  data.sign = chart == Chart::Direct ? 1.0 : -1.0;
  data.origin_exponent = 0;
  for (std::size_t k = 0; k < sys.r(); ++k) {
    data.blocks.push_back(make_block(sys, x, k, chart));
    const ChartBlock& blk = data.blocks.back();
    data.origin_exponent += blk.beta_exact * blk.lowest;
    for (const Complex& z : polynomial_roots(blk.poly)) {
      data.zeros.push_back(z);
      data.zero_blocks.push_back(k);
    }
  }
  return data;
}

// Gauss-Legendre rule on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) - 1.0) * z * p1 - (static_cast<double>(j) - 1.0) * p2) /
             static_cast<double>(j);
        dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      }
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Exponent of prod_k b_k^{beta_k} at p when p is a puncture of the chart.
std::optional<Rational> local_exponent(const ChartData& chart, Complex p) {
  if (std::abs(p) <= 1e-12) return chart.origin_exponent;
  for (std::size_t i = 0; i < chart.zeros.size(); ++i) {
    if (std::abs(chart.zeros[i] - p) <= 1e-9 * std::max(1.0, std::abs(p))) {
      return chart.blocks[chart.zero_blocks[i]].beta_exact;
    }
  }
  return std::nullopt;
}

std::vector<Complex> obstacles(const ChartData& chart) {
  std::vector<Complex> out = chart.zeros;
  out.push_back(Complex(0.0));
  return out;
}

double distance_to_segment(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double s = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

[[noreturn]] void bad_cycle(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

void check_segment(const CycleSpec& cycle, const ChartData& chart) {
  const Complex p = cycle.center, q = cycle.end;
  const double ep = cycle.radius, eq = cycle.end_radius;
  if (!(ep > 0.0) || !(eq > 0.0) || !std::isfinite(ep) || !std::isfinite(eq)) {
    bad_cycle("segment end radii must be positive");
  }
  const auto alpha_p = local_exponent(chart, p);
  const auto alpha_q = local_exponent(chart, q);
  if (!alpha_p || !alpha_q) bad_cycle("segment endpoints must be punctures of the chart");
  if (is_integral(*alpha_p) || is_integral(*alpha_q)) {
    throw Error(ErrorCode::CycleNotClosed,
                "a segment can only be regularized at punctures with non-integral exponent");
  }
  if (ep + eq >= std::abs(q - p)) bad_cycle("segment end circles overlap");
  const Complex u = (q - p) / std::abs(q - p);
  const Complex a = p + ep * u, b = q - eq * u;
  for (const Complex& o : obstacles(chart)) {
    const bool at_p = std::abs(o - p) <= 1e-9 * std::max(1.0, std::abs(p));
    const bool at_q = std::abs(o - q) <= 1e-9 * std::max(1.0, std::abs(q));
    if (!at_p && std::abs(o - p) < ep * (1.0 + kMinMargin)) bad_cycle("end circle encloses another puncture");
    if (!at_q && std::abs(o - q) < eq * (1.0 + kMinMargin)) bad_cycle("end circle encloses another puncture");
    if (!at_p && !at_q && distance_to_segment(o, a, b) < kMinMargin * std::abs(b - a)) {
      bad_cycle("segment passes within the minimum margin of a puncture");
    }
  }
}

void check_cycle(const CycleSpec& cycle, const ChartData& chart) {
  if (!is_power_of_two(cycle.nodes) || cycle.nodes < 256) {
    bad_cycle("node count must be a power of two >= 256, got " + std::to_string(cycle.nodes));
  }
  if (cycle.orientation != 1 && cycle.orientation != -1) bad_cycle("orientation must be +1 or -1");
  if (cycle.shape == CycleShape::Segment) {
    check_segment(cycle, chart);
    return;
  }
  const double radius = cycle.shape == CycleShape::Circle ? cycle.radius : std::abs(cycle.center);
  if (!(radius > 0.0) || !std::isfinite(radius)) bad_cycle("cycle radius must be positive");
  auto too_close = [&](Complex p) {
    return std::abs(std::abs(p - cycle.center) - radius) < kMinMargin * radius;
  };
  for (const Complex& z : chart.zeros)
    if (too_close(z)) bad_cycle("cycle passes within the minimum margin of a zero");
  if (cycle.shape == CycleShape::Circle && too_close(Complex(0.0))) {
    bad_cycle("cycle passes within the minimum margin of the origin");
  }
}

struct Enclosure {
  Rational exponent;
  bool closed = false;
  std::vector<long long> winding;  // per block, circles only
};

Enclosure circle_enclosure(Complex center, double radius, const ChartData& chart) {
  Enclosure enc;
  const bool origin_inside = std::abs(center) < radius;
  enc.winding.assign(chart.blocks.size(), 0);
  for (std::size_t k = 0; k < chart.blocks.size(); ++k)
    if (origin_inside) enc.winding[k] += chart.blocks[k].lowest;
  for (std::size_t i = 0; i < chart.zeros.size(); ++i)
    if (std::abs(chart.zeros[i] - center) < radius) enc.winding[chart.zero_blocks[i]] += 1;
  enc.exponent = 0;
  for (std::size_t k = 0; k < chart.blocks.size(); ++k)
    enc.exponent += chart.blocks[k].beta_exact * enc.winding[k];
  enc.closed = is_integral(enc.exponent);
  return enc;
}

Enclosure enclosure(const CycleSpec& cycle, const ChartData& chart) {
  Enclosure enc;
  switch (cycle.shape) {
    case CycleShape::OriginLoop:
      enc.exponent = chart.origin_exponent;
      enc.closed = is_integral(enc.exponent) && enc.exponent >= 1;
      return enc;
    case CycleShape::Segment:
      enc.exponent = 0;
      enc.closed = true;
      return enc;
    case CycleShape::Circle:
      break;
  }
  return circle_enclosure(cycle.center, cycle.radius, chart);
}

// Quadrature nodes t_j, weights folding in dt/t, the 1/(2 pi i) factor, the
// orientation, the chart sign and any regularization factor; base_j =
// prod_k b_k(t_j)^{beta_k} along the continued branch; b the section values.
struct Samples {
  std::vector<Complex> t;
  std::vector<Complex> weight;
  std::vector<Complex> base;
  std::vector<std::vector<Complex>> b;  // [node][block]
  std::size_t nodes = 0;
};

// Continues every log b_k from point to point. step() fails on a phase
// increment of pi/2 or more, which signals an under-resolved path.
class Walker {
 public:
  explicit Walker(const ChartData& chart)
      : chart_(&chart), phase_(chart.blocks.size()), poly_(chart.blocks.size()) {}

  void start(Complex t) {
    t_ = t;
    evaluate(t, poly_);
    for (std::size_t k = 0; k < poly_.size(); ++k) phase_[k] = std::arg(section(k));
  }

  bool step(Complex t) {
    std::vector<Complex> next(poly_.size());
    evaluate(t, next);
    const double dt = std::arg(t / t_);
    if (std::abs(dt) >= kPi / 2) return false;
    for (std::size_t k = 0; k < poly_.size(); ++k) {
      const double dp = std::arg(next[k] / poly_[k]);
      if (std::abs(dp) >= kPi / 2) return false;
      phase_[k] += static_cast<double>(chart_->blocks[k].lowest) * dt + dp;
    }
    t_ = t;
    poly_ = std::move(next);
    return true;
  }

  void record(Samples& s, Complex weight) const {
    Complex log_sum = 0.0;
    std::vector<Complex> b(poly_.size());
    for (std::size_t k = 0; k < poly_.size(); ++k) {
      const ChartBlock& blk = chart_->blocks[k];
      const double log_abs =
          static_cast<double>(blk.lowest) * std::log(std::abs(t_)) + std::log(std::abs(poly_[k]));
      log_sum += blk.beta * Complex(log_abs, phase_[k]);
      b[k] = section(k);
    }
    s.t.push_back(t_);
    s.weight.push_back(weight);
    s.base.push_back(std::exp(log_sum));
    s.b.push_back(std::move(b));
  }

  const std::vector<double>& phase() const { return phase_; }

 private:
  Complex section(std::size_t k) const { return ipow(t_, chart_->blocks[k].lowest) * poly_[k]; }

  void evaluate(Complex t, std::vector<Complex>& out) const {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = horner(chart_->blocks[k].poly, t);
  }

  const ChartData* chart_;
  Complex t_;
  std::vector<double> phase_;
  std::vector<Complex> poly_;
};

// Counterclockwise circle starting at the walker's current point `from`,
// which must lie on the circle. Checks the winding on return.
bool walk_circle(Walker w, Complex center, Complex from, std::size_t n, Complex factor,
                 const std::vector<long long>& winding, Samples& s) {
  const double radius = std::abs(from - center);
  const double theta0 = std::arg(from - center);
  const std::vector<double> start = w.phase();
  for (std::size_t j = 0; j < n; ++j) {
    const Complex offset = std::polar(radius, theta0 + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
    const Complex t = center + offset;
    if (j > 0 && !w.step(t)) return false;
    w.record(s, factor * offset / (static_cast<double>(n) * t));
  }
  if (!w.step(from)) return false;
  for (std::size_t k = 0; k < winding.size(); ++k) {
    const double turns = (w.phase()[k] - start[k]) / (2.0 * kPi);
    if (std::abs(turns - static_cast<double>(winding[k])) > 1e-6) return false;
  }
  return true;
}

// Composite Gauss-Legendre along t(s), s in [0, 1]; the walker ends at t(1).
// With fresh set, the walker starts at the first node instead of stepping to
// it; with finish set, it ends at t(1).
template <class Path, class Velocity>
bool walk_panels(Walker& w, bool fresh, bool finish, Path path, Velocity velocity, std::size_t n,
                 Complex factor, Samples& s) {
  std::vector<double> xi, wi;
  gauss_legendre(kPanelOrder, xi, wi);
  const std::size_t panels = n / kPanelOrder;
  const double width = 1.0 / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = width * (static_cast<double>(p) + 0.5);
    for (std::size_t i = 0; i < kPanelOrder; ++i) {
      const double u = mid + 0.5 * width * xi[i];
      const Complex t = path(u);
      if (fresh) {
        w.start(t);
        fresh = false;
      } else if (!w.step(t)) {
        return false;
      }
      w.record(s, factor * velocity(u) * (0.5 * width * wi[i]) / (Complex(0.0, 2.0 * kPi) * t));
    }
  }
  return !finish || w.step(path(1.0));
}

Complex monodromy_minus_one(const Rational& alpha) {
  const double a = static_cast<double>(alpha);
  return std::polar(1.0, 2.0 * kPi * (a - std::floor(a))) - 1.0;
}

bool try_sample(const CycleSpec& cycle, const ChartData& chart, const Enclosure& enc,
                std::size_t n, Samples& s) {
  s = Samples{};
  s.nodes = n;
  const double orient = static_cast<double>(cycle.orientation) * chart.sign;
  Walker w(chart);

  switch (cycle.shape) {
    case CycleShape::Circle: {
      const Complex from = cycle.center + cycle.radius;
      w.start(from);
      return walk_circle(w, cycle.center, from, n, orient, enc.winding, s);
    }
    case CycleShape::OriginLoop: {
      // t(u) = c (1 - e^{2 pi i u}); the walker starts at the first node.
      const Complex c = cycle.center;
      auto path = [c](double u) { return c * (1.0 - std::polar(1.0, 2.0 * kPi * u)); };
      auto velocity = [c](double u) { return -c * Complex(0.0, 2.0 * kPi) * std::polar(1.0, 2.0 * kPi * u); };
      // Both ends sit on the chart origin, where no phase exists.
      return walk_panels(w, true, false, path, velocity, n, orient, s);
    }
    case CycleShape::Segment: {
      // reg[p, q] = C_p / (e^{2 pi i a_p} - 1) + int_a^b - C_q / (e^{2 pi i a_q} - 1),
      // with C_p, C_q small counterclockwise circles anchored at a and b.
      const Complex p = cycle.center, q = cycle.end;
      const Complex u = (q - p) / std::abs(q - p);
      const Complex a = p + cycle.radius * u, b = q - cycle.end_radius * u;
      const Complex fp = orient / monodromy_minus_one(*local_exponent(chart, p));
      const Complex fq = -orient / monodromy_minus_one(*local_exponent(chart, q));
      // The integrand is not periodic on the end circles, so they use
      // panels rather than the trapezoid rule.
      auto end_circle = [&](Walker from, Complex center, Complex anchor, double radius, Complex factor) {
        const Complex r0 = anchor - center;
        auto path = [=](double v) { return center + r0 * std::polar(1.0, 2.0 * kPi * v); };
        auto velocity = [=](double v) { return r0 * Complex(0.0, 2.0 * kPi) * std::polar(1.0, 2.0 * kPi * v); };
        const std::vector<double> start = from.phase();
        if (!walk_panels(from, false, true, path, velocity, n, factor, s)) return false;
        const auto winding = circle_enclosure(center, radius, chart).winding;
        for (std::size_t k = 0; k < winding.size(); ++k) {
          const double turns = (from.phase()[k] - start[k]) / (2.0 * kPi);
          if (std::abs(turns - static_cast<double>(winding[k])) > 1e-6) return false;
        }
        return true;
      };
      w.start(a);
      if (!end_circle(w, p, a, cycle.radius, fp)) return false;
      auto path = [a, b](double t) { return a + t * (b - a); };
      auto velocity = [a, b](double) { return b - a; };
      if (!walk_panels(w, false, true, path, velocity, n, orient, s)) return false;
      return end_circle(w, q, b, cycle.end_radius, fq);
    }
  }
  return false;
}

Samples sample(const CycleSpec& cycle, const ChartData& chart, const Enclosure& enc) {
  Samples s;
  for (std::size_t n = cycle.nodes; n <= kMaxNodes; n *= 2) {
    if (try_sample(cycle, chart, enc, n, s)) return s;
  }
  std::ostringstream os;
  os << "phase step of pi/2 or more persists at " << kMaxNodes << " nodes";
  throw Error(ErrorCode::BranchJump, os.str());
}

struct PreparedCycle {
  ChartData chart;
  Enclosure enc;
  Samples samples;
};

// A segment end names the puncture inside its end circle, so the cycle
// follows the punctures when x moves.
Complex snap_endpoint(const ChartData& chart, Complex point, double radius) {
  std::optional<Complex> found;
  for (const Complex& o : obstacles(chart)) {
    if (std::abs(o - point) < 0.5 * radius) {
      if (found) bad_cycle("segment end circle holds more than one puncture");
      found = o;
    }
  }
  if (!found) bad_cycle("segment endpoints must be punctures of the chart");
  return *found;
}

PreparedCycle prepare(const GkzSystem& sys, const EvaluationPoint& x, const CycleSpec& spec) {
  PreparedCycle p;
  p.chart = make_chart(sys, x, spec.chart);
  CycleSpec cycle = spec;
  if (cycle.shape == CycleShape::Segment) {
    cycle.center = snap_endpoint(p.chart, cycle.center, cycle.radius);
    cycle.end = snap_endpoint(p.chart, cycle.end, cycle.end_radius);
  }
  check_cycle(cycle, p.chart);
  p.enc = enclosure(cycle, p.chart);
  p.samples = sample(cycle, p.chart, p.enc);
  return p;
}

// Integrand factor of d^alpha relative to prod b^beta: prod_k ff(beta_k, m_k)
// b_k^{-m_k} t^{alpha . e}.
struct DerivativeFactor {
  double falling = 1.0;
  std::vector<int> mass;  // per block
  long long t_power = 0;
};

DerivativeFactor derivative_factor(const GkzSystem& sys, const ChartData& chart,
                                   const std::vector<int>& alpha) {
  if (alpha.size() != sys.m()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index has " + std::to_string(alpha.size()) +
                                                  " entries, expected " + std::to_string(sys.m()));
  }
  DerivativeFactor f;
  f.mass.assign(sys.r(), 0);
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] < 0) throw Error(ErrorCode::ValidationError, "negative multi-index entry");
    const std::size_t k = sys.block_of(j);
    f.mass[k] += alpha[j];
    f.t_power += static_cast<long long>(alpha[j]) *
                 chart.blocks[k].exponents[j - sys.block_offset(k)];
  }
  for (std::size_t k = 0; k < sys.r(); ++k)
    f.falling *= static_cast<double>(falling_factorial(chart.blocks[k].beta_exact, f.mass[k]));
  return f;
}

struct Quadrature {
  Complex value;
  double mass = 0.0;  // sum of |terms|, the scale against which cancellation is judged
};

Quadrature integrate(const Samples& s, const DerivativeFactor& f) {
  Quadrature q;
  for (std::size_t j = 0; j < s.t.size(); ++j) {
    Complex term = s.weight[j] * s.base[j] * ipow(s.t[j], f.t_power);
    for (std::size_t k = 0; k < f.mass.size(); ++k)
      if (f.mass[k] != 0) term *= ipow(s.b[j][k], -f.mass[k]);
    term *= f.falling;
    q.value += term;
    q.mass += std::abs(term);
  }
  return q;
}

}  // namespace

CycleSpec origin_loop(Complex center, Chart chart, std::size_t nodes) {
  CycleSpec c;
  c.center = center;
  c.radius = std::abs(center);
  c.shape = CycleShape::OriginLoop;
  c.chart = chart;
  c.nodes = nodes;
  return c;
}

CycleSpec regularized_segment(Complex from, Complex to, double from_radius, double to_radius,
                              Chart chart, std::size_t nodes) {
  CycleSpec c;
  c.shape = CycleShape::Segment;
  c.center = from;
  c.end = to;
  c.radius = from_radius;
  c.end_radius = to_radius;
  c.chart = chart;
  c.nodes = nodes;
  return c;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs) {
  if (coeffs.empty()) return {};
  const std::size_t degree = coeffs.size() - 1;
  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
  if (std::abs(coeffs.front()) <= 1e-14 * scale || std::abs(coeffs.back()) <= 1e-14 * scale) {
    throw Error(ErrorCode::DegenerateCoefficients, "an extreme coefficient vanishes");
  }
  if (degree == 0) return {};

  std::vector<Complex> dcoeffs(degree);
  for (std::size_t i = 1; i <= degree; ++i) dcoeffs[i - 1] = coeffs[i] * static_cast<double>(i);

  const double radius =
      std::pow(std::abs(coeffs.front()) / std::abs(coeffs.back()), 1.0 / static_cast<double>(degree));
  std::vector<Complex> z(degree);
  for (std::size_t i = 0; i < degree; ++i) {
    z[i] = std::polar(radius, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(degree) + 0.4);
  }

  auto relative_residual = [&](Complex r) {
    double denom = 0.0, pw = 1.0;
    for (const Complex& c : coeffs) {
      denom += std::abs(c) * pw;
      pw *= std::abs(r);
    }
    return std::abs(horner(coeffs, r)) / denom;
  };

  for (int iter = 0; iter < 1000; ++iter) {
    double worst = 0.0;
    for (std::size_t i = 0; i < degree; ++i) {
      const Complex p = horner(coeffs, z[i]);
      if (p == Complex(0.0)) continue;
      const Complex ratio = p / horner(dcoeffs, z[i]);
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < degree; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      worst = std::max(worst, std::abs(step) / std::max(std::abs(z[i]), 1e-300));
    }
    if (worst < 1e-15) break;
  }
  for (auto& r : z) {
    for (int polish = 0; polish < 2; ++polish) {
      const Complex d = horner(dcoeffs, r);
      if (d == Complex(0.0)) break;
      r -= horner(coeffs, r) / d;
    }
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) || relative_residual(r) > 1e-12) {
      throw Error(ErrorCode::RootFindingDiverged, "Aberth iteration did not converge");
    }
  }
  std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  return z;
}

std::vector<Complex> find_zeros(const GkzSystem& sys, const EvaluationPoint& x, std::size_t k) {
  require_curve(sys, x);
  if (k >= sys.r()) throw Error(ErrorCode::ShapeError, "block index out of range");
  return polynomial_roots(make_block(sys, x, k, Chart::Direct).poly);
}

void check_evaluation_point(const GkzSystem& sys, const EvaluationPoint& x) {
  const ChartData chart = make_chart(sys, x, Chart::Direct);
  const auto& z = chart.zeros;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (std::abs(z[i] - z[j]) < 1e-6 * std::max(std::abs(z[i]), std::abs(z[j]))) {
        throw Error(ErrorCode::NonGenericPoint, "two zeros of the sections nearly coincide");
      }
    }
  }
}

std::vector<CircleCandidate> admissible_circles(const GkzSystem& sys, const EvaluationPoint& x,
                                                std::size_t nodes) {
  const ChartData chart = make_chart(sys, x, Chart::Direct);
  std::vector<double> moduli;
  for (const Complex& z : chart.zeros) moduli.push_back(std::abs(z));
  std::sort(moduli.begin(), moduli.end());

  std::vector<double> radii;
  if (moduli.empty()) {
    radii.push_back(1.0);
  } else {
    radii.push_back(moduli.front() / 2.0);
    for (std::size_t i = 0; i + 1 < moduli.size(); ++i) {
      if (moduli[i + 1] > moduli[i] * (1.0 + 2.0 * kMinMargin)) {
        radii.push_back(std::sqrt(moduli[i] * moduli[i + 1]));
      }
    }
    radii.push_back(moduli.back() * 2.0);
  }
  std::vector<CircleCandidate> out;
  for (double r : radii) {
    CircleCandidate c;
    c.cycle.radius = r;
    c.cycle.nodes = nodes;
    const Enclosure enc = enclosure(c.cycle, chart);
    c.enclosed_exponent = enc.exponent;
    c.closed = enc.closed;
    out.push_back(c);
  }
  return out;
}

PeriodValue twisted_period(const GkzSystem& sys, const EvaluationPoint& x, const CycleSpec& cycle) {
  const PreparedCycle p = prepare(sys, x, cycle);
  PeriodValue v;
  v.value = integrate(p.samples, derivative_factor(sys, p.chart, std::vector<int>(sys.m(), 0))).value;
  v.enclosed_exponent = p.enc.exponent;
  v.closed = p.enc.closed;
  v.nodes_used = p.samples.nodes;
  return v;
}

Complex derivative_period(const GkzSystem& sys, const EvaluationPoint& x, const CycleSpec& cycle,
                          const std::vector<int>& alpha) {
  const PreparedCycle p = prepare(sys, x, cycle);
  return integrate(p.samples, derivative_factor(sys, p.chart, alpha)).value;
}

std::vector<double> euler_residual(const GkzSystem& sys, const EvaluationPoint& x,
                                   const CycleSpec& cycle) {
  const PreparedCycle p = prepare(sys, x, cycle);
  if (!p.enc.closed) {
    throw Error(ErrorCode::CycleNotClosed,
                "enclosed exponent " + to_string(p.enc.exponent) + " is not an integer");
  }
  const std::size_t m = sys.m();
  const Complex phi =
      integrate(p.samples, derivative_factor(sys, p.chart, std::vector<int>(m, 0))).value;
  std::vector<Complex> first(m);
  std::vector<Complex> xs(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<int> alpha(m, 0);
    alpha[j] = 1;
    first[j] = integrate(p.samples, derivative_factor(sys, p.chart, alpha)).value;
    const std::size_t k = sys.block_of(j);
    xs[j] = x.x[k][j - sys.block_offset(k)];
  }
  const RatVector beta = sys.beta();
  std::vector<double> out;
  for (std::size_t i = 0; i < sys.matrix().rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      acc += static_cast<double>(sys.matrix()(i, j)) * xs[j] * first[j];
    acc -= static_cast<double>(beta[i]) * phi;
    out.push_back(std::abs(acc));
  }
  return out;
}

std::vector<CycleSpec> cycle_inventory(const GkzSystem& sys, const EvaluationPoint& x,
                                       std::size_t nodes) {
  std::vector<CycleSpec> cycles;
  for (const auto& c : admissible_circles(sys, x, nodes))
    if (c.closed) cycles.push_back(c.cycle);

  const ChartData direct = make_chart(sys, x, Chart::Direct);
  // Regularizable punctures: every zero, and the origin when its exponent is
  // not an integer. Each is joined to its nearest neighbours by segments
  // that keep clear of the remaining punctures.
  std::vector<Complex> ends = direct.zeros;
  if (!is_integral(direct.origin_exponent)) ends.push_back(Complex(0.0));
  const std::vector<Complex> all = obstacles(direct);
  auto clearance = [&](Complex p) {
    double d = std::numeric_limits<double>::infinity();
    for (const Complex& o : all)
      if (std::abs(o - p) > 1e-9 * std::max(1.0, std::abs(p))) d = std::min(d, std::abs(o - p));
    return d;
  };
  constexpr std::size_t kNeighbours = 3;
  constexpr double kEndFraction = 0.3;
  constexpr double kPathClearance = 0.15;
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < ends.size(); ++j)
      if (j != i) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(ends[a] - ends[i]) < std::abs(ends[b] - ends[i]);
    });
    std::size_t taken = 0;
    for (std::size_t j : order) {
      if (taken == kNeighbours) break;
      const Complex p = ends[i], q = ends[j];
      bool clear = true;
      for (const Complex& o : all) {
        if (std::abs(o - p) <= 1e-9 * std::max(1.0, std::abs(p)) ||
            std::abs(o - q) <= 1e-9 * std::max(1.0, std::abs(q)))
          continue;
        if (distance_to_segment(o, p, q) < kPathClearance * std::abs(q - p)) clear = false;
      }
      if (!clear) continue;
      ++taken;
      if (!used.insert({std::min(i, j), std::max(i, j)}).second) continue;
      cycles.push_back(regularized_segment(p, q, kEndFraction * clearance(p), kEndFraction * clearance(q),
                                           Chart::Direct, nodes));
    }
  }

  constexpr double kLoopMargin = 0.08;
  for (Chart chart_kind : {Chart::Direct, Chart::Inverted}) {
    const ChartData chart = chart_kind == Chart::Direct ? direct : make_chart(sys, x, chart_kind);
    if (!is_integral(chart.origin_exponent) || chart.origin_exponent < 1) continue;
    for (const Complex& z : chart.zeros) {
      for (double scale : {0.6, 0.8, 1.0, 1.4, 2.0}) {
        for (double turn : {0.0, 0.6, -0.6}) {
          const Complex center = scale * z * std::polar(1.0, turn);
          const double radius = std::abs(center);
          bool clear = true;
          for (const Complex& p : chart.zeros)
            if (std::abs(std::abs(p - center) - radius) < kLoopMargin * radius) clear = false;
          if (clear) cycles.push_back(origin_loop(center, chart_kind, nodes));
        }
      }
    }
  }
  return cycles;
}

std::vector<std::vector<int>> multi_indices(std::size_t m, int max_order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m, 0);
  for (int degree = 0; degree <= max_order; ++degree) {
    // Descending lexicographic compositions of `degree` into m parts.
    std::vector<std::vector<int>> level;
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos + 1 == m) {
        cur[pos] = left;
        level.push_back(cur);
        return;
      }
      for (int e = left; e >= 0; --e) {
        cur[pos] = e;
        self(self, pos + 1, left - e);
      }
      cur[pos] = 0;
    };
    if (m > 0) rec(rec, 0, degree);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::size_t period_matrix_rank(const GkzSystem& sys, const EvaluationPoint& x,
                               const std::vector<CycleSpec>& cycles, int max_order, double tol) {
  if (cycles.empty()) throw Error(ErrorCode::InsufficientCycles, "no cycles supplied");
  const auto alphas = multi_indices(sys.m(), max_order);
  const std::size_t rows = cycles.size();
  const std::size_t cols = alphas.size();
  std::vector<Complex> mat(rows * cols);
  std::vector<double> mass(rows * cols);
  for (std::size_t c = 0; c < rows; ++c) {
    const PreparedCycle p = prepare(sys, x, cycles[c]);
    if (!p.enc.closed) {
      throw Error(ErrorCode::CycleNotClosed, "cycle " + std::to_string(c) +
                                                 " has non-integral exponent " +
                                                 to_string(p.enc.exponent));
    }
    for (std::size_t a = 0; a < cols; ++a) {
      const Quadrature q = integrate(p.samples, derivative_factor(sys, p.chart, alphas[a]));
      mat[c * cols + a] = q.value;
      mass[c * cols + a] = q.mass;
    }
  }
  // Equilibrate by quadrature mass rather than by value, so that rows whose
  // periods cancel to rounding noise stay negligible.
  for (std::size_t c = 0; c < rows; ++c) {
    double row_scale = 0.0;
    for (std::size_t a = 0; a < cols; ++a) row_scale = std::max(row_scale, mass[c * cols + a]);
    if (row_scale == 0.0) continue;
    for (std::size_t a = 0; a < cols; ++a) {
      mat[c * cols + a] /= row_scale;
      mass[c * cols + a] /= row_scale;
    }
  }
  for (std::size_t a = 0; a < cols; ++a) {
    double col_scale = 0.0;
    for (std::size_t c = 0; c < rows; ++c) col_scale = std::max(col_scale, mass[c * cols + a]);
    if (col_scale == 0.0) continue;
    for (std::size_t c = 0; c < rows; ++c) mat[c * cols + a] /= col_scale;
  }

  // Complete pivoting.
  double largest = 0.0;
  for (const Complex& v : mat) largest = std::max(largest, std::abs(v));
  if (largest == 0.0) return 0;
  std::vector<std::size_t> row_left(rows), col_left(cols);
  for (std::size_t i = 0; i < rows; ++i) row_left[i] = i;
  for (std::size_t j = 0; j < cols; ++j) col_left[j] = j;
  std::size_t rank = 0;
  while (!row_left.empty() && !col_left.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t ii = 0; ii < row_left.size(); ++ii)
      for (std::size_t jj = 0; jj < col_left.size(); ++jj) {
        const double v = std::abs(mat[row_left[ii] * cols + col_left[jj]]);
        if (v > best) {
          best = v;
          bi = ii;
          bj = jj;
        }
      }
    if (!(best > tol * largest)) break;
    const std::size_t pr = row_left[bi], pc = col_left[bj];
    const Complex pivot = mat[pr * cols + pc];
    for (std::size_t ii = 0; ii < row_left.size(); ++ii) {
      const std::size_t r = row_left[ii];
      if (r == pr) continue;
      const Complex f = mat[r * cols + pc] / pivot;
      if (f == Complex(0.0)) continue;
      for (std::size_t jj = 0; jj < col_left.size(); ++jj) {
        const std::size_t cc = col_left[jj];
        mat[r * cols + cc] -= f * mat[pr * cols + cc];
      }
    }
    row_left.erase(row_left.begin() + static_cast<std::ptrdiff_t>(bi));
    col_left.erase(col_left.begin() + static_cast<std::ptrdiff_t>(bj));
    ++rank;
  }
  return rank;
}

std::size_t period_matrix_rank(const GkzSystem& sys, const EvaluationPoint& x, int max_order,
                               double tol, std::size_t nodes) {
  const auto cycles = cycle_inventory(sys, x, nodes);
  // Each admissible cycle contributes at most one independent row.
  std::size_t needed = 0;
  for (const auto& blk : sys.weight_blocks()) {
    long long lo = static_cast<long long>(blk.front()[0]), hi = lo;
    for (const auto& w : blk) {
      lo = std::min(lo, static_cast<long long>(w[0]));
      hi = std::max(hi, static_cast<long long>(w[0]));
    }
    needed += static_cast<std::size_t>(hi - lo);
  }
  if (cycles.size() < needed) {
    throw Error(ErrorCode::InsufficientCycles,
                std::to_string(cycles.size()) + " admissible cycles for a predicted rank of " +
                    std::to_string(needed));
  }
  return period_matrix_rank(sys, x, cycles, max_order, tol);
}

}  // namespace gkz
