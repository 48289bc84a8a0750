#pragma once

#include "gkz/arith.hpp"
#include "gkz/linalg.hpp"

#include <cstddef>
#include <vector>

namespace gkz {

struct PointConfiguration {
  std::vector<IntVector> points;
};

/// Points re-expressed in a basis of the affine lattice they span.
struct AffineReduction {
  std::size_t dim = 0;            // affine dimension
  std::vector<IntVector> points;  // in Z^dim, first point at the origin
  IntVector origin;               // the first input point
  IntMatrix basis;                // ambient x dim; columns generate the lattice
};

AffineReduction affine_reduce(const PointConfiguration& config);

struct Triangulation {
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<Integer> volumes;
};

// Placing triangulation in input order. Points must span Z^d affinely, where
// d is their length; throws DegenerateConfiguration otherwise.
Triangulation placing_triangulation(const std::vector<IntVector>& points);

// Lattice volume of conv(points) in the affine lattice the points generate,
// unit simplex = 1.
Integer normalized_volume(const PointConfiguration& config);

}  // namespace gkz
