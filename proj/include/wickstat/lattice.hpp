#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace wickstat {

// Unused trailing coordinates are zero.
using Point = std::array<int, 3>;

inline int norm2(const Point& l) { return l[0] * l[0] + l[1] * l[1] + l[2] * l[2]; }

// <l> = (|l|^2 + 1)^{1/2}
double bracket(const Point& l);
double multiplier_weight(const Point& l, double alpha);

// Integer points of the closed Euclidean ball of radius N in Z^d, in
// lexicographic order. Lexicographic order on a centrally symmetric set is
// reversed by l -> -l, so the mirror of index i is size()-1-i.
class Lattice {
public:
  Lattice(int d, int N);

  int dim() const { return d_; }
  int cutoff() const { return N_; }
  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  int norm2_at(std::size_t i) const { return norm2_[i]; }
  std::size_t zero_index() const { return (points_.size() - 1) / 2; }
  std::size_t mirror(std::size_t i) const { return points_.size() - 1 - i; }

  // Label of the point that does not depend on N (zigzag coordinates folded
  // by Cantor pairing), so random draws keyed by it are shared between
  // cutoffs. Throws when it does not fit in 32 bits.
  std::uint32_t mode_key(std::size_t i) const;

  // -1 when l is not in the ball.
  std::ptrdiff_t find(const Point& l) const;
  bool contains(const Point& l) const { return find(l) >= 0; }

private:
  int d_;
  int N_;
  std::vector<Point> points_;
  std::vector<int> norm2_;
  std::vector<int> cube_;  // (2N+1)^d table of indices, -1 outside the ball
};

using LatticePtr = std::shared_ptr<const Lattice>;

// Shared, cached instance.
LatticePtr make_lattice(int d, int N);

}  // namespace wickstat
