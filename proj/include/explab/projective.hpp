#pragma once

// Canonical enumeration of the projective spaces P^1(F_p) and P^2(F_p).
//
// A point is stored as the unique homogeneous representative whose last
// nonzero coordinate is 1, so over P^1 the class of (t 1)^T reads off as t
// and (1 0)^T is the point at infinity.  Points are ordered
// lexicographically on their coordinate tuples, which fixes one matrix
// layout for everything built on top.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "explab/errors.hpp"
#include "explab/int_matrix.hpp"
#include "explab/prime_field.hpp"

namespace explab {

inline constexpr std::int64_t kMaxGeometryPrime = 10000;
inline constexpr std::int64_t kMaxSpacePoints = 5'000'000;

class ProjectivePoint {
 public:
  ProjectivePoint(std::array<std::int64_t, 3> coords, int ncoords, std::int64_t p)
      : c_(coords), ncoords_(ncoords), p_(p) {}

  int ncoords() const { return ncoords_; }
  int dim() const { return ncoords_ - 1; }
  std::int64_t modulus() const { return p_; }
  std::int64_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  // integer encoding compatible with lexicographic order on the tuple
  std::uint64_t code() const {
    std::uint64_t c = 0;
    for (int i = 0; i < ncoords_; ++i) c = c * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(c_[static_cast<std::size_t>(i)]);
    return c;
  }

  bool operator==(const ProjectivePoint& o) const {
    return p_ == o.p_ && ncoords_ == o.ncoords_ && c_ == o.c_;
  }
  bool operator<(const ProjectivePoint& o) const { return code() < o.code(); }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < ncoords_; ++i) {
      if (i) s += ",";
      s += std::to_string(c_[static_cast<std::size_t>(i)]);
    }
    return s + ")";
  }

 private:
  std::array<std::int64_t, 3> c_;
  int ncoords_;
  std::int64_t p_;
};

// Scale a nonzero homogeneous tuple so its last nonzero coordinate is 1.
inline ProjectivePoint canonicalize(std::span<const std::int64_t> v, std::int64_t p) {
  if (v.size() != 2 && v.size() != 3) throw std::domain_error("canonicalize: need 2 or 3 coordinates");
  if (!is_prime(p)) throw std::domain_error("canonicalize: modulus is not prime");
  std::array<std::int64_t, 3> c{};
  int last_nonzero = -1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    c[i] = mod_reduce(v[i], p);
    if (c[i] != 0) last_nonzero = static_cast<int>(i);
  }
  if (last_nonzero < 0) throw std::domain_error("canonicalize: zero vector has no projective class");
  const std::int64_t inv = mod_inverse(c[static_cast<std::size_t>(last_nonzero)], p);
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = mod_mul(c[i], inv, p);
  return ProjectivePoint(c, static_cast<int>(v.size()), p);
}

class ProjectiveSpace {
 public:
  // All points of P^dim(F_p), dim = 1 or 2, in lexicographic order.
  static ProjectiveSpace enumerate(std::int64_t p, int dim) {
    if (!is_prime(p)) throw std::domain_error("ProjectiveSpace: p = " + std::to_string(p) + " is not prime");
    if (dim != 1 && dim != 2) throw std::domain_error("ProjectiveSpace: dim must be 1 or 2");
    if (p > kMaxGeometryPrime) throw resource_error("ProjectiveSpace: prime exceeds geometry cap");
    const std::int64_t expected = dim == 1 ? p + 1 : p * p + p + 1;
    if (expected > kMaxSpacePoints) throw resource_error("ProjectiveSpace: too many points");

    ProjectiveSpace sp;
    sp.p_ = p;
    sp.dim_ = dim;
    sp.points_.reserve(static_cast<std::size_t>(expected));
    if (dim == 1) {
      for (std::int64_t a = 0; a < p; ++a) sp.points_.push_back(ProjectivePoint({a, 1, 0}, 2, p));
      sp.points_.push_back(ProjectivePoint({1, 0, 0}, 2, p));
    } else {
      for (std::int64_t a = 0; a < p; ++a)
        for (std::int64_t b = 0; b < p; ++b) sp.points_.push_back(ProjectivePoint({a, b, 1}, 3, p));
      for (std::int64_t a = 0; a < p; ++a) sp.points_.push_back(ProjectivePoint({a, 1, 0}, 3, p));
      sp.points_.push_back(ProjectivePoint({1, 0, 0}, 3, p));
    }
    std::sort(sp.points_.begin(), sp.points_.end());
    if (static_cast<std::int64_t>(sp.points_.size()) != expected)
      throw consistency_error("ProjectiveSpace: point count does not match the closed form");
    sp.codes_.reserve(sp.points_.size());
    for (const auto& pt : sp.points_) sp.codes_.push_back(pt.code());
    return sp;
  }

  std::int64_t p() const { return p_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.size()); }
  const ProjectivePoint& point(int i) const { return points_[static_cast<std::size_t>(i)]; }

  int index_of(const ProjectivePoint& pt) const {
    const auto it = std::lower_bound(codes_.begin(), codes_.end(), pt.code());
    if (it == codes_.end() || *it != pt.code()) throw std::domain_error("ProjectiveSpace: point not in space");
    return static_cast<int>(it - codes_.begin());
  }

  // index of the class of (t 1)^T; index_infinity() gives the class of (1 0)^T
  int index_of_affine(std::int64_t t) const {
    if (dim_ != 1) throw std::domain_error("index_of_affine: P^1 only");
    return index_of(ProjectivePoint({mod_reduce(t, p_), 1, 0}, 2, p_));
  }
  int index_infinity() const {
    if (dim_ != 1) throw std::domain_error("index_infinity: P^1 only");
    return index_of(ProjectivePoint({1, 0, 0}, 2, p_));
  }

 private:
  ProjectiveSpace() = default;
  std::int64_t p_ = 0;
  int dim_ = 0;
  std::vector<ProjectivePoint> points_;
  std::vector<std::uint64_t> codes_;
};

// Image of a point under a determinant-1 integer matrix, reduced mod p.
inline ProjectivePoint apply_matrix(const IntMat& m, const ProjectivePoint& pt) {
  const std::int64_t p = pt.modulus();
  if (m.dim() != pt.ncoords()) throw std::domain_error("apply_matrix: dimension mismatch");
  if (m.det_mod(p) != 1 % p) throw std::domain_error("apply_matrix: determinant is not 1 mod p");
  std::array<std::int64_t, 3> w{};
  for (int i = 0; i < m.dim(); ++i) {
    std::int64_t s = 0;
    for (int j = 0; j < m.dim(); ++j) s = mod_reduce(s + mod_mul(mod_reduce(m.at(i, j), p), pt[j], p), p);
    w[static_cast<std::size_t>(i)] = s;
  }
  return canonicalize(std::span<const std::int64_t>(w.data(), static_cast<std::size_t>(m.dim())), p);
}

}  // namespace explab
