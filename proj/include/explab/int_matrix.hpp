#pragma once

// Small square integer matrices (2x2 / 3x3) with modular arithmetic.
// These carry group elements of SL(2,Z) and SL(3,Z) into their reductions
// mod p; exponentiation is done mod p so large word powers never overflow.

#include <array>
#include <cstdint>
#include <stdexcept>

#include "explab/prime_field.hpp"

namespace explab {

class IntMat {
 public:
  explicit IntMat(int dim) : dim_(dim), a_{} {
    if (dim != 2 && dim != 3) throw std::domain_error("IntMat: dimension must be 2 or 3");
  }

  static IntMat identity(int dim) {
    IntMat m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
  }

  // I + s*e_{ij} with 0-based indices, i != j.
  static IntMat elementary(int dim, int i, int j, std::int64_t s) {
    if (i == j) throw std::domain_error("IntMat::elementary: i == j");
    IntMat m = identity(dim);
    m.at(i, j) = s;
    return m;
  }

  int dim() const { return dim_; }
  std::int64_t& at(int i, int j) { return a_[static_cast<std::size_t>(i * dim_ + j)]; }
  std::int64_t at(int i, int j) const { return a_[static_cast<std::size_t>(i * dim_ + j)]; }

  bool operator==(const IntMat& o) const = default;

  IntMat mod(std::int64_t p) const {
    IntMat r(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) r.at(i, j) = mod_reduce(at(i, j), p);
    return r;
  }

  IntMat mul_mod(const IntMat& o, std::int64_t p) const {
    if (dim_ != o.dim_) throw std::domain_error("IntMat: dimension mismatch");
    IntMat r(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        std::int64_t s = 0;
        for (int k = 0; k < dim_; ++k) s = mod_reduce(s + mod_mul(at(i, k), o.at(k, j), p), p);
        r.at(i, j) = s;
      }
    return r;
  }

  std::int64_t det_mod(std::int64_t p) const {
    if (dim_ == 2) {
      return mod_reduce(mod_mul(at(0, 0), at(1, 1), p) - mod_mul(at(0, 1), at(1, 0), p), p);
    }
    std::int64_t d = 0;
    d += mod_mul(at(0, 0), mod_reduce(mod_mul(at(1, 1), at(2, 2), p) - mod_mul(at(1, 2), at(2, 1), p), p), p);
    d -= mod_mul(at(0, 1), mod_reduce(mod_mul(at(1, 0), at(2, 2), p) - mod_mul(at(1, 2), at(2, 0), p), p), p);
    d += mod_mul(at(0, 2), mod_reduce(mod_mul(at(1, 0), at(2, 1), p) - mod_mul(at(1, 1), at(2, 0), p), p), p);
    return mod_reduce(d, p);
  }

  // Inverse mod p by the adjugate; requires det = 1 mod p.
  IntMat inverse_mod(std::int64_t p) const {
    if (det_mod(p) != 1 % p) throw std::domain_error("IntMat::inverse_mod: determinant is not 1 mod p");
    IntMat r(dim_);
    if (dim_ == 2) {
      r.at(0, 0) = mod_reduce(at(1, 1), p);
      r.at(0, 1) = mod_reduce(-at(0, 1), p);
      r.at(1, 0) = mod_reduce(-at(1, 0), p);
      r.at(1, 1) = mod_reduce(at(0, 0), p);
      return r;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
        const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        // cofactor expansion written cyclically so no sign bookkeeping is needed
        std::int64_t c = mod_reduce(mod_mul(at(i1, j1), at(i2, j2), p) - mod_mul(at(i1, j2), at(i2, j1), p), p);
        r.at(j, i) = c;
      }
    return r;
  }

  // this^e mod p; negative exponents go through the inverse.
  IntMat pow_mod(std::int64_t e, std::int64_t p) const {
    IntMat base = e < 0 ? inverse_mod(p) : mod(p);
    if (e < 0) e = -e;
    IntMat r = identity(dim_).mod(p);
    while (e > 0) {
      if (e & 1) r = r.mul_mod(base, p);
      base = base.mul_mod(base, p);
      e >>= 1;
    }
    return r;
  }

 private:
  int dim_;
  std::array<std::int64_t, 9> a_;
};

}  // namespace explab
