#pragma once

// Arithmetic in the prime field Z_p for word-sized p.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "explab/errors.hpp"

namespace explab {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::int64_t d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

inline std::int64_t mod_reduce(std::int64_t a, std::int64_t p) {
  std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

inline std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

inline std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t p) {
  if (exp < 0) throw std::domain_error("mod_pow: negative exponent");
  std::int64_t result = 1 % p;
  base = mod_reduce(base, p);
  while (exp > 0) {
    if (exp & 1) result = mod_mul(result, base, p);
    base = mod_mul(base, base, p);
    exp >>= 1;
  }
  return result;
}

// Inverse of a mod p via the extended Euclidean algorithm.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  a = mod_reduce(a, p);
  if (a == 0) throw std::domain_error("mod_inverse: zero has no inverse");
  std::int64_t r0 = p, r1 = a, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t t2 = t0 - q * t1;
    r0 = r1; r1 = r2;
    t0 = t1; t1 = t2;
  }
  return mod_reduce(t0, p);
}

// A residue in Z_p, kept reduced to [0, p).
class FieldElement {
 public:
  FieldElement(std::int64_t value, std::int64_t modulus)
      : value_(mod_reduce(value, check_modulus(modulus))), p_(modulus) {}

  std::int64_t value() const { return value_; }
  std::int64_t modulus() const { return p_; }

  FieldElement operator+(const FieldElement& o) const {
    require_same(o);
    return FieldElement(value_ + o.value_, p_);
  }
  FieldElement operator-(const FieldElement& o) const {
    require_same(o);
    return FieldElement(value_ - o.value_, p_);
  }
  FieldElement operator*(const FieldElement& o) const {
    require_same(o);
    return FieldElement(mod_mul(value_, o.value_, p_), p_);
  }
  FieldElement inverse() const { return FieldElement(mod_inverse(value_, p_), p_); }
  FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

  bool operator==(const FieldElement& o) const = default;

 private:
  static std::int64_t check_modulus(std::int64_t p) {
    if (!is_prime(p)) throw std::domain_error("FieldElement: modulus " + std::to_string(p) + " is not prime");
    return p;
  }
  void require_same(const FieldElement& o) const {
    if (p_ != o.p_) throw std::domain_error("FieldElement: mixed moduli");
  }

  std::int64_t value_;
  std::int64_t p_;
};

}  // namespace explab
