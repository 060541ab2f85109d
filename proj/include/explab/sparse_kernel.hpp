#pragma once

// Exact nullspace computation for sparse rational systems by row-echelon
// elimination.  The systems solved here (fixed vectors, commutants,
// eigenspaces of permutation matrices) have rows with very few nonzeros,
// and differences of unit vectors stay 2-sparse during elimination, so a
// map-based echelon form is efficient enough for every case in this repo.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "explab/rational.hpp"

namespace explab {

using SparseRowQ = std::map<std::int32_t, Rational>;

class SparseSystemQ {
 public:
  explicit SparseSystemQ(int ncols) : ncols_(ncols) {}

  int ncols() const { return ncols_; }
  const std::vector<SparseRowQ>& rows() const { return rows_; }

  void add_row(std::initializer_list<std::pair<std::int32_t, Rational>> entries) {
    add_row(std::vector<std::pair<std::int32_t, Rational>>(entries));
  }

  void add_row(const std::vector<std::pair<std::int32_t, Rational>>& entries) {
    SparseRowQ row;
    for (const auto& [col, val] : entries) {
      if (col < 0 || col >= ncols_) throw std::domain_error("SparseSystemQ: column out of range");
      if (val != 0) {
        auto [it, inserted] = row.emplace(col, val);
        if (!inserted) {
          it->second += val;
          if (it->second == 0) row.erase(it);
        }
      }
    }
    if (!row.empty()) rows_.push_back(std::move(row));
  }

 private:
  int ncols_;
  std::vector<SparseRowQ> rows_;
};

struct KernelResult {
  int rank = 0;
  int nullity = 0;
  std::vector<std::vector<Rational>> basis;  // each of length ncols
};

// Kernel of the system (rows as linear functionals); basis computation is
// optional because commutant dimensions only need the nullity.
inline KernelResult rational_kernel(const SparseSystemQ& sys, bool want_basis = true) {
  // pivot column -> reduced row with leading coefficient 1
  std::map<std::int32_t, SparseRowQ> pivots;

  for (const SparseRowQ& original : sys.rows()) {
    SparseRowQ cur = original;
    while (!cur.empty()) {
      const std::int32_t lead = cur.begin()->first;
      const auto pit = pivots.find(lead);
      if (pit == pivots.end()) {
        const Rational inv = Rational(1) / cur.begin()->second;
        for (auto& [c, v] : cur) v *= inv;
        pivots.emplace(lead, std::move(cur));
        break;
      }
      const Rational factor = cur.begin()->second;
      for (const auto& [c, v] : pit->second) {
        auto [it, inserted] = cur.emplace(c, -factor * v);
        if (!inserted) {
          it->second -= factor * v;
          if (it->second == 0) cur.erase(it);
        }
      }
      cur.erase(lead);  // guaranteed cancelled
    }
  }

  KernelResult result;
  result.rank = static_cast<int>(pivots.size());
  result.nullity = sys.ncols() - result.rank;
  if (!want_basis || result.nullity == 0) return result;

  // back-substitute to reduced row echelon form (descending pivot order so
  // every referenced row is already fully reduced)
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    SparseRowQ& row = it->second;
    std::vector<std::pair<std::int32_t, Rational>> updates;
    for (const auto& [c, v] : row) {
      if (c != it->first && pivots.count(c)) updates.emplace_back(c, v);
    }
    for (const auto& [c, factor] : updates) {
      const SparseRowQ& other = pivots.at(c);
      for (const auto& [oc, ov] : other) {
        auto [jt, inserted] = row.emplace(oc, -factor * ov);
        if (!inserted) {
          jt->second -= factor * ov;
          if (jt->second == 0) row.erase(jt);
        }
      }
    }
  }

  // one basis vector per free column
  for (std::int32_t f = 0; f < sys.ncols(); ++f) {
    if (pivots.count(f)) continue;
    std::vector<Rational> v(static_cast<std::size_t>(sys.ncols()), Rational(0));
    v[static_cast<std::size_t>(f)] = 1;
    for (const auto& [lead, row] : pivots) {
      const auto it = row.find(f);
      if (it != row.end()) v[static_cast<std::size_t>(lead)] = -it->second;
    }
    result.basis.push_back(std::move(v));
  }
  return result;
}

// Exact Gram-Schmidt orthogonalization (no normalization, so everything
// stays rational).
inline std::vector<std::vector<Rational>> orthogonalize(std::vector<std::vector<Rational>> vecs) {
  const auto dot = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  std::vector<std::vector<Rational>> out;
  std::vector<Rational> norms2;
  for (auto& v : vecs) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      const Rational coef = dot(v, out[j]) / norms2[j];
      if (coef == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coef * out[j][i];
    }
    const Rational n2 = dot(v, v);
    if (n2 == 0) continue;  // dependent input vector
    norms2.push_back(n2);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace explab
