#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "contactsym/rational.hpp"

namespace contactsym {

using Vector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& row : init) {
      if (row.size() != cols_) throw StructuralError("ragged matrix initializer");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vector row(std::size_t i) const { return Vector(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw StructuralError("matrix product shape mismatch");
    Matrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  friend Vector operator*(const Matrix& x, const Vector& v) {
    if (x.cols_ != v.size()) throw StructuralError("matrix-vector shape mismatch");
    Vector r(x.rows_, Rational(0));
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < x.cols_; ++j)
        if (!x(i, j).is_zero()) r[i] += x(i, j) * v[j];
    return r;
  }
  friend Matrix operator+(Matrix x, const Matrix& y) {
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
    return x;
  }
  friend Matrix operator-(Matrix x, const Matrix& y) {
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }
  friend Matrix operator*(const Rational& s, Matrix x) {
    for (auto& v : x.a_) v *= s;
    return x;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& r) { return r.is_zero(); });
  }
  Rational trace() const {
    Rational t(0);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

/// Incremental fraction-free row echelon form over the integers. Rows are
/// scaled to primitive integer vectors; a new row is reduced against existing
/// pivots on its leading entry (r <- p_c r - r_c p) until it either vanishes
/// or opens a new pivot column. Pivoting takes the first nonzero entry.
class EchelonBuilder {
 public:
  explicit EchelonBuilder(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const noexcept { return cols_; }
  std::size_t rank() const noexcept { return rows_.size(); }

  /// Returns true when the row increased the rank.
  bool add_row(const SparseRow& row) {
    IntRow r = to_primitive(row);
    while (!r.empty()) {
      const std::size_t lead = r.front().first;
      auto it = pivot_of_.find(lead);
      if (it == pivot_of_.end()) {
        if (r.front().second < 0)
          for (auto& e : r) e.second = -e.second;
        pivot_of_.emplace(lead, rows_.size());
        rows_.push_back(std::move(r));
        return true;
      }
      r = eliminate(r, rows_[it->second]);
    }
    return false;
  }

  bool add_dense_row(const Vector& row) {
    SparseRow s;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!row[j].is_zero()) s.emplace_back(j, row[j]);
    return add_row(s);
  }

  /// Basis of the right kernel: one vector per free column, with a 1 in that
  /// column and 0 in the other free columns (the reduced-echelon kernel basis,
  /// which depends only on the row space and the column order).
  std::vector<Vector> kernel() const {
    std::vector<std::size_t> order;  // pivot rows by descending leading column
    order.reserve(rows_.size());
    for (auto it = pivot_of_.rbegin(); it != pivot_of_.rend(); ++it) order.push_back(it->second);
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (pivot_of_.count(f)) continue;
      Vector x(cols_, Rational(0));
      x[f] = Rational(1);
      for (std::size_t ri : order) {
        const IntRow& r = rows_[ri];
        mpq_class s = 0;
        for (std::size_t k = 1; k < r.size(); ++k)
          if (sgn(x[r[k].first].value()) != 0) s += x[r[k].first].value() * r[k].second;
        if (sgn(s) != 0) x[r.front().first] = Rational(mpq_class(-s / r.front().second));
      }
      basis.push_back(std::move(x));
    }
    return basis;
  }

  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (const auto& [c, r] : pivot_of_) out.push_back(c);
    return out;
  }

 private:
  using IntRow = std::vector<std::pair<std::size_t, mpz_class>>;

  static IntRow to_primitive(const SparseRow& row) {
    std::vector<std::pair<std::size_t, Rational>> sorted;
    for (const auto& e : row)
      if (!e.second.is_zero()) sorted.push_back(e);
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    // merge duplicate columns
    std::vector<std::pair<std::size_t, Rational>> merged;
    for (auto& e : sorted) {
      if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
      else merged.push_back(e);
    }
    mpz_class l = 1;
    for (const auto& e : merged) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.den().get_mpz_t());
    IntRow r;
    for (const auto& e : merged) {
      if (e.second.is_zero()) continue;
      mpz_class v = e.second.num() * (l / e.second.den());
      r.emplace_back(e.first, v);
    }
    make_primitive(r);
    return r;
  }

  static void make_primitive(IntRow& r) {
    if (r.empty()) return;
    mpz_class g = 0;
    for (const auto& e : r) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
      if (g == 1) return;
    }
    if (g > 1)
      for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
  }

  static IntRow eliminate(const IntRow& r, const IntRow& p) {
    const mpz_class a = p.front().second;  // pivot entry
    const mpz_class b = r.front().second;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const mpz_class fa = a / g, fb = b / g;
    IntRow out;
    out.reserve(r.size() + p.size());
    std::size_t i = 1, j = 1;
    while (i < r.size() || j < p.size()) {
      if (j >= p.size() || (i < r.size() && r[i].first < p[j].first)) {
        out.emplace_back(r[i].first, fa * r[i].second);
        ++i;
      } else if (i >= r.size() || p[j].first < r[i].first) {
        out.emplace_back(p[j].first, -fb * p[j].second);
        ++j;
      } else {
        mpz_class v = fa * r[i].second - fb * p[j].second;
        if (v != 0) out.emplace_back(r[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    make_primitive(out);
    return out;
  }

  std::size_t cols_;
  std::vector<IntRow> rows_;
  std::map<std::size_t, std::size_t> pivot_of_;
};

/// Exact basis of the right nullspace {v : M v = 0}.
inline std::vector<Vector> exact_nullspace(const Matrix& m) {
  EchelonBuilder eb(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) eb.add_dense_row(m.row(i));
  return eb.kernel();
}

inline std::size_t matrix_rank(const Matrix& m) {
  EchelonBuilder eb(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) eb.add_dense_row(m.row(i));
  return eb.rank();
}

/// Rank of a family of vectors (all of equal length).
inline std::size_t vectors_rank(const std::vector<Vector>& vs, std::size_t len) {
  EchelonBuilder eb(len);
  for (const auto& v : vs) eb.add_dense_row(v);
  return eb.rank();
}

/// A particular solution x of A x = b, or nullopt when the system is
/// inconsistent. Free variables are set to zero.
inline std::optional<Vector> solve_linear(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw StructuralError("right-hand side length mismatch");
  const std::size_t n = a.cols();
  EchelonBuilder eb(n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Vector r = a.row(i);
    r.push_back(-b[i]);
    eb.add_dense_row(r);
  }
  // consistent iff the augmented column is free; its kernel vector is the solution
  for (auto& v : eb.kernel()) {
    if (v[n] == Rational(1)) {
      v.pop_back();
      return v;
    }
  }
  return std::nullopt;
}

/// Coefficients (c_0, ..., c_{n-1}, 1) of the characteristic polynomial
/// det(x I - M), via the Faddeev-LeVerrier recursion.
inline std::vector<Rational> characteristic_polynomial(const Matrix& m) {
  if (m.rows() != m.cols()) throw StructuralError("characteristic polynomial of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = Rational(1);
  Matrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = next;
    Matrix am = m * mk;
    c[n - k] = -am.trace() / Rational(static_cast<long>(k));
  }
  return c;
}

/// Divides a polynomial (coefficients low to high) by (x - root); returns the
/// quotient when the division is exact.
inline std::optional<std::vector<Rational>> divide_by_root(const std::vector<Rational>& p,
                                                           const Rational& root) {
  if (p.size() < 2) return std::nullopt;
  std::vector<Rational> q(p.size() - 1, Rational(0));
  Rational carry(0);
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    carry = p[i + 1] + carry * root;
    q[i] = carry;
  }
  // remainder = p[0] + q[0] * root
  if (!(p[0] + q[0] * root).is_zero()) return std::nullopt;
  return q;
}

}  // namespace contactsym
