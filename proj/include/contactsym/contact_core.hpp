#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "contactsym/diff_op.hpp"
#include "contactsym/linalg.hpp"
#include "contactsym/poly.hpp"

namespace contactsym {

/// Vector field on R^{2n+1}: components along d/dp_1..d/dp_n, d/dq_1..d/dq_n,
/// d/dt, each a polynomial in the base variables.
class VField {
 public:
  VField() = default;
  explicit VField(int n) : table_(n), comp_(table_.width(), Poly(table_)) {}

  const VarTable& table() const noexcept { return table_; }
  int n() const noexcept { return table_.n(); }
  std::size_t dim() const noexcept { return comp_.size(); }
  const Poly& operator[](std::size_t j) const { return comp_[j]; }
  Poly& operator[](std::size_t j) { return comp_[j]; }
  const std::vector<Poly>& components() const noexcept { return comp_; }

  bool is_zero() const {
    for (const auto& c : comp_)
      if (!c.is_zero()) return false;
    return true;
  }

  /// X(f) = sum_j X^j d_j f for f over the base table.
  Poly apply(const Poly& f) const {
    require_same_table(table_, f.table(), "vector field application");
    Poly r(table_);
    for (std::size_t j = 0; j < comp_.size(); ++j)
      if (!comp_[j].is_zero()) r += comp_[j] * f.diff(j);
    return r;
  }

  /// The field as a first-order operator over `target` (which must contain the
  /// base block of the same n).
  DiffOp as_diffop(const VarTable& target) const {
    DiffOp d(target);
    for (std::size_t j = 0; j < comp_.size(); ++j)
      d.add_term(Exponent::unit(target.var(Block::base, j)), embed(comp_[j], target));
    return d;
  }

  VField& operator+=(const VField& o) {
    require_same_table(table_, o.table_, "vector field addition");
    for (std::size_t j = 0; j < comp_.size(); ++j) comp_[j] += o.comp_[j];
    return *this;
  }
  VField& operator-=(const VField& o) {
    require_same_table(table_, o.table_, "vector field subtraction");
    for (std::size_t j = 0; j < comp_.size(); ++j) comp_[j] -= o.comp_[j];
    return *this;
  }
  VField& operator*=(const Rational& s) {
    for (auto& c : comp_) c *= s;
    return *this;
  }
  friend VField operator+(VField a, const VField& b) { return a += b; }
  friend VField operator-(VField a, const VField& b) { return a -= b; }
  friend VField operator*(const Rational& s, VField a) { return a *= s; }
  VField operator-() const { return Rational(-1) * *this; }
  friend bool operator==(const VField& a, const VField& b) {
    return a.table_ == b.table_ && a.comp_ == b.comp_;
  }
  friend bool operator!=(const VField& a, const VField& b) { return !(a == b); }

  std::string str() const {
    std::string s;
    for (std::size_t j = 0; j < comp_.size(); ++j) {
      if (comp_[j].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + comp_[j].str() + ")*d_" + table_.name(j);
    }
    return s.empty() ? "0" : s;
  }

 private:
  VarTable table_;
  std::vector<Poly> comp_;
};

/// Re-expresses a polynomial over the base table, rejecting fiber variables.
inline Poly to_base(const Poly& h) {
  const VarTable base(h.table().n());
  if (h.table() == base) return h;
  Poly r(base);
  for (const auto& [x, c] : h.terms()) {
    Exponent y;
    for (std::size_t i = 0; i < h.table().size(); ++i) {
      if (x[i] == 0) continue;
      if (h.table().block_of(i) != Block::base)
        throw DomainError("fiber variable '" + h.table().name(i) + "' where a base polynomial is required");
      y.set(i, x[i]);
    }
    r.add_term(y, c);
  }
  return r;
}

/// Spatial Euler field E_s(f) = sum_k (p_k d_{p_k} + q_k d_{q_k}) f.
inline Poly spatial_euler(const Poly& f) {
  const VarTable& t = f.table();
  Poly r(t);
  for (const auto& [x, c] : f.terms()) {
    long d = 0;
    for (std::size_t j = 0; j + 1 < t.width(); ++j) d += x[t.var(Block::base, j)];
    r.add_term(x, c * Rational(d));
  }
  return r;
}

/// X_h = sum_k (d_{p_k}h d_{q_k} - d_{q_k}h d_{p_k}) + E_s(h) d_t - d_t h E_s - 2h d_t.
inline VField contact_hamiltonian(const Poly& hamiltonian, int n) {
  if (hamiltonian.table().n() != n) throw StructuralError("hamiltonian table has a different n");
  const Poly h = to_base(hamiltonian);
  const VarTable& t = h.table();
  VField x(n);
  const Poly ht = h.diff(t.t());
  for (int k = 1; k <= n; ++k) {
    const Poly pk = Poly::variable(t, t.p(k)), qk = Poly::variable(t, t.q(k));
    x[t.p(k)] = -h.diff(t.q(k)) - ht * pk;
    x[t.q(k)] = h.diff(t.p(k)) - ht * qk;
  }
  x[t.t()] = spatial_euler(h) - Rational(2) * h;
  return x;
}

/// The Reeb field E = X_1 = -2 d_t.
inline VField reeb_field(int n) {
  VField e(n);
  e[e.table().t()] = Poly::constant(e.table(), Rational(-2));
  return e;
}

namespace detail {

inline Poly lagrange_bracket_with(const Poly& h, const Poly& g, int n, const VField& reeb) {
  const Poly hb = to_base(h), gb = to_base(g);
  return contact_hamiltonian(hb, n).apply(gb) - gb * reeb.apply(hb);
}

}  // namespace detail

/// {h, g} = X_h(g) - g E(h).
inline Poly lagrange_bracket(const Poly& h, const Poly& g, int n) {
  return detail::lagrange_bracket_with(h, g, n, reeb_field(n));
}

/// [X, Y]^i = X(Y^i) - Y(X^i).
inline VField vfield_bracket(const VField& x, const VField& y) {
  require_same_table(x.table(), y.table(), "vector field bracket");
  VField r(x.n());
  for (std::size_t i = 0; i < x.dim(); ++i) r[i] = x.apply(y[i]) - y.apply(x[i]);
  return r;
}

inline Poly divergence(const VField& x) {
  Poly r(x.table());
  for (std::size_t j = 0; j < x.dim(); ++j) r += x[j].diff(j);
  return r;
}

/// alpha(X) = 1/2 (sum_k (p_k X^{q_k} - q_k X^{p_k}) - X^t).
inline Poly contact_form_eval(const VField& x) {
  const VarTable& t = x.table();
  Poly r(t);
  for (int k = 1; k <= t.n(); ++k)
    r += Poly::variable(t, t.p(k)) * x[t.q(k)] - Poly::variable(t, t.q(k)) * x[t.p(k)];
  r -= x[t.t()];
  return Rational(1, 2) * r;
}

/// One basis element X_h of sp_{2n+2}.
struct SpGenerator {
  std::string label;  // "1", "p1", "q1", "t", "p1p2", "q1q2", "p2q1", "tp1", "tq1", "t2"
  Poly hamiltonian;
  VField field;
  int grade = 0;  // -2..2
};

/// Sparse combination of basis indices.
using SpCombination = std::vector<std::pair<std::size_t, Rational>>;

/// Labeled basis of sp_{2n+2} in the order
///   X_{p_ip_j} (i<=j), X_{tp_i}, X_{t2};  X_{q_iq_j} (i<=j), X_{q_i}, X_1;
///   X_{p_jq_i} (all i,j), X_{tq_i}, X_{p_i}, X_t
/// with its Killing-dual basis and cached structure constants.
class SpBasis {
 public:
  explicit SpBasis(int n);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return gens_.size(); }
  const std::vector<SpGenerator>& generators() const noexcept { return gens_; }
  const SpGenerator& operator[](std::size_t a) const { return gens_[a]; }
  const std::vector<SpCombination>& duals() const noexcept { return duals_; }
  const SpCombination& dual(std::size_t a) const { return duals_[a]; }

  std::size_t index(const std::string& label) const {
    auto it = by_label_.find(label);
    if (it == by_label_.end()) throw StructuralError("no sp generator labeled '" + label + "'");
    return it->second;
  }
  const SpGenerator& by_label(const std::string& label) const { return gens_[index(label)]; }

  /// Coordinates of a field in the generator basis. The candidate coefficients
  /// come from h = alpha(X); the field is then rebuilt and compared exactly.
  Vector coordinates(const VField& x) const {
    require_same_table(x.table(), table_, "sp coordinates");
    const Poly h = contact_form_eval(x);
    Vector c(size(), Rational(0));
    for (const auto& [m, v] : h.terms()) {
      auto it = by_monomial_.find(m);
      if (it == by_monomial_.end()) throw StructuralError("vector field outside sp_{2n+2}");
      c[it->second] = v / gens_[it->second].hamiltonian.coeff(m);
    }
    VField rebuilt(n_);
    for (std::size_t a = 0; a < size(); ++a)
      if (!c[a].is_zero()) rebuilt += c[a] * gens_[a].field;
    if (rebuilt != x) throw StructuralError("vector field outside sp_{2n+2}");
    return c;
  }

  /// Structure constants: [e_a, e_b] = sum_c f(a,b)[c] e_c.
  const Vector& structure(std::size_t a, std::size_t b) const { return structure_[a * size() + b]; }

  /// Gram matrix K(e_a, e_b) = tr(ad e_a o ad e_b) of the Killing form.
  const Matrix& killing_matrix() const noexcept { return killing_; }

  /// Matrix of ad(x) for x given in basis coordinates.
  Matrix ad(const Vector& x) const {
    Matrix m(size(), size());
    for (std::size_t a = 0; a < size(); ++a) {
      if (x[a].is_zero()) continue;
      for (std::size_t b = 0; b < size(); ++b) {
        const Vector& f = structure(a, b);
        for (std::size_t c = 0; c < size(); ++c)
          if (!f[c].is_zero()) m(c, b) += x[a] * f[c];
      }
    }
    return m;
  }

  Vector unit(std::size_t a) const {
    Vector v(size(), Rational(0));
    v[a] = Rational(1);
    return v;
  }
  Vector dual_vector(std::size_t a) const {
    Vector v(size(), Rational(0));
    for (const auto& [i, c] : duals_[a]) v[i] += c;
    return v;
  }

  VField field_of(const Vector& x) const {
    VField r(n_);
    for (std::size_t a = 0; a < size(); ++a)
      if (!x[a].is_zero()) r += x[a] * gens_[a].field;
    return r;
  }

 private:
  void add(std::string label, const Poly& h, const VField& expected, int grade) {
    VField f = contact_hamiltonian(h, n_);
    if (f != expected)
      throw StructuralError("generator " + label + ": X_h disagrees with the closed form");
    by_label_[label] = gens_.size();
    by_monomial_[h.terms().begin()->first] = gens_.size();
    gens_.push_back({std::move(label), h, std::move(f), grade});
  }

  int n_;
  VarTable table_;
  std::vector<SpGenerator> gens_;
  std::vector<SpCombination> duals_;
  std::map<std::string, std::size_t> by_label_;
  std::map<Exponent, std::size_t, GrlexDescending> by_monomial_;
  std::vector<Vector> structure_;
  Matrix killing_;
};

inline SpBasis::SpBasis(int n) : n_(n), table_(n) {
  if (n < 1) throw DomainError("sp basis requires n >= 1");
  const VarTable& t = table_;
  auto P = [&](int i) { return Poly::variable(t, t.p(i)); };
  auto Q = [&](int i) { return Poly::variable(t, t.q(i)); };
  const Poly T = Poly::variable(t, t.t());
  const Poly one = Poly::constant(t, Rational(1));
  auto si = [](int i) { return std::to_string(i); };

  // closed forms
  VField euler(n);  // full Euler field E_s + t d_t
  for (int i = 1; i <= n; ++i) {
    euler[t.p(i)] = P(i);
    euler[t.q(i)] = Q(i);
  }
  euler[t.t()] = T;
  auto scaled = [&](const Poly& f, const VField& v) {
    VField r(n);
    for (std::size_t j = 0; j < v.dim(); ++j) r[j] = f * v[j];
    return r;
  };
  auto along = [&](std::size_t j, const Poly& f) {
    VField r(n);
    r[j] = f;
    return r;
  };

  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      add("p" + si(i) + "p" + si(j), P(i) * P(j), along(t.q(i), P(j)) + along(t.q(j), P(i)), 0);
  for (int i = 1; i <= n; ++i)
    add("tp" + si(i), T * P(i), along(t.q(i), T) - scaled(P(i), euler), 1);
  add("t2", T * T, Rational(-2) * scaled(T, euler), 2);

  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      add("q" + si(i) + "q" + si(j), Q(i) * Q(j), -(along(t.p(i), Q(j)) + along(t.p(j), Q(i))), 0);
  for (int i = 1; i <= n; ++i)
    add("q" + si(i), Q(i), along(t.p(i), -one) + along(t.t(), -Q(i)), -1);
  add("1", one, along(t.t(), Rational(-2) * one), -2);

  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      add("p" + si(j) + "q" + si(i), P(j) * Q(i), along(t.q(j), Q(i)) - along(t.p(i), P(j)), 0);
  for (int i = 1; i <= n; ++i)
    add("tq" + si(i), T * Q(i), along(t.p(i), -T) - scaled(Q(i), euler), 1);
  for (int i = 1; i <= n; ++i)
    add("p" + si(i), P(i), along(t.q(i), one) + along(t.t(), -P(i)), -1);
  {
    VField xt = -scaled(one, euler);
    xt[t.t()] = Rational(-2) * T;  // -E_s - 2t d_t
    add("t", T, xt, 0);
  }

  if (gens_.size() != static_cast<std::size_t>((n + 1) * (2 * n + 3)))
    throw StructuralError("sp basis has the wrong dimension");

  // Killing-dual basis
  const Rational k(1, 4 * (n + 2));
  auto kij = [&](int i, int j) { return Rational(-1, 4 * (n + 2) * (i == j ? 2 : 1)); };
  duals_.resize(size());
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      duals_[index("p" + si(i) + "p" + si(j))] = {{index("q" + si(i) + "q" + si(j)), kij(i, j)}};
      duals_[index("q" + si(i) + "q" + si(j))] = {{index("p" + si(i) + "p" + si(j)), kij(i, j)}};
    }
  for (int i = 1; i <= n; ++i) {
    duals_[index("tp" + si(i))] = {{index("q" + si(i)), -k}};
    duals_[index("q" + si(i))] = {{index("tp" + si(i)), -k}};
    duals_[index("tq" + si(i))] = {{index("p" + si(i)), k}};
    duals_[index("p" + si(i))] = {{index("tq" + si(i)), k}};
    for (int j = 1; j <= n; ++j)
      duals_[index("p" + si(j) + "q" + si(i))] = {{index("p" + si(i) + "q" + si(j)), k}};
  }
  duals_[index("t2")] = {{index("1"), -k / Rational(2)}};
  duals_[index("1")] = {{index("t2"), -k / Rational(2)}};
  duals_[index("t")] = {{index("t"), k}};

  structure_.resize(size() * size());
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b)
      structure_[a * size() + b] = coordinates(vfield_bracket(gens_[a].field, gens_[b].field));

  // tr(ad e_a o ad e_b) = sum_{c,d} f(a,d)[c] f(b,c)[d]
  std::vector<std::vector<std::pair<std::size_t, Rational>>> sparse(size() * size());
  for (std::size_t i = 0; i < structure_.size(); ++i)
    for (std::size_t c = 0; c < size(); ++c)
      if (!structure_[i][c].is_zero()) sparse[i].emplace_back(c, structure_[i][c]);
  killing_ = Matrix(size(), size());
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a; b < size(); ++b) {
      Rational s(0);
      for (std::size_t d = 0; d < size(); ++d)
        for (const auto& [c, v] : sparse[a * size() + d]) s += v * structure(b, c)[d];
      killing_(a, b) = s;
      killing_(b, a) = s;
    }
}

/// Shared immutable basis per n.
inline std::shared_ptr<const SpBasis> sp_basis(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const SpBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto b = std::make_shared<const SpBasis>(n);
  cache.emplace(n, b);
  return b;
}

/// K(a, b) = tr(ad a o ad b), for a, b in basis coordinates.
inline Rational killing_form(const Vector& a, const Vector& b, const SpBasis& basis) {
  if (a.size() != basis.size() || b.size() != basis.size())
    throw StructuralError("element is not expressed in the sp basis");
  const Matrix& k = basis.killing_matrix();
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) s += a[i] * k(i, j) * b[j];
  }
  return s;
}

}  // namespace contactsym
