#pragma once

#include <string>
#include <utility>

#include "contactsym/contact_core.hpp"

namespace contactsym {

/// A symbol module: R^k_delta (xi block only; bundle weight delta + k/(n+1))
/// or S^{km}_{l;nu} (xi, eta and Y blocks; bundle weight nu).
struct ModuleDesc {
  enum class Kind { R, S };

  Kind kind = Kind::R;
  int n = 1;
  int k = 0;
  int m = 0;
  int l = 0;
  Rational delta;  // R only
  Rational nu;     // S only

  static ModuleDesc R(int n, int k, const Rational& delta) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (k < 0) throw DomainError("fiber degree must be >= 0");
    ModuleDesc d;
    d.kind = Kind::R;
    d.n = n;
    d.k = k;
    d.delta = delta;
    return d;
  }
  /// S^k_lambda, the degree-k symbols of weight lambda, which is R^k_{lambda - k/(n+1)}.
  static ModuleDesc tensor(int n, int k, const Rational& lambda) {
    return R(n, k, lambda - Rational(k, n + 1));
  }
  static ModuleDesc S(int n, int k, int m, int l, const Rational& nu) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (k < 0 || m < 0 || l < 0) throw DomainError("fiber degrees must be >= 0");
    ModuleDesc d;
    d.kind = Kind::S;
    d.n = n;
    d.k = k;
    d.m = m;
    d.l = l;
    d.nu = nu;
    return d;
  }

  VarTable table() const {
    if (kind == Kind::R) return VarTable(n, {Block::xi});
    return VarTable(n, {Block::xi, Block::eta, Block::Y});
  }

  /// Density weight of the underlying bundle.
  Rational weight() const { return kind == Kind::R ? delta + Rational(k, n + 1) : nu; }

  /// R^{k+dk}_delta.
  ModuleDesc shifted(int dk) const {
    if (kind != Kind::R) throw StructuralError("degree shift is defined on R modules only");
    return R(n, k + dk, delta);
  }

  std::string str() const {
    if (kind == Kind::R) return "R^" + std::to_string(k) + "_" + delta.str() + " (n=" + std::to_string(n) + ")";
    return "S^{" + std::to_string(k) + "," + std::to_string(m) + "}_{" + std::to_string(l) + ";" + nu.str() +
           "} (n=" + std::to_string(n) + ")";
  }

  friend bool operator==(const ModuleDesc& a, const ModuleDesc& b) {
    if (a.kind != b.kind || a.n != b.n || a.k != b.k) return false;
    if (a.kind == Kind::R) return a.delta == b.delta;
    return a.m == b.m && a.l == b.l && a.nu == b.nu;
  }
  friend bool operator!=(const ModuleDesc& a, const ModuleDesc& b) { return !(a == b); }
};

/// True when `p` is homogeneous of the module's fiber degrees.
inline bool fits_module(const Poly& p, const ModuleDesc& mod) {
  if (p.table() != mod.table()) return false;
  if (p.is_zero()) return true;
  auto deg_ok = [&](Block b, int d) {
    auto h = p.homogeneous_degree(b);
    return h && static_cast<int>(*h) == d;
  };
  if (!deg_ok(Block::xi, mod.k)) return false;
  if (mod.kind == ModuleDesc::Kind::S) return deg_ok(Block::eta, mod.m) && deg_ok(Block::Y, mod.l);
  return true;
}

/// An element of a symbol module. Weight bookkeeping lives in the descriptor.
class SymbolElem {
 public:
  SymbolElem(ModuleDesc module, Poly poly) : module_(std::move(module)), poly_(std::move(poly)) {
    if (poly_.table() != module_.table()) {
      if (poly_.table().n() != module_.n) throw StructuralError("symbol table has a different n");
      poly_ = embed(poly_, module_.table());
    }
    if (!fits_module(poly_, module_))
      throw DomainError("polynomial is not homogeneous of the degrees of " + module_.str());
  }

  const ModuleDesc& module() const noexcept { return module_; }
  const Poly& poly() const noexcept { return poly_; }
  bool is_zero() const noexcept { return poly_.is_zero(); }

  friend bool operator==(const SymbolElem& a, const SymbolElem& b) {
    return a.module_ == b.module_ && a.poly_ == b.poly_;
  }

 private:
  ModuleDesc module_;
  Poly poly_;
};

/// Full Euler field E = sum over base coordinates x d_x, as an operator.
inline DiffOp base_euler_op(const VarTable& table, bool spatial_only = false) {
  DiffOp d(table);
  const std::size_t w = spatial_only ? table.width() - 1 : table.width();
  for (std::size_t j = 0; j < w; ++j) {
    const std::size_t i = table.var(Block::base, j);
    d.add_term(Exponent::unit(i), Poly::variable(table, i));
  }
  return d;
}

/// Fiber Euler field E_xi (or its spatial part E_{xi_s}).
inline DiffOp fiber_euler_op(const VarTable& table, Block b = Block::xi, bool spatial_only = false) {
  DiffOp d(table);
  const std::size_t w = spatial_only ? table.width() - 1 : table.width();
  for (std::size_t j = 0; j < w; ++j) {
    const std::size_t i = table.var(b, j);
    d.add_term(Exponent::unit(i), Poly::variable(table, i));
  }
  return d;
}

/// E(xi) = sum_j x_j xi_j, the contraction of the Euler field with the fiber
/// variables (or <E_s, xi_s> with spatial_only).
inline Poly euler_contraction(const VarTable& table, Block b = Block::xi, bool spatial_only = false) {
  Poly r(table);
  const std::size_t w = spatial_only ? table.width() - 1 : table.width();
  for (std::size_t j = 0; j < w; ++j)
    r += Poly::variable(table, table.var(Block::base, j)) * Poly::variable(table, table.var(b, j));
  return r;
}

/// L_X on the module: X(Q) - d_jX^i xi_i d_{xi_j}Q - d_jX^i eta_i d_{eta_j}Q
/// + d_jX^i Y_j d_{Y_i}Q + w (div X) Q, w the bundle weight.
inline DiffOp lie_action_as_diffop(const VField& x, const ModuleDesc& mod) {
  if (x.n() != mod.n) throw StructuralError("vector field and module have different n");
  const VarTable table = mod.table();
  DiffOp d = x.as_diffop(table);
  const std::size_t w = table.width();
  for (std::size_t i = 0; i < w; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < w; ++j) {
      const Poly dji = x[i].diff(j);
      if (dji.is_zero()) continue;
      const Poly c = embed(dji, table);
      for (Block b : table.fiber_blocks()) {
        if (b == Block::Y)
          d.add_term(Exponent::unit(table.var(b, i)), c * Poly::variable(table, table.var(b, j)));
        else
          d.add_term(Exponent::unit(table.var(b, j)), -(c * Poly::variable(table, table.var(b, i))));
      }
    }
  }
  const Poly div = divergence(x);
  if (!div.is_zero()) d.add_term(Exponent{}, mod.weight() * embed(div, table));
  return d;
}

inline SymbolElem lie_action_symbol(const VField& x, const SymbolElem& s) {
  return SymbolElem(s.module(), lie_action_as_diffop(x, s.module()).apply(s.poly()));
}

/// L^lambda_X f = X(f) + lambda f div X on lambda-densities.
inline Poly density_action(const VField& x, const Poly& f, const Rational& lambda) {
  const Poly fb = to_base(f);
  return x.apply(fb) + lambda * fb * divergence(x);
}

}  // namespace contactsym
