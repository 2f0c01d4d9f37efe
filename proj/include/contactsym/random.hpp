#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "contactsym/diff_op.hpp"
#include "contactsym/poly.hpp"

namespace contactsym {

/// Seeded generator for property suites. Integer ranges are mapped by plain
/// modulo so that streams are identical across standard library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform-ish integer in [lo, hi].
  long range(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }

  bool coin() { return (next() & 1U) != 0; }

  /// Rational a/b with |a| <= num_bound and 1 <= b <= den_bound.
  Rational rational(long num_bound, long den_bound) {
    const long a = range(-num_bound, num_bound);
    const long b = range(1, den_bound);
    return Rational(a, b);
  }

  Rational nonzero_rational(long num_bound, long den_bound) {
    for (;;) {
      Rational r = rational(num_bound, den_bound);
      if (!r.is_zero()) return r;
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<long>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 eng_;
};

/// Random polynomial on the given variables: `terms` monomials of total
/// degree <= max_degree with small rational coefficients.
inline Poly random_poly(Rng& rng, const VarTable& table, const std::vector<std::size_t>& vars,
                        unsigned max_degree, unsigned terms) {
  Poly p(table);
  for (unsigned i = 0; i < terms; ++i) {
    Exponent x;
    const auto deg = static_cast<unsigned>(rng.range(0, max_degree));
    for (unsigned d = 0; d < deg; ++d) x.add(rng.pick(vars), 1);
    p.add_term(x, rng.rational(5, 3));
  }
  return p;
}

/// Random homogeneous polynomial: fiber part of exact degree `fiber_degree` in
/// `fiber_vars`, base part of degree <= base_degree in `base_vars`.
inline Poly random_symbol(Rng& rng, const VarTable& table, const std::vector<std::size_t>& base_vars,
                          unsigned base_degree, const std::vector<std::size_t>& fiber_vars,
                          unsigned fiber_degree, unsigned terms) {
  Poly p(table);
  for (unsigned i = 0; i < terms; ++i) {
    Exponent x;
    const auto deg = static_cast<unsigned>(rng.range(0, base_degree));
    for (unsigned d = 0; d < deg; ++d) x.add(rng.pick(base_vars), 1);
    for (unsigned d = 0; d < fiber_degree; ++d) x.add(rng.pick(fiber_vars), 1);
    p.add_term(x, rng.nonzero_rational(5, 3));
  }
  return p;
}

/// Random differential operator with `terms` terms of order <= max_order and
/// coefficient degree <= max_degree.
inline DiffOp random_diffop(Rng& rng, const VarTable& table, const std::vector<std::size_t>& vars,
                            unsigned max_order, unsigned max_degree, unsigned terms) {
  DiffOp d(table);
  for (unsigned i = 0; i < terms; ++i) {
    Exponent alpha;
    const auto ord = static_cast<unsigned>(rng.range(0, max_order));
    for (unsigned o = 0; o < ord; ++o) alpha.add(rng.pick(vars), 1);
    d.add_term(alpha, random_poly(rng, table, vars, max_degree, 2));
  }
  return d;
}

}  // namespace contactsym
