#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "contactsym/casimir.hpp"
#include "contactsym/equivariant_ops.hpp"
#include "contactsym/symbol_actions.hpp"

namespace contactsym {

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return r.str(); }

/// Accepts "num/den", "num" or a JSON integer.
inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational as \"num/den\" or an integer");
}

inline json to_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

inline json to_json(const Poly& p) {
  const VarTable& t = p.table();
  json blocks = json::array();
  for (Block b : t.fiber_blocks()) blocks.push_back(std::string(block_name(b)));
  json terms = json::array();
  for (const auto& [x, c] : p.terms()) {
    json e = json::object();
    for (std::size_t i = 0; i < t.size(); ++i)
      if (x[i] != 0) e[t.name(i)] = x[i];
    terms.push_back({{"coeff", c.str()}, {"exp", e}});
  }
  return {{"n", t.n()}, {"blocks", blocks}, {"terms", terms}};
}

namespace detail {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline Poly poly_from_json(const json& j) {
  const int n = detail::field<int>(j, "n");
  if (n < 1) throw ParseError("'n' must be >= 1");
  std::vector<Block> blocks;
  if (j.contains("blocks")) {
    for (const auto& b : j.at("blocks")) {
      if (!b.is_string()) throw ParseError("block names must be strings");
      try {
        blocks.push_back(parse_block(b.get<std::string>()));
      } catch (const std::exception& e) {
        throw ParseError(e.what());
      }
    }
  }
  const VarTable t(n, blocks);
  Poly p(t);
  if (!j.contains("terms")) return p;
  if (!j.at("terms").is_array()) throw ParseError("'terms' must be an array");
  for (const auto& term : j.at("terms")) {
    const Rational c = rational_from_json(term.contains("coeff") ? term.at("coeff") : json());
    Exponent x;
    if (term.contains("exp")) {
      if (!term.at("exp").is_object()) throw ParseError("'exp' must be an object");
      for (const auto& [name, e] : term.at("exp").items()) {
        auto idx = t.find(name);
        if (!idx) throw ParseError("unknown variable '" + name + "'");
        if (!e.is_number_integer() || e.get<int>() < 0 || e.get<int>() > 255)
          throw ParseError("exponent of '" + name + "' must be a small nonnegative integer");
        x.set(*idx, e.get<unsigned>());
      }
    }
    p.add_term(x, c);
  }
  return p;
}

inline json module_to_json(const ModuleDesc& m) {
  if (m.kind == ModuleDesc::Kind::R) return {{"module", "R"}, {"n", m.n}, {"k", m.k}, {"delta", m.delta.str()}};
  return {{"module", "S"}, {"n", m.n}, {"k", m.k}, {"m", m.m}, {"l", m.l}, {"nu", m.nu.str()}};
}

inline json to_json(const SymbolElem& s) {
  json j = module_to_json(s.module());
  j["poly"] = to_json(s.poly());
  return j;
}

inline SymbolElem symbol_from_json(const json& j) {
  const auto kind = detail::field<std::string>(j, "module");
  const Poly p = poly_from_json(detail::field<json>(j, "poly"));
  const int n = j.contains("n") ? detail::field<int>(j, "n") : p.table().n();
  if (kind == "R") return SymbolElem(ModuleDesc::R(n, detail::field<int>(j, "k"), rational_from_json(j.at("delta"))), p);
  if (kind == "S")
    return SymbolElem(ModuleDesc::S(n, detail::field<int>(j, "k"), detail::field<int>(j, "m"),
                                    detail::field<int>(j, "l"), rational_from_json(j.at("nu"))),
                      p);
  throw ParseError("module must be \"R\" or \"S\"");
}

inline json to_json(const CasimirResult& r) {
  return {{"n", r.n},
          {"k", r.k},
          {"delta", r.delta.str()},
          {"c", r.c.str()},
          {"eigenvalues", to_json(r.eigenvalues)},
          {"verified", r.verified},
          {"family",
           {{"max_base_degree", r.max_base_degree},
            {"spot_degree", r.spot_degree},
            {"monomials_checked", r.monomials_checked}}},
          {"counterexample", r.counterexample ? to_json(*r.counterexample) : json(nullptr)}};
}

inline json to_json(const Decomposition& d, int n) {
  json comps = json::array();
  for (const auto& c : d.components)
    comps.push_back({{"l", c.l},
                     {"T", to_json(c.T.poly())},
                     {"XlT", to_json(c.XlT.poly())},
                     {"eigenvalue", eigenvalue(n, d.k, c.l, d.delta).str()}});
  return {{"k", d.k}, {"delta", d.delta.str()}, {"components", comps}};
}

/// Generator table of sp_{2n+2}: label, hamiltonian, field components and the
/// Killing-dual combination.
inline json sp_basis_json(int n) {
  auto b = sp_basis(n);
  json rows = json::array();
  for (std::size_t a = 0; a < b->size(); ++a) {
    const auto& g = (*b)[a];
    json field = json::object();
    for (std::size_t j = 0; j < g.field.dim(); ++j)
      if (!g.field[j].is_zero()) field[g.field.table().name(j)] = g.field[j].str();
    json dual = json::array();
    for (const auto& [i, c] : b->dual(a)) dual.push_back({{"label", (*b)[i].label}, {"coeff", c.str()}});
    rows.push_back({{"label", g.label},
                    {"hamiltonian", g.hamiltonian.str()},
                    {"grade", g.grade},
                    {"field", field},
                    {"dual", dual}});
  }
  return {{"n", n}, {"dimension", b->size()}, {"generators", rows}};
}

}  // namespace contactsym
