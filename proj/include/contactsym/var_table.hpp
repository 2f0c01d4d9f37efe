#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contactsym/errors.hpp"

namespace contactsym {

/// Upper bound on the number of variables of a table (n <= 3 with all four
/// blocks enabled needs 28).
inline constexpr std::size_t kMaxVars = 32;

enum class Block : std::uint8_t { base = 0, xi = 1, eta = 2, Y = 3 };

inline std::string_view block_name(Block b) {
  switch (b) {
    case Block::base: return "base";
    case Block::xi: return "xi";
    case Block::eta: return "eta";
    case Block::Y: return "Y";
  }
  return "?";
}

inline Block parse_block(std::string_view s) {
  if (s == "xi") return Block::xi;
  if (s == "eta") return Block::eta;
  if (s == "Y") return Block::Y;
  throw ParseError("unknown fiber block '" + std::string(s) + "'");
}

/// Variables of the Darboux model: the base block (p_1..p_n, q_1..q_n, t)
/// followed by the enabled fiber blocks, each mirroring the base block. The
/// table order is fixed: base, xi, eta, Y.
class VarTable {
 public:
  VarTable() = default;

  explicit VarTable(int n, std::initializer_list<Block> fibers = {}) : n_(n) {
    if (n < 1) throw DomainError("dimension parameter n must be >= 1");
    for (Block b : fibers) enable(b);
    if (size() > kMaxVars) throw StructuralError("too many variables for a table");
  }

  VarTable(int n, const std::vector<Block>& fibers) : n_(n) {
    if (n < 1) throw DomainError("dimension parameter n must be >= 1");
    for (Block b : fibers) enable(b);
    if (size() > kMaxVars) throw StructuralError("too many variables for a table");
  }

  int n() const noexcept { return n_; }
  std::size_t width() const noexcept { return static_cast<std::size_t>(2 * n_ + 1); }
  bool has(Block b) const noexcept {
    return b == Block::base || (mask_ >> static_cast<int>(b)) & 1U;
  }
  std::vector<Block> fiber_blocks() const {
    std::vector<Block> out;
    for (Block b : {Block::xi, Block::eta, Block::Y})
      if (has(b)) out.push_back(b);
    return out;
  }
  std::size_t size() const noexcept {
    std::size_t blocks = 1;
    for (Block b : {Block::xi, Block::eta, Block::Y}) blocks += has(b) ? 1 : 0;
    return blocks * width();
  }

  std::size_t offset(Block b) const {
    if (!has(b))
      throw StructuralError("block '" + std::string(block_name(b)) + "' not enabled");
    std::size_t off = 0;
    for (Block c : {Block::base, Block::xi, Block::eta, Block::Y}) {
      if (c == b) return off;
      if (has(c)) off += width();
    }
    return off;
  }

  /// Index of the j-th coordinate (0-based: p's, then q's, then t) of a block.
  std::size_t var(Block b, std::size_t j) const {
    if (j >= width()) throw StructuralError("coordinate index out of range");
    return offset(b) + j;
  }
  std::size_t p(int i, Block b = Block::base) const { return var(b, static_cast<std::size_t>(i - 1)); }
  std::size_t q(int i, Block b = Block::base) const {
    return var(b, static_cast<std::size_t>(n_ + i - 1));
  }
  std::size_t t(Block b = Block::base) const { return var(b, static_cast<std::size_t>(2 * n_)); }

  Block block_of(std::size_t idx) const {
    if (idx >= size()) throw StructuralError("variable index out of range");
    std::size_t off = 0;
    for (Block c : {Block::base, Block::xi, Block::eta, Block::Y}) {
      if (!has(c)) continue;
      if (idx < off + width()) return c;
      off += width();
    }
    return Block::base;
  }
  std::size_t coord_of(std::size_t idx) const { return idx - offset(block_of(idx)); }

  std::string name(std::size_t idx) const {
    const Block b = block_of(idx);
    const std::size_t j = coord_of(idx);
    std::string coord;
    if (j < static_cast<std::size_t>(n_)) coord = "p" + std::to_string(j + 1);
    else if (j < 2 * static_cast<std::size_t>(n_)) coord = "q" + std::to_string(j - n_ + 1);
    else coord = "t";
    if (b == Block::base) return coord;
    return std::string(block_name(b)) + "_" + coord;
  }

  std::optional<std::size_t> find(std::string_view nm) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (name(i) == nm) return i;
    return std::nullopt;
  }

  friend bool operator==(const VarTable& a, const VarTable& b) {
    return a.n_ == b.n_ && a.mask_ == b.mask_;
  }
  friend bool operator!=(const VarTable& a, const VarTable& b) { return !(a == b); }

 private:
  void enable(Block b) {
    if (b == Block::base) return;
    mask_ = static_cast<std::uint8_t>(mask_ | (1U << static_cast<int>(b)));
  }

  int n_ = 1;
  std::uint8_t mask_ = 0;
};

inline void require_same_table(const VarTable& a, const VarTable& b, const char* what) {
  if (a != b) throw StructuralError(std::string("variable table mismatch in ") + what);
}

/// Dense exponent vector (or derivative multi-index) over a table.
struct Exponent {
  std::array<std::uint8_t, kMaxVars> e{};
  std::uint16_t total = 0;

  std::uint8_t operator[](std::size_t i) const { return e[i]; }
  void set(std::size_t i, unsigned v) {
    total = static_cast<std::uint16_t>(total - e[i] + v);
    e[i] = static_cast<std::uint8_t>(v);
  }
  void add(std::size_t i, int dv) { set(i, static_cast<unsigned>(e[i] + dv)); }

  Exponent& operator+=(const Exponent& o) {
    for (std::size_t i = 0; i < kMaxVars; ++i) e[i] = static_cast<std::uint8_t>(e[i] + o.e[i]);
    total = static_cast<std::uint16_t>(total + o.total);
    return *this;
  }
  friend Exponent operator+(Exponent a, const Exponent& b) { return a += b; }
  /// Componentwise difference; caller guarantees `b <= a`.
  friend Exponent operator-(Exponent a, const Exponent& b) {
    for (std::size_t i = 0; i < kMaxVars; ++i) a.e[i] = static_cast<std::uint8_t>(a.e[i] - b.e[i]);
    a.total = static_cast<std::uint16_t>(a.total - b.total);
    return a;
  }
  bool divides(const Exponent& o) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  bool is_zero() const { return total == 0; }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.total == b.total && a.e == b.e;
  }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }

  static Exponent unit(std::size_t i, unsigned power = 1) {
    Exponent x;
    x.set(i, power);
    return x;
  }
};

/// Graded-lexicographic order, larger terms first: higher total degree first,
/// ties broken by the larger exponent on the earliest table variable.
struct GrlexDescending {
  bool operator()(const Exponent& a, const Exponent& b) const {
    if (a.total != b.total) return a.total > b.total;
    return a.e > b.e;
  }
};

inline unsigned degree_in_block(const Exponent& x, const VarTable& table, Block b) {
  unsigned d = 0;
  const std::size_t off = table.offset(b);
  for (std::size_t j = 0; j < table.width(); ++j) d += x[off + j];
  return d;
}

/// All exponents of total degree `degree` supported on the given variable
/// indices, in descending grlex order.
inline std::vector<Exponent> exponents_of_degree(const std::vector<std::size_t>& vars,
                                                 unsigned degree) {
  std::vector<Exponent> out;
  Exponent cur;
  auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
    if (pos + 1 == vars.size()) {
      Exponent x = cur;
      x.set(vars[pos], left);
      out.push_back(x);
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      cur.set(vars[pos], v);
      self(self, pos + 1, left - v);
    }
    cur.set(vars[pos], 0);
  };
  if (vars.empty()) {
    if (degree == 0) out.emplace_back();
    return out;
  }
  rec(rec, 0, degree);
  return out;
}

inline std::vector<std::size_t> block_vars(const VarTable& table, Block b) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < table.width(); ++j) out.push_back(table.var(b, j));
  return out;
}

}  // namespace contactsym
