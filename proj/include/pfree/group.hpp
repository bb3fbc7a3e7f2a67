#pragma once

/// Ambient groups.
///
/// Every group hands out elements as opaque 64-bit handles whose numeric
/// order coincides with the lexicographic order of the canonical payload
/// (residues, image words, row-major matrix entries). Sorting handles is
/// therefore sorting canonically, and equality of handles within one group
/// is equality of elements. Sets from different groups are kept apart by
/// the group's domain tag, checked wherever two sets meet.

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pfree/error.hpp"
#include "pfree/hash.hpp"
#include "pfree/rng.hpp"

namespace pfree {

struct Element {
  std::int64_t id = 0;
  friend constexpr auto operator<=>(Element, Element) = default;
};

struct ElementHash {
  std::size_t operator()(Element e) const noexcept {
    std::uint64_t z = static_cast<std::uint64_t>(e.id) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(z ^ (z >> 27));
  }
};

using Payload = boost::container::small_vector<std::int64_t, 9>;

/// Groups at or below this order expose their full element list.
inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

class GroupOracle {
 public:
  virtual ~GroupOracle() = default;
  GroupOracle(const GroupOracle&) = delete;
  GroupOracle& operator=(const GroupOracle&) = delete;

  const std::string& spec() const noexcept { return spec_; }
  std::uint64_t domain_tag() const noexcept { return tag_; }

  Element multiply(Element a, Element b) const {
    if (!table_.empty()) {
      return Element{table_[static_cast<std::size_t>(a.id) * table_order_ +
                            static_cast<std::size_t>(b.id)]};
    }
    return do_multiply(a, b);
  }
  Element invert(Element a) const {
    if (!inverse_table_.empty()) return Element{inverse_table_[static_cast<std::size_t>(a.id)]};
    return do_invert(a);
  }
  virtual Element identity() const = 0;

  /// Group order when finite and known; nullopt for infinite or oracle-only groups.
  virtual std::optional<std::uint64_t> order() const = 0;
  bool enumerable() const {
    const auto n = order();
    return n && *n <= kEnumerationCap;
  }
  /// All elements in canonical order. Throws NotEnumerable.
  virtual std::vector<Element> elements() const {
    require_enumerable("elements");
    std::vector<Element> out(*order());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Element{static_cast<std::int64_t>(i)};
    return out;
  }
  /// Whether handles are exactly 0..order-1.
  virtual bool dense() const { return order().has_value(); }

  virtual bool contains(Element e) const = 0;
  virtual Payload payload(Element e) const = 0;
  /// Inverse of payload(); throws ParseError when the payload names no element.
  virtual Element from_payload(const Payload& p) const = 0;

  virtual bool abelian() const = 0;
  /// Invariant factors d1 | d2 | ... with product equal to the order, when
  /// the group is finite abelian and the factors are known.
  virtual std::optional<std::vector<std::int64_t>> invariant_factors() const { return std::nullopt; }
  /// Orders m1..ms such that payload(e) is the coordinate vector of e in
  /// Z/m1 x ... x Z/ms. Only native abelian groups provide this.
  virtual std::optional<std::vector<std::int64_t>> coordinate_moduli() const { return std::nullopt; }
  /// Whether the canonical order is a translation-invariant linear order
  /// (x < y implies xz < yz and zx < zy). True for the integers only.
  virtual bool linearly_ordered() const { return false; }

  virtual std::string format(Element e) const {
    const Payload p = payload(e);
    if (p.size() == 1) return std::to_string(p[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(p[i]);
    }
    return out + ")";
  }
  virtual Element parse(std::string_view text) const {
    std::string s;
    for (char c : text) {
      if (c != ' ' && c != '\t' && c != '\r') s += c;
    }
    if (!s.empty() && (s.front() == '(' || s.front() == '[')) {
      const char close = s.front() == '(' ? ')' : ']';
      if (s.back() != close) throw ParseError("unbalanced element encoding '" + s + "'");
      s = s.substr(1, s.size() - 2);
    }
    Payload p;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(parse_int64(tok));
    if (p.empty()) throw ParseError("empty element encoding");
    return from_payload(p);
  }

  /// Uniform over the enumeration for finite groups; a wide window otherwise.
  virtual Element random_element(SplitMix64& rng) const {
    if (dense()) return Element{static_cast<std::int64_t>(rng.below(*order()))};
    require_enumerable("random_element");
    const auto all = elements();
    return all[rng.below(all.size())];
  }

  static std::int64_t parse_int64(std::string_view tok) {
    if (tok.empty()) throw ParseError("empty integer");
    std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
    if (i == tok.size()) throw ParseError("bad integer '" + std::string(tok) + "'");
    __int128 v = 0;
    for (; i < tok.size(); ++i) {
      if (tok[i] < '0' || tok[i] > '9') throw ParseError("bad integer '" + std::string(tok) + "'");
      v = v * 10 + (tok[i] - '0');
      if (v > static_cast<__int128>(std::numeric_limits<std::int64_t>::max())) {
        throw ParseError("integer out of range '" + std::string(tok) + "'");
      }
    }
    return static_cast<std::int64_t>(tok[0] == '-' ? -v : v);
  }

  /// Precomputes the Cayley table for small dense groups.
  void build_tables(std::uint64_t max_order = 1024) {
    if (!dense()) return;
    const auto n = *order();
    if (n > max_order) return;
    std::vector<std::int64_t> table(n * n);
    std::vector<std::int64_t> inv(n);
    for (std::uint64_t a = 0; a < n; ++a) {
      inv[a] = do_invert(Element{static_cast<std::int64_t>(a)}).id;
      for (std::uint64_t b = 0; b < n; ++b) {
        table[a * n + b] =
            do_multiply(Element{static_cast<std::int64_t>(a)}, Element{static_cast<std::int64_t>(b)}).id;
      }
    }
    table_order_ = n;
    table_ = std::move(table);
    inverse_table_ = std::move(inv);
  }

 protected:
  explicit GroupOracle(std::string spec) : spec_(std::move(spec)), tag_(fnv1a(spec_)) {}
  GroupOracle(std::string spec, std::uint64_t tag) : spec_(std::move(spec)), tag_(tag) {}

  virtual Element do_multiply(Element a, Element b) const = 0;
  virtual Element do_invert(Element a) const = 0;

  void require_enumerable(const char* what) const {
    if (!enumerable()) {
      throw NotEnumerable(std::string(what) + ": group '" + spec_ + "' has no finite enumeration");
    }
  }

 private:
  std::string spec_;
  std::uint64_t tag_;
  std::uint64_t table_order_ = 0;
  std::vector<std::int64_t> table_;
  std::vector<std::int64_t> inverse_table_;
};

using GroupPtr = std::shared_ptr<const GroupOracle>;

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Invariant factors of Z/m1 x ... x Z/ms, ascending, trivial factors dropped.
inline std::vector<std::int64_t> invariant_factors_of(const std::vector<std::int64_t>& moduli) {
  std::map<std::int64_t, std::vector<int>> exponents;
  for (auto m : moduli) {
    for (auto [p, e] : factorize(m)) exponents[p].push_back(e);
  }
  std::size_t count = 0;
  for (auto& [p, es] : exponents) {
    std::sort(es.begin(), es.end(), std::greater<>());
    count = std::max(count, es.size());
  }
  std::vector<std::int64_t> out(count, 1);
  for (auto& [p, es] : exponents) {
    for (std::size_t j = 0; j < es.size(); ++j) {
      for (int t = 0; t < es[j]; ++t) out[count - 1 - j] *= p;
    }
  }
  return out;
}

}  // namespace detail

/// (Z, +). Handles are the integers themselves; sums are overflow-checked.
class IntegerGroup final : public GroupOracle {
 public:
  IntegerGroup() : GroupOracle("int") {}

  Element identity() const override { return Element{0}; }
  std::optional<std::uint64_t> order() const override { return std::nullopt; }
  bool dense() const override { return false; }
  bool contains(Element) const override { return true; }
  Payload payload(Element e) const override { return Payload{e.id}; }
  Element from_payload(const Payload& p) const override {
    if (p.size() != 1) throw ParseError("integer element needs one component");
    return Element{p[0]};
  }
  bool abelian() const override { return true; }
  bool linearly_ordered() const override { return true; }
  Element random_element(SplitMix64& rng) const override {
    return Element{rng.between(-1'000'000'000, 1'000'000'000)};
  }

 protected:
  Element do_multiply(Element a, Element b) const override {
    std::int64_t r;
    if (__builtin_add_overflow(a.id, b.id, &r)) throw BudgetExceeded("integer overflow in int group");
    return Element{r};
  }
  Element do_invert(Element a) const override {
    if (a.id == std::numeric_limits<std::int64_t>::min()) {
      throw BudgetExceeded("integer overflow in int group");
    }
    return Element{-a.id};
  }
};

/// Z/m1 x ... x Z/ms. Handles are mixed-radix with the first factor most significant.
class AbelianGroup final : public GroupOracle {
 public:
  AbelianGroup(std::string spec, std::vector<std::int64_t> moduli)
      : GroupOracle(std::move(spec)), moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw ParseError("abelian group needs at least one factor");
    __int128 n = 1;
    for (auto m : moduli_) {
      if (m < 1) throw ParseError("cyclic factor must be >= 1");
      n *= m;
      if (n > (static_cast<__int128>(1) << 62)) throw BudgetExceeded("group order overflow");
    }
    order_ = static_cast<std::uint64_t>(n);
  }

  const std::vector<std::int64_t>& moduli() const { return moduli_; }

  Element identity() const override { return Element{0}; }
  std::optional<std::uint64_t> order() const override { return order_; }
  bool contains(Element e) const override {
    return e.id >= 0 && static_cast<std::uint64_t>(e.id) < order_;
  }
  Payload payload(Element e) const override {
    Payload p(moduli_.size());
    std::int64_t x = e.id;
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      p[i] = x % moduli_[i];
      x /= moduli_[i];
    }
    return p;
  }
  Element from_payload(const Payload& p) const override {
    if (p.size() != moduli_.size()) throw ParseError("wrong number of residues for " + spec());
    std::int64_t id = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0 || p[i] >= moduli_[i]) throw ParseError("residue out of range for " + spec());
      id = id * moduli_[i] + p[i];
    }
    return Element{id};
  }
  bool abelian() const override { return true; }
  std::optional<std::vector<std::int64_t>> invariant_factors() const override {
    return detail::invariant_factors_of(moduli_);
  }
  std::optional<std::vector<std::int64_t>> coordinate_moduli() const override { return moduli_; }

 protected:
  Element do_multiply(Element a, Element b) const override {
    std::int64_t id = 0;
    std::int64_t x = a.id, y = b.id;
    std::int64_t place = 1;
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      const std::int64_t m = moduli_[i];
      id += ((x % m + y % m) % m) * place;
      x /= m;
      y /= m;
      place *= m;
    }
    return Element{id};
  }
  Element do_invert(Element a) const override {
    std::int64_t id = 0;
    std::int64_t x = a.id;
    std::int64_t place = 1;
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      const std::int64_t m = moduli_[i];
      id += ((m - x % m) % m) * place;
      x /= m;
      place *= m;
    }
    return Element{id};
  }

 private:
  std::vector<std::int64_t> moduli_;
  std::uint64_t order_ = 1;
};

/// S_n acting on {0..n-1}; payload is the image word, (st)(i) = s(t(i)).
class SymmetricGroup final : public GroupOracle {
 public:
  explicit SymmetricGroup(int n) : GroupOracle("sym:" + std::to_string(n)), n_(n) {
    if (n < 1 || n > 8) throw ParseError("sym:n requires 1 <= n <= 8");
    order_ = 1;
    for (int i = 2; i <= n; ++i) order_ *= static_cast<std::uint64_t>(i);
  }

  int degree() const { return n_; }

  Element identity() const override { return Element{0}; }
  std::optional<std::uint64_t> order() const override { return order_; }
  bool contains(Element e) const override {
    return e.id >= 0 && static_cast<std::uint64_t>(e.id) < order_;
  }
  Payload payload(Element e) const override {
    Payload word(n_);
    std::vector<int> pool(n_);
    std::iota(pool.begin(), pool.end(), 0);
    std::int64_t rank = e.id;
    std::int64_t f = static_cast<std::int64_t>(order_);
    for (int i = 0; i < n_; ++i) {
      f /= (n_ - i);
      const auto pick = static_cast<std::size_t>(rank / f);
      rank %= f;
      word[i] = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return word;
  }
  Element from_payload(const Payload& p) const override {
    if (static_cast<int>(p.size()) != n_) throw ParseError("permutation has wrong length for " + spec());
    std::vector<bool> seen(n_, false);
    for (auto v : p) {
      if (v < 0 || v >= n_ || seen[v]) throw ParseError("not a permutation image word");
      seen[v] = true;
    }
    std::int64_t rank = 0;
    std::int64_t f = static_cast<std::int64_t>(order_);
    for (int i = 0; i < n_; ++i) {
      f /= (n_ - i);
      std::int64_t smaller = 0;
      for (int j = i + 1; j < n_; ++j) smaller += p[j] < p[i];
      rank += smaller * f;
    }
    return Element{rank};
  }
  bool abelian() const override { return n_ <= 2; }
  std::optional<std::vector<std::int64_t>> invariant_factors() const override {
    if (n_ == 2) return std::vector<std::int64_t>{2};
    if (n_ == 1) return std::vector<std::int64_t>{};
    return std::nullopt;
  }

 protected:
  Element do_multiply(Element a, Element b) const override {
    const Payload s = payload(a), t = payload(b);
    Payload st(n_);
    for (int i = 0; i < n_; ++i) st[i] = s[t[i]];
    return from_payload(st);
  }
  Element do_invert(Element a) const override {
    const Payload s = payload(a);
    Payload inv(n_);
    for (int i = 0; i < n_; ++i) inv[s[i]] = i;
    return from_payload(inv);
  }

 private:
  int n_;
  std::uint64_t order_;
};

/// Dihedral group of order 2n: r^a s^b with payload (a, b), s r s = r^-1.
class DihedralGroup final : public GroupOracle {
 public:
  explicit DihedralGroup(std::int64_t n) : GroupOracle("dihedral:" + std::to_string(n)), n_(n) {
    if (n < 1) throw ParseError("dihedral:n requires n >= 1");
    if (n > static_cast<std::int64_t>(1) << 60) throw BudgetExceeded("group order overflow");
  }

  Element identity() const override { return Element{0}; }
  std::optional<std::uint64_t> order() const override { return static_cast<std::uint64_t>(2 * n_); }
  bool contains(Element e) const override { return e.id >= 0 && e.id < 2 * n_; }
  Payload payload(Element e) const override { return Payload{e.id / 2, e.id % 2}; }
  Element from_payload(const Payload& p) const override {
    if (p.size() != 2 || p[0] < 0 || p[0] >= n_ || p[1] < 0 || p[1] > 1) {
      throw ParseError("dihedral element must be (a,b) with 0<=a<n, b in {0,1}");
    }
    return Element{2 * p[0] + p[1]};
  }
  bool abelian() const override { return n_ <= 2; }
  std::optional<std::vector<std::int64_t>> invariant_factors() const override {
    if (n_ == 1) return std::vector<std::int64_t>{2};
    if (n_ == 2) return std::vector<std::int64_t>{2, 2};
    return std::nullopt;
  }

 protected:
  Element do_multiply(Element x, Element y) const override {
    const std::int64_t a1 = x.id / 2, b1 = x.id % 2, a2 = y.id / 2, b2 = y.id % 2;
    const std::int64_t a = detail::mod(b1 ? a1 - a2 : a1 + a2, n_);
    return Element{2 * a + (b1 ^ b2)};
  }
  Element do_invert(Element x) const override {
    if (x.id % 2) return x;
    return Element{2 * detail::mod(-(x.id / 2), n_)};
  }

 private:
  std::int64_t n_;
};

/// Upper unitriangular 3x3 matrices mod a prime p. The payload is the full
/// row-major matrix; for [[1,a,c],[0,1,b],[0,0,1]] the handle is a*p^2+c*p+b.
class HeisenbergGroup final : public GroupOracle {
 public:
  explicit HeisenbergGroup(std::int64_t p) : GroupOracle("heisenberg:" + std::to_string(p)), p_(p) {
    if (!detail::is_prime(p)) throw ParseError("heisenberg:p requires prime p");
    if (p > 2'000'000) throw BudgetExceeded("group order overflow");
  }

  std::int64_t prime() const { return p_; }

  struct Coords {
    std::int64_t a, b, c;
  };
  Coords coords(Element e) const { return {e.id / (p_ * p_), e.id % p_, (e.id / p_) % p_}; }
  Element make(std::int64_t a, std::int64_t b, std::int64_t c) const {
    return Element{detail::mod(a, p_) * p_ * p_ + detail::mod(c, p_) * p_ + detail::mod(b, p_)};
  }

  Element identity() const override { return Element{0}; }
  std::optional<std::uint64_t> order() const override {
    return static_cast<std::uint64_t>(p_ * p_ * p_);
  }
  bool contains(Element e) const override { return e.id >= 0 && e.id < p_ * p_ * p_; }
  Payload payload(Element e) const override {
    const auto [a, b, c] = coords(e);
    return Payload{1, a, c, 0, 1, b, 0, 0, 1};
  }
  Element from_payload(const Payload& m) const override {
    if (m.size() != 9 || m[0] != 1 || m[4] != 1 || m[8] != 1 || m[3] != 0 || m[6] != 0 || m[7] != 0) {
      throw ParseError("not an upper unitriangular 3x3 matrix");
    }
    for (auto v : m) {
      if (v < 0 || v >= p_) throw ParseError("matrix entry out of range mod p");
    }
    return make(m[1], m[5], m[2]);
  }
  bool abelian() const override { return false; }

 protected:
  Element do_multiply(Element x, Element y) const override {
    const auto [a1, b1, c1] = coords(x);
    const auto [a2, b2, c2] = coords(y);
    return make(a1 + a2, b1 + b2, c1 + c2 + (a1 * b2) % p_);
  }
  Element do_invert(Element x) const override {
    const auto [a, b, c] = coords(x);
    return make(-a, -b, -c + (a * b) % p_);
  }

 private:
  std::int64_t p_;
};

/// Q8 = {1,-1,i,-i,j,-j,k,-k} with handles 0..7 in that order.
class QuaternionGroup final : public GroupOracle {
 public:
  QuaternionGroup() : GroupOracle("quaternion") {}

  Element identity() const override { return Element{0}; }
  std::optional<std::uint64_t> order() const override { return 8; }
  bool contains(Element e) const override { return e.id >= 0 && e.id < 8; }
  Payload payload(Element e) const override { return Payload{e.id}; }
  Element from_payload(const Payload& p) const override {
    if (p.size() != 1 || p[0] < 0 || p[0] >= 8) throw ParseError("quaternion handle out of range");
    return Element{p[0]};
  }
  bool abelian() const override { return false; }
  std::string format(Element e) const override { return kNames[static_cast<std::size_t>(e.id)]; }
  Element parse(std::string_view text) const override {
    for (std::size_t i = 0; i < 8; ++i) {
      if (text == kNames[i]) return Element{static_cast<std::int64_t>(i)};
    }
    throw ParseError("quaternion element must be one of 1,-1,i,-i,j,-j,k,-k");
  }

 protected:
  Element do_multiply(Element x, Element y) const override {
    // unit index 0..3 = 1,i,j,k; sign bit in the low bit of the handle
    static constexpr int kUnit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static constexpr int kNeg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    const auto ux = x.id / 2, uy = y.id / 2;
    const auto sign = (x.id % 2) ^ (y.id % 2) ^ kNeg[ux][uy];
    return Element{2 * kUnit[ux][uy] + sign};
  }
  Element do_invert(Element x) const override {
    if (x.id < 2) return x;
    return Element{x.id ^ 1};
  }

 private:
  static constexpr const char* kNames[8] = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
};

/// GL_d(Z/m) as an oracle: no enumeration. Handles are the row-major entries
/// read as base-m digits, so m^(d*d) must stay below 2^62.
class MatrixGroup final : public GroupOracle {
 public:
  MatrixGroup(int d, std::int64_t m)
      : GroupOracle("matrix:" + std::to_string(d) + ":" + std::to_string(m)), d_(d), m_(m) {
    if (d < 1) throw ParseError("matrix:d:m requires d >= 1");
    if (m < 2) throw ParseError("matrix:d:m requires m >= 2");
    __int128 span = 1;
    for (int i = 0; i < d * d; ++i) {
      span *= m;
      if (span > (static_cast<__int128>(1) << 62)) throw BudgetExceeded("matrix handle overflow");
    }
  }

  Element identity() const override {
    Payload p(static_cast<std::size_t>(d_ * d_), 0);
    for (int i = 0; i < d_; ++i) p[i * d_ + i] = 1 % m_;
    return encode(p);
  }
  std::optional<std::uint64_t> order() const override { return std::nullopt; }
  bool dense() const override { return false; }
  bool contains(Element e) const override {
    if (e.id < 0) return false;
    return unit(determinant(decode(e), d_));
  }
  Payload payload(Element e) const override { return decode(e); }
  Element from_payload(const Payload& p) const override {
    if (p.size() != static_cast<std::size_t>(d_ * d_)) throw ParseError("matrix has wrong size");
    for (auto v : p) {
      if (v < 0 || v >= m_) throw ParseError("matrix entry out of range");
    }
    if (!unit(determinant(p, d_))) throw ParseError("matrix is not invertible mod m");
    return encode(p);
  }
  bool abelian() const override { return d_ == 1; }
  Element random_element(SplitMix64& rng) const override {
    for (;;) {
      Payload p(static_cast<std::size_t>(d_ * d_));
      for (auto& v : p) v = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m_)));
      if (unit(determinant(p, d_))) return encode(p);
    }
  }

 protected:
  Element do_multiply(Element x, Element y) const override {
    const Payload a = decode(x), b = decode(y);
    Payload c(static_cast<std::size_t>(d_ * d_), 0);
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        __int128 s = 0;
        for (int k = 0; k < d_; ++k) s += static_cast<__int128>(a[i * d_ + k]) * b[k * d_ + j];
        c[i * d_ + j] = static_cast<std::int64_t>(s % m_);
      }
    }
    return encode(c);
  }
  Element do_invert(Element x) const override {
    const Payload a = decode(x);
    const std::int64_t det_inv = inverse_mod(determinant(a, d_));
    Payload inv(static_cast<std::size_t>(d_ * d_));
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        // adj(A)[i][j] = (-1)^(i+j) * minor(A, j, i)
        const std::int64_t cof = determinant(minor(a, d_, j, i), d_ - 1);
        const std::int64_t signed_cof = ((i + j) % 2) ? detail::mod(-cof, m_) : cof;
        inv[i * d_ + j] = static_cast<std::int64_t>(static_cast<__int128>(signed_cof) * det_inv % m_);
      }
    }
    return encode(inv);
  }

 private:
  Element encode(const Payload& p) const {
    std::int64_t id = 0;
    for (auto v : p) id = id * m_ + v;
    return Element{id};
  }
  Payload decode(Element e) const {
    Payload p(static_cast<std::size_t>(d_ * d_));
    std::int64_t x = e.id;
    for (std::size_t i = p.size(); i-- > 0;) {
      p[i] = x % m_;
      x /= m_;
    }
    return p;
  }
  static Payload minor(const Payload& a, int n, int row, int col) {
    Payload out;
    for (int i = 0; i < n; ++i) {
      if (i == row) continue;
      for (int j = 0; j < n; ++j) {
        if (j != col) out.push_back(a[i * n + j]);
      }
    }
    return out;
  }
  std::int64_t determinant(const Payload& a, int n) const {
    if (n == 0) return 1 % m_;
    if (n == 1) return detail::mod(a[0], m_);
    __int128 det = 0;
    for (int j = 0; j < n; ++j) {
      const std::int64_t cof = determinant(minor(a, n, 0, j), n - 1);
      const __int128 term = static_cast<__int128>(a[j]) * cof % m_;
      det += (j % 2) ? -term : term;
    }
    return detail::mod(static_cast<std::int64_t>(det % m_), m_);
  }
  bool unit(std::int64_t x) const { return std::gcd(x, m_) == 1; }
  std::int64_t inverse_mod(std::int64_t x) const {
    std::int64_t g = m_, r = x, s0 = 0, s1 = 1;
    while (r) {
      const std::int64_t q = g / r;
      std::tie(g, r) = std::pair{r, g - q * r};
      std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
    }
    if (g != 1) throw InternalError("determinant not a unit");
    return detail::mod(s0, m_);
  }

  int d_;
  std::int64_t m_;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::int64_t parse_positive(const std::string& tok, const char* what) {
  std::int64_t v;
  try {
    v = GroupOracle::parse_int64(tok);
  } catch (const ParseError&) {
    throw ParseError(std::string("malformed ") + what + " '" + tok + "'");
  }
  if (v < 1) throw ParseError(std::string(what) + " must be positive");
  return v;
}

}  // namespace detail

/// Parses a group spec from colon-separated tokens starting at `pos`,
/// advancing `pos` past the consumed tokens. Lets family specs embed
/// group specs, e.g. `random:sym:4:10`.
inline GroupPtr parse_group_tokens(const std::vector<std::string>& tok, std::size_t& pos,
                                   bool verify_axioms = true);

/// Checks associativity, identity and inverses: exhaustively over all
/// triples when the order is at most 200, on `samples` random triples
/// otherwise. Returns the number of triples checked; throws InternalError
/// naming the first failure.
inline std::size_t verify_group_axioms(const GroupOracle& g, std::size_t samples = 10'000,
                                       std::uint64_t seed = 0x5eed) {
  const Element e = g.identity();
  auto check = [&](Element x, Element y, Element z) {
    if (g.multiply(g.multiply(x, y), z) != g.multiply(x, g.multiply(y, z))) {
      throw InternalError(g.spec() + ": associativity fails");
    }
    if (g.multiply(x, e) != x || g.multiply(e, x) != x) throw InternalError(g.spec() + ": identity fails");
    const Element xi = g.invert(x);
    if (g.multiply(x, xi) != e || g.multiply(xi, x) != e) throw InternalError(g.spec() + ": inverse fails");
  };
  std::size_t checked = 0;
  const auto n = g.order();
  if (n && *n <= 200) {
    const auto all = g.elements();
    for (auto x : all) {
      for (auto y : all) {
        for (auto z : all) check(x, y, z);
      }
    }
    checked = all.size() * all.size() * all.size();
  } else {
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
      check(g.random_element(rng), g.random_element(rng), g.random_element(rng));
    }
    checked = samples;
  }
  if (const auto f = g.invariant_factors()) {
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < f->size(); ++i) {
      if (i + 1 < f->size() && (*f)[i + 1] % (*f)[i] != 0) {
        throw InternalError(g.spec() + ": invariant factors do not form a divisor chain");
      }
      prod *= static_cast<std::uint64_t>((*f)[i]);
    }
    if (!n || prod != *n) throw InternalError(g.spec() + ": invariant factors do not multiply to the order");
  }
  return checked;
}

inline GroupPtr parse_group_tokens(const std::vector<std::string>& tok, std::size_t& pos, bool verify_axioms) {
  auto need = [&](std::size_t k) {
    if (pos + k > tok.size()) throw ParseError("truncated group spec");
  };
  need(1);
  const std::string kind = tok[pos++];
  std::shared_ptr<GroupOracle> g;
  if (kind == "int") {
    g = std::make_shared<IntegerGroup>();
  } else if (kind == "cyclic") {
    need(1);
    const auto n = detail::parse_positive(tok[pos++], "cyclic order");
    g = std::make_shared<AbelianGroup>("cyclic:" + std::to_string(n), std::vector<std::int64_t>{n});
  } else if (kind == "abelian") {
    need(1);
    std::vector<std::int64_t> moduli;
    std::string canon = "abelian:";
    for (const auto& part : detail::split(tok[pos++], ',')) {
      moduli.push_back(detail::parse_positive(part, "abelian factor"));
      canon += (moduli.size() > 1 ? "," : "") + std::to_string(moduli.back());
    }
    g = std::make_shared<AbelianGroup>(canon, moduli);
  } else if (kind == "sym") {
    need(1);
    g = std::make_shared<SymmetricGroup>(static_cast<int>(detail::parse_positive(tok[pos++], "degree")));
  } else if (kind == "dihedral") {
    need(1);
    g = std::make_shared<DihedralGroup>(detail::parse_positive(tok[pos++], "dihedral n"));
  } else if (kind == "heisenberg") {
    need(1);
    g = std::make_shared<HeisenbergGroup>(detail::parse_positive(tok[pos++], "prime"));
  } else if (kind == "quaternion") {
    g = std::make_shared<QuaternionGroup>();
  } else if (kind == "matrix") {
    need(2);
    const auto d = detail::parse_positive(tok[pos++], "matrix dimension");
    const auto m = detail::parse_positive(tok[pos++], "modulus");
    if (d > 64) throw ParseError("matrix dimension too large");
    g = std::make_shared<MatrixGroup>(static_cast<int>(d), m);
  } else {
    throw ParseError("unknown group kind '" + kind + "'");
  }
  if (kind == "sym") g->build_tables();  // decode/compose/encode is the slow path
  if (verify_axioms) verify_group_axioms(*g);
  return g;
}

/// Builds a group from its spec string: `int`, `cyclic:n`,
/// `abelian:n1,...,ns`, `sym:n` (n <= 8), `dihedral:n` (order 2n),
/// `heisenberg:p`, `quaternion`, `matrix:d:m`. The group axioms are
/// checked before returning unless `verify_axioms` is false.
inline GroupPtr build_group(std::string_view spec, bool verify_axioms = true) {
  const auto tok = detail::split(spec, ':');
  std::size_t pos = 0;
  auto g = parse_group_tokens(tok, pos, verify_axioms);
  if (pos != tok.size()) throw ParseError("trailing tokens in group spec '" + std::string(spec) + "'");
  return g;
}

}  // namespace pfree
