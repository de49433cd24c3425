#ifndef SE2_BARCOMPLEX_HPP
#define SE2_BARCOMPLEX_HPP

// Normalized bar complex of a finitely generated abelian group with Z or Z/m
// coefficients. Groups are written additively internally; a tuple
// [x_1|...|x_s] is stored flat as s consecutive element vectors.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "se2/cyclotomic.hpp"
#include "se2/presentation.hpp"
#include "se2/words.hpp"

namespace se2 {

class BarError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Element = std::vector<std::int64_t>;

/// Z/n_1 x ... x Z/n_k with n_i = 0 meaning a free factor Z.
class AbGroup {
 public:
  AbGroup() = default;
  explicit AbGroup(std::vector<std::int64_t> orders, std::vector<std::string> names = {})
      : orders_(std::move(orders)), names_(std::move(names)) {
    for (auto n : orders_)
      if (n < 0 || n == 1) throw BarError("factor orders must be 0 (free) or at least 2");
    if (names_.empty())
      for (std::size_t i = 0; i < orders_.size(); ++i) names_.push_back("x" + std::to_string(i + 1));
    if (names_.size() != orders_.size()) throw BarError("one name per factor");
  }

  static AbGroup cyclic(std::int64_t n, std::string name = "x") { return AbGroup({n}, {std::move(name)}); }
  static AbGroup free(std::size_t rank) { return AbGroup(std::vector<std::int64_t>(rank, 0)); }

  static AbGroup product(const AbGroup& g, const AbGroup& h) {
    std::vector<std::int64_t> orders = g.orders_;
    orders.insert(orders.end(), h.orders_.begin(), h.orders_.end());
    std::vector<std::string> names;
    for (const auto& n : g.names_) names.push_back(n + "_1");
    for (const auto& n : h.names_) names.push_back(n + "_2");
    return AbGroup(std::move(orders), std::move(names));
  }

  std::size_t rank() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  const std::vector<std::string>& names() const { return names_; }

  Element zero() const { return Element(rank(), 0); }
  Element basis(std::size_t i) const {
    Element e = zero();
    e.at(i) = 1;
    return e;
  }

  void reduce_in_place(std::int64_t* x) const {
    for (std::size_t i = 0; i < rank(); ++i)
      if (orders_[i] > 0) x[i] = ((x[i] % orders_[i]) + orders_[i]) % orders_[i];
  }
  Element reduce(Element x) const {
    check(x);
    reduce_in_place(x.data());
    return x;
  }
  Element add(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Element out(rank());
    for (std::size_t i = 0; i < rank(); ++i) out[i] = x[i] + y[i];
    reduce_in_place(out.data());
    return out;
  }
  Element neg(const Element& x) const { return scale(x, -1); }
  Element scale(const Element& x, std::int64_t k) const {
    check(x);
    Element out(rank());
    for (std::size_t i = 0; i < rank(); ++i) out[i] = k * x[i];
    reduce_in_place(out.data());
    return out;
  }
  static bool is_zero(const std::int64_t* x, std::size_t n) {
    return std::all_of(x, x + n, [](std::int64_t v) { return v == 0; });
  }
  bool is_identity(const Element& x) const { return is_zero(x.data(), x.size()); }

  /// Multiplicative rendering, e.g. "z*u1^2"; the identity is "1".
  std::string format(const std::int64_t* x) const {
    std::string out;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i] == 0) continue;
      if (!out.empty()) out += '*';
      out += names_[i];
      if (x[i] != 1) out += '^' + std::to_string(x[i]);
    }
    return out.empty() ? "1" : out;
  }
  std::string format(const Element& x) const { return format(x.data()); }

  friend bool operator==(const AbGroup& a, const AbGroup& b) { return a.orders_ == b.orders_; }

 private:
  void check(const Element& x) const {
    if (x.size() != rank()) throw BarError("element has the wrong number of components");
  }

  std::vector<std::int64_t> orders_;
  std::vector<std::string> names_;
};

struct TupleHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 14695981039346656037ULL;
    for (auto x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Homogeneous chain sum c * [x_1|...|x_s] with no identity entries.
class BarChain {
 public:
  using Tuple = std::vector<std::int64_t>;
  using Terms = std::unordered_map<Tuple, std::int64_t, TupleHash>;

  BarChain(AbGroup group, std::size_t degree, std::int64_t modulus = 0)
      : group_(std::move(group)), degree_(degree), modulus_(modulus) {
    if (modulus < 0 || modulus == 1) throw BarError("modulus must be 0 (integers) or at least 2");
  }

  /// The generator [ ] of degree 0.
  static BarChain unit(const AbGroup& g, std::int64_t modulus = 0) {
    BarChain c(g, 0, modulus);
    c.add_term({}, 1);
    return c;
  }

  /// c * [x_1|...|x_s]; zero if some x_i is the identity.
  static BarChain term(const AbGroup& g, const std::vector<Element>& xs, std::int64_t coeff = 1,
                       std::int64_t modulus = 0) {
    BarChain c(g, xs.size(), modulus);
    Tuple t;
    for (const auto& x : xs) {
      const Element r = g.reduce(x);
      t.insert(t.end(), r.begin(), r.end());
    }
    c.add_term(std::move(t), coeff);
    return c;
  }

  const AbGroup& group() const { return group_; }
  std::size_t degree() const { return degree_; }
  std::int64_t modulus() const { return modulus_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::int64_t coefficient(const std::vector<Element>& xs) const {
    Tuple t;
    for (const auto& x : xs) {
      const Element r = group_.reduce(x);
      t.insert(t.end(), r.begin(), r.end());
    }
    auto it = terms_.find(t);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Adds c * tuple, dropping tuples with an identity entry and zero coefficients.
  void add_term(Tuple t, std::int64_t c) {
    const std::size_t k = group_.rank();
    if (t.size() != degree_ * k) throw BarError("tuple length does not match the chain degree");
    if (k > 0)
      for (std::size_t i = 0; i < degree_; ++i)
        if (AbGroup::is_zero(t.data() + i * k, k)) return;
    c = normalize(c);
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(t), c);
    if (inserted) return;
    it->second = normalize(it->second + c);
    if (it->second == 0) terms_.erase(it);
  }

  BarChain& operator+=(const BarChain& o) {
    check_compatible(o);
    for (const auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
  }
  BarChain& operator-=(const BarChain& o) {
    check_compatible(o);
    for (const auto& [t, c] : o.terms_) add_term(t, -c);
    return *this;
  }
  friend BarChain operator+(BarChain a, const BarChain& b) { return a += b; }
  friend BarChain operator-(BarChain a, const BarChain& b) { return a -= b; }

  BarChain scaled(std::int64_t k) const {
    BarChain out(group_, degree_, modulus_);
    for (const auto& [t, c] : terms_) out.add_term(t, c * k);
    return out;
  }

  /// Same chain with coefficients reduced mod m (m must divide the current modulus, if any).
  BarChain reduced_mod(std::int64_t m) const {
    if (modulus_ != 0 && modulus_ % m != 0) throw BarError("cannot reduce to a modulus not dividing the current one");
    BarChain out(group_, degree_, m);
    for (const auto& [t, c] : terms_) out.add_term(t, c);
    return out;
  }

  friend bool operator==(const BarChain& a, const BarChain& b) {
    return a.group_ == b.group_ && a.degree_ == b.degree_ && a.modulus_ == b.modulus_ && a.terms_ == b.terms_;
  }

  /// Terms sorted by tuple, rendered as "c*[x1|x2] + ..."; the zero chain is "0".
  std::string format() const {
    std::vector<std::pair<Tuple, std::int64_t>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) return "0";
    std::string out;
    const std::size_t k = group_.rank();
    for (std::size_t n = 0; n < sorted.size(); ++n) {
      if (n) out += " + ";
      out += std::to_string(sorted[n].second) + "*[";
      for (std::size_t i = 0; i < degree_; ++i) {
        if (i) out += '|';
        out += group_.format(sorted[n].first.data() + i * k);
      }
      out += ']';
    }
    return out;
  }

  void check_compatible(const BarChain& o) const {
    if (!(group_ == o.group_)) throw BarError("chains over different groups");
    if (modulus_ != o.modulus_) throw BarError("chains with different coefficient moduli");
    if (degree_ != o.degree_) throw BarError("chains of different degrees");
  }

 private:
  std::int64_t normalize(std::int64_t c) const { return modulus_ ? ((c % modulus_) + modulus_) % modulus_ : c; }

  AbGroup group_;
  std::size_t degree_;
  std::int64_t modulus_;
  Terms terms_;
};

inline BarChain boundary(const BarChain& c) {
  const std::size_t s = c.degree();
  const AbGroup& g = c.group();
  const std::size_t k = g.rank();
  if (s == 0) return BarChain(g, 0, c.modulus());
  BarChain out(g, s - 1, c.modulus());
  for (const auto& [t, coeff] : c.terms()) {
    out.add_term(BarChain::Tuple(t.begin() + static_cast<std::ptrdiff_t>(k), t.end()), coeff);
    for (std::size_t j = 1; j < s; ++j) {
      BarChain::Tuple merged;
      merged.reserve((s - 1) * k);
      merged.insert(merged.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>((j - 1) * k));
      for (std::size_t q = 0; q < k; ++q) merged.push_back(t[(j - 1) * k + q] + t[j * k + q]);
      g.reduce_in_place(merged.data() + (j - 1) * k);
      merged.insert(merged.end(), t.begin() + static_cast<std::ptrdiff_t>((j + 1) * k), t.end());
      out.add_term(std::move(merged), (j % 2 ? -1 : 1) * coeff);
    }
    out.add_term(BarChain::Tuple(t.begin(), t.end() - static_cast<std::ptrdiff_t>(k)), (s % 2 ? -1 : 1) * coeff);
  }
  return out;
}

/// Shuffle product.
inline BarChain shuffle(const BarChain& a, const BarChain& b) {
  if (!(a.group() == b.group())) throw BarError("shuffle of chains over different groups");
  if (a.modulus() != b.modulus()) throw BarError("shuffle of chains with different moduli");
  const std::size_t i = a.degree(), s = b.degree(), n = i + s;
  const std::size_t k = a.group().rank();
  BarChain out(a.group(), n, a.modulus());

  // Each shuffle is the set of output slots taken by the left factor, in increasing order.
  std::vector<std::pair<std::vector<bool>, int>> shuffles;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(i), true);
  std::sort(mask.begin(), mask.end());
  do {
    // Sign = parity of inversions = sum over left entries of (slot - rank).
    std::size_t inversions = 0, seen = 0;
    for (std::size_t p = 0; p < n; ++p)
      if (mask[p]) inversions += p - seen++;
    shuffles.emplace_back(mask, inversions % 2 ? -1 : 1);
  } while (std::next_permutation(mask.begin(), mask.end()));

  BarChain::Tuple t(n * k);
  for (const auto& [ta, ca] : a.terms())
    for (const auto& [tb, cb] : b.terms()) {
      std::int64_t prod = ca * cb;
      if (a.modulus()) prod %= a.modulus();
      for (const auto& [m, sign] : shuffles) {
        std::size_t ia = 0, ib = 0;
        for (std::size_t p = 0; p < n; ++p) {
          const std::int64_t* src = m[p] ? ta.data() + (ia++) * k : tb.data() + (ib++) * k;
          std::copy(src, src + k, t.begin() + static_cast<std::ptrdiff_t>(p * k));
        }
        out.add_term(t, sign * prod);
      }
    }
  return out;
}

/// [x_1] ^ [x_2] ^ ... ^ [x_i]; the empty list gives the unit.
inline BarChain exterior_cycle(const AbGroup& g, const std::vector<Element>& xs, std::int64_t modulus = 0) {
  BarChain out = BarChain::unit(g, modulus);
  for (const auto& x : xs) {
    if (g.is_identity(g.reduce(x))) throw BarError("exterior cycle with an identity entry");
    out = shuffle(out, BarChain::term(g, {x}, 1, modulus));
  }
  return out;
}

/// [zeta]^(s) = sum over i_1..i_s in 1..ell-1 of [zeta^i_1|zeta|...|zeta^i_s|zeta].
inline BarChain divided_power(const AbGroup& g, const Element& zeta, unsigned ell, std::size_t s,
                              std::int64_t modulus = 0) {
  if (s == 0) return BarChain::unit(g, modulus);
  const Element z = g.reduce(zeta);
  if (!g.is_identity(g.scale(z, ell))) throw BarError("divided power of an element whose ell-th power is not 1");
  if (g.is_identity(z)) throw BarError("divided power of the identity");
  const std::size_t k = g.rank();
  std::vector<Element> powers(ell);
  for (unsigned e = 1; e < ell; ++e) powers[e] = g.scale(z, e);

  BarChain out(g, 2 * s, modulus);
  std::vector<unsigned> idx(s, 1);
  BarChain::Tuple t(2 * s * k);
  while (true) {
    for (std::size_t q = 0; q < s; ++q) {
      std::copy(powers[idx[q]].begin(), powers[idx[q]].end(), t.begin() + static_cast<std::ptrdiff_t>(2 * q * k));
      std::copy(z.begin(), z.end(), t.begin() + static_cast<std::ptrdiff_t>((2 * q + 1) * k));
    }
    out.add_term(t, 1);
    std::size_t q = 0;
    while (q < s && ++idx[q] == ell) idx[q++] = 1;
    if (q == s) break;
  }
  return out;
}

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

/// [zeta]^(s) ^ [zeta]^(i) == C(s+i, i) [zeta]^(s+i) over Z, with zeta a generator of Z/ell.
inline bool divided_power_product_check(unsigned ell, std::size_t s, std::size_t i) {
  const AbGroup g = AbGroup::cyclic(ell, "zeta");
  const Element z = g.basis(0);
  const BarChain lhs = shuffle(divided_power(g, z, ell, s), divided_power(g, z, ell, i));
  const BarChain rhs = divided_power(g, z, ell, s + i).scaled(binomial(static_cast<std::int64_t>(s + i),
                                                                      static_cast<std::int64_t>(i)));
  return lhs == rhs;
}

/// boundary([zeta]^(s)) - ell [zeta]^(s-1) ^ [zeta] over Z; zero for every s >= 1.
inline BarChain bockstein_defect(unsigned ell, std::size_t s) {
  if (s == 0) throw BarError("bockstein defect needs s >= 1");
  const AbGroup g = AbGroup::cyclic(ell, "zeta");
  const Element z = g.basis(0);
  const BarChain rhs = shuffle(divided_power(g, z, ell, s - 1), BarChain::term(g, {z})).scaled(ell);
  return boundary(divided_power(g, z, ell, s)) - rhs;
}

/// Homomorphism given by the images of the source basis vectors.
class AbHom {
 public:
  AbHom(AbGroup source, AbGroup target, std::vector<Element> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (images_.size() != source_.rank()) throw BarError("one image per source generator");
    for (std::size_t i = 0; i < images_.size(); ++i) {
      images_[i] = target_.reduce(images_[i]);
      const std::int64_t n = source_.orders()[i];
      if (n > 0 && !target_.is_identity(target_.scale(images_[i], n)))
        throw BarError("image of generator " + std::to_string(i + 1) + " does not respect its order");
    }
  }

  static AbHom identity(const AbGroup& g) {
    std::vector<Element> images;
    for (std::size_t i = 0; i < g.rank(); ++i) images.push_back(g.basis(i));
    return AbHom(g, g, std::move(images));
  }

  const AbGroup& source() const { return source_; }
  const AbGroup& target() const { return target_; }

  void apply(const std::int64_t* x, std::int64_t* out) const {
    std::fill(out, out + target_.rank(), 0);
    for (std::size_t i = 0; i < source_.rank(); ++i)
      for (std::size_t q = 0; q < target_.rank(); ++q) out[q] += x[i] * images_[i][q];
    target_.reduce_in_place(out);
  }
  Element operator()(const Element& x) const {
    const Element r = source_.reduce(x);
    Element out(target_.rank());
    apply(r.data(), out.data());
    return out;
  }

 private:
  AbGroup source_;
  AbGroup target_;
  std::vector<Element> images_;
};

/// Applies `hom` entrywise; tuples acquiring an identity entry drop out.
inline BarChain chain_map(const AbHom& hom, const BarChain& c) {
  if (!(hom.source() == c.group())) throw BarError("chain map source does not match the chain's group");
  const std::size_t ks = hom.source().rank(), kt = hom.target().rank(), s = c.degree();
  BarChain out(hom.target(), s, c.modulus());
  BarChain::Tuple t(s * kt);
  for (const auto& [src, coeff] : c.terms()) {
    for (std::size_t i = 0; i < s; ++i) hom.apply(src.data() + i * ks, t.data() + i * kt);
    out.add_term(t, coeff);
  }
  return out;
}

// GL_1 of Z[xi, 1/ell] as Z/2ell x Z^r on the cyclotomic units -xi, eps_1..eps_r.

inline AbGroup gl1_group(const PrimeContext& ctx) {
  std::vector<std::int64_t> orders{2 * static_cast<std::int64_t>(ctx.ell())};
  std::vector<std::string> names{"mxi"};
  for (unsigned i = 1; i <= ctx.r(); ++i) {
    orders.push_back(0);
    names.push_back("e" + std::to_string(i));
  }
  return AbGroup(std::move(orders), std::move(names));
}

inline Element gl1_element(const UnitExp& u) {
  Element out{static_cast<std::int64_t>(u.j())};
  for (auto a : u.a()) out.push_back(a);
  return out;
}

/// xi = (-xi)^(ell+1).
inline Element gl1_xi(const PrimeContext& ctx) {
  return gl1_group(ctx).scale(gl1_group(ctx).basis(0), ctx.ell() + 1);
}

/// u |-> u^-1 x u.
inline AbHom gl1_t(const PrimeContext& ctx) {
  const AbGroup g = gl1_group(ctx);
  const AbGroup g2 = AbGroup::product(g, g);
  std::vector<Element> images;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    Element e = g2.zero();
    e[i] = -1;
    e[g.rank() + i] = 1;
    images.push_back(e);
  }
  return AbHom(g, g2, std::move(images));
}

/// u x v x w |-> uw x vw.
inline AbHom gl1_rho(const PrimeContext& ctx) {
  const AbGroup g = gl1_group(ctx);
  const AbGroup g2 = AbGroup::product(g, g);
  const AbGroup g3 = AbGroup::product(g2, g);
  const std::size_t k = g.rank();
  std::vector<Element> images;
  for (std::size_t f = 0; f < 3; ++f)
    for (std::size_t i = 0; i < k; ++i) {
      Element e = g2.zero();
      if (f == 0 || f == 2) e[i] = 1;
      if (f == 1 || f == 2) e[k + i] = 1;
      images.push_back(e);
    }
  return AbHom(g3, g2, std::move(images));
}

inline AbHom gl1_inversion(const PrimeContext& ctx) {
  const AbGroup g = gl1_group(ctx);
  std::vector<Element> images;
  for (std::size_t i = 0; i < g.rank(); ++i) images.push_back(g.neg(g.basis(i)));
  return AbHom(g, g, std::move(images));
}

struct ObstructionClass {
  std::size_t s = 0;
  /// Indices into the unit list: 0 is -xi, i is eps_i.
  std::vector<unsigned> subset;
  std::size_t degree = 0;
  std::size_t weight = 0;
  std::size_t j() const { return (subset.size() - s) / 2; }
  friend bool operator==(const ObstructionClass&, const ObstructionClass&) = default;
};

namespace detail {

/// Subsets of {0..n-1} of size k in lexicographic order.
inline std::vector<std::vector<unsigned>> subsets_of_size(unsigned n, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  if (k > n) return out;
  std::vector<unsigned> cur(k);
  for (unsigned i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + static_cast<unsigned>(i)) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (unsigned q = static_cast<unsigned>(i) + 1; q < k; ++q) cur[q] = cur[q - 1] + 1;
  }
  return out;
}

}  // namespace detail

/// All (s, subset) with |subset| = s + 2j, j > 0, ordered by degree, then s, then subset.
inline std::vector<ObstructionClass> enumerate_obstructions(const PrimeContext& ctx) {
  const unsigned units = ctx.r() + 1;
  std::vector<ObstructionClass> out;
  for (unsigned i = 2; i <= units; ++i)
    for (unsigned s = i % 2; s + 2 <= i; s += 2)
      for (auto& subset : detail::subsets_of_size(units, i))
        out.push_back({s, subset, 2 * s + i, s + i});
  std::stable_sort(out.begin(), out.end(), [](const ObstructionClass& a, const ObstructionClass& b) {
    return std::tie(a.degree, a.s, a.subset) < std::tie(b.degree, b.s, b.subset);
  });
  return out;
}

/// sum_{i=2}^{r+1} e(i) C(r+1, i), e(i) = #{0 <= s <= i-2 : s = i mod 2}.
inline std::uint64_t obstruction_count(const PrimeContext& ctx) {
  const std::int64_t units = ctx.r() + 1;
  std::uint64_t total = 0;
  for (std::int64_t i = 2; i <= units; ++i) {
    const std::int64_t e = (i - 2) / 2 + 1;
    total += static_cast<std::uint64_t>(e * binomial(units, i));
  }
  return total;
}

struct Se2Cycle {
  ObstructionClass cls;
  /// Homological degree 3s + 2j in SE_2.
  std::size_t degree = 0;
  BarChain chain;
  /// [e_1, e_2] for the degree-2 cycles.
  std::optional<Word> hopf_word;
};

/// The torus of SE_2 spanned by z (order ell) and u_1..u_r.
inline AbGroup se2_torus(const PrimeContext& ctx) {
  std::vector<std::int64_t> orders{static_cast<std::int64_t>(ctx.ell())};
  std::vector<std::string> names{"z"};
  for (unsigned i = 1; i <= ctx.r(); ++i) {
    orders.push_back(0);
    names.push_back("u" + std::to_string(i));
  }
  return AbGroup(std::move(orders), std::move(names));
}

/// [z]^(s) ^ <e_1..e_i> with coefficients mod ell, one per obstruction class
/// (subset index 0 is z, index i is u_i).
inline std::vector<Se2Cycle> se2_obstruction_cycles(const PrimeContext& ctx) {
  const AbGroup g = se2_torus(ctx);
  const auto ell = static_cast<std::int64_t>(ctx.ell());
  const Presentation p = generate(ctx);
  std::vector<Se2Cycle> out;
  for (const auto& cls : enumerate_obstructions(ctx)) {
    std::vector<Element> xs;
    for (unsigned v : cls.subset) xs.push_back(g.basis(v));
    BarChain chain = shuffle(divided_power(g, g.basis(0), ctx.ell(), cls.s, ell), exterior_cycle(g, xs, ell));
    Se2Cycle c{cls, 3 * cls.s + 2 * cls.j(), std::move(chain), std::nullopt};
    if (c.degree == 2) {
      // Generators z, u_1.. are the first r+1 letters of the alphabet.
      c.hopf_word = commutator(Word::generator(p.alphabet, cls.subset[0]), Word::generator(p.alphabet, cls.subset[1]));
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct Gl1BasisCycle {
  std::size_t s = 0;
  std::vector<unsigned> subset;
  BarChain chain;
};

/// Cycles [xi]^(s) ^ <v_1..v_i> with 2s + i = d over the units -xi, eps_1..eps_r, mod ell.
inline std::vector<Gl1BasisCycle> homology_basis_gl1(const PrimeContext& ctx, std::size_t d) {
  const AbGroup g = gl1_group(ctx);
  const auto ell = static_cast<std::int64_t>(ctx.ell());
  const unsigned units = ctx.r() + 1;
  std::vector<Gl1BasisCycle> out;
  for (std::size_t s = 0; 2 * s <= d; ++s) {
    const std::size_t i = d - 2 * s;
    if (i > units) continue;
    for (auto& subset : detail::subsets_of_size(units, static_cast<unsigned>(i))) {
      std::vector<Element> xs;
      for (unsigned v : subset) xs.push_back(g.basis(v));
      BarChain chain = shuffle(divided_power(g, gl1_xi(ctx), ctx.ell(), s, ell), exterior_cycle(g, xs, ell));
      out.push_back({s, subset, std::move(chain)});
    }
  }
  return out;
}

}  // namespace se2

#endif
