#ifndef SE2_PRESENTATION_HPP
#define SE2_PRESENTATION_HPP

// Finite presentation of SE_2(ell) on the generators
//   z, u1..ur, a, b, b0..b(2r), w
// with the definitional relators for b_t and w followed by the main relator
// families, in a fixed canonical order.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "se2/cyclotomic.hpp"
#include "se2/words.hpp"

namespace se2 {

enum class Family { DefB, DefW, Units, AA, Absorb, BB, Cyclo, Elf, Cui, Last, Other };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::DefB: return "DEF_B";
    case Family::DefW: return "DEF_W";
    case Family::Units: return "UNITS";
    case Family::AA: return "AA";
    case Family::Absorb: return "ABSORB";
    case Family::BB: return "BB";
    case Family::Cyclo: return "CYCLO";
    case Family::Elf: return "ELF";
    case Family::Cui: return "CUI";
    case Family::Last: return "LAST";
    case Family::Other: return "OTHER";
  }
  return "OTHER";
}

inline std::optional<Family> family_from_name(std::string_view s) {
  for (Family f : {Family::DefB, Family::DefW, Family::Units, Family::AA, Family::Absorb, Family::BB,
                   Family::Cyclo, Family::Elf, Family::Cui, Family::Last, Family::Other})
    if (family_name(f) == s) return f;
  return std::nullopt;
}

inline bool is_definitional(Family f) { return f == Family::DefB || f == Family::DefW; }

struct Relator {
  Word word;
  /// How the relator is written; evaluates to `word`.
  WordExpr display;
  Family family = Family::Other;

  std::string format() const { return display.format(*word.alphabet()); }
};

class PresentationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Presentation {
  AlphabetPtr alphabet;
  std::vector<Relator> relators;
  /// Set for presentations generated from a prime.
  std::optional<unsigned> ell;
  bool reduced = false;
  /// Optional letter ranking override carried by presentation files.
  std::optional<LetterRanking> ranking;

  std::vector<Word> words() const {
    std::vector<Word> out;
    out.reserve(relators.size());
    for (const auto& r : relators) out.push_back(r.word);
    return out;
  }

  std::size_t main_relator_count() const {
    std::size_t n = 0;
    for (const auto& r : relators) n += !is_definitional(r.family);
    return n;
  }

  std::size_t count(Family f) const {
    std::size_t n = 0;
    for (const auto& r : relators) n += r.family == f;
    return n;
  }
};

/// Generator layout of the expanded SE_2 presentation.
struct Se2Layout {
  unsigned r;
  std::size_t z() const { return 0; }
  std::size_t u(unsigned i) const { return i; }  // 1 <= i <= r
  std::size_t a() const { return r + 1; }
  std::size_t b() const { return r + 2; }
  std::size_t bt(unsigned t) const { return r + 3 + t; }  // 0 <= t <= 2r
  std::size_t w() const { return 3 * r + 4; }
  std::size_t generator_count() const { return 3 * r + 5; }

  std::vector<std::string> names() const {
    std::vector<std::string> out{"z"};
    for (unsigned i = 1; i <= r; ++i) out.push_back("u" + std::to_string(i));
    out.push_back("a");
    out.push_back("b");
    for (unsigned t = 0; t <= 2 * r; ++t) out.push_back("b" + std::to_string(t));
    out.push_back("w");
    return out;
  }
};

/// 6 + 6.5r + 2.5r^2 + 2^r, computed in integers.
inline std::size_t theorem_main_relator_count(unsigned r) {
  return (12 + 13 * r + 5 * r * r) / 2 + (std::size_t{1} << r);
}

namespace detail {

/// Accumulates `gen^exp` factors into both a raw letter string and a display expression.
class RelatorBuilder {
 public:
  RelatorBuilder& pow(std::size_t gen, long long exponent) {
    if (exponent == 0) return *this;
    auto& f = factors_;
    if (!f.empty()) {
      if (auto* last = std::get_if<WordExpr::Atom>(&f.back()); last && last->generator == gen) {
        last->exponent += exponent;
        if (last->exponent == 0) f.pop_back();
        return *this;
      }
    }
    f.push_back(WordExpr::Atom{gen, exponent});
    return *this;
  }

  WordExpr expr() const { return WordExpr(factors_); }

 private:
  std::vector<WordExpr::Factor> factors_;
};

inline std::vector<std::set<unsigned>> nonempty_subsets_by_size(unsigned r) {
  std::vector<std::set<unsigned>> out;
  for (unsigned size = 1; size <= r; ++size) {
    std::vector<bool> pick(r, false);
    std::fill(pick.begin(), pick.begin() + size, true);
    do {
      std::set<unsigned> s;
      for (unsigned i = 0; i < r; ++i)
        if (pick[i]) s.insert(i + 1);
      out.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

}  // namespace detail

/// Expanded presentation of SE_2(ell) in canonical relator order.
inline Presentation generate(const PrimeContext& ctx) {
  const unsigned r = ctx.r();
  const unsigned ell = ctx.ell();
  const Se2Layout g{r};
  Presentation p;
  p.alphabet = make_alphabet(g.names());
  p.ell = ell;

  auto emit = [&](const WordExpr& e, Family f) {
    p.relators.push_back(Relator{e.evaluate(p.alphabet), e, f});
  };
  auto commutator_expr = [](std::size_t x, long long ex, std::size_t y) {
    detail::RelatorBuilder rb;
    rb.pow(x, ex).pow(y, 1).pow(x, -ex).pow(y, -1);
    return rb.expr();
  };
  const auto zpow = [&](long long t) { return static_cast<long long>(ctx.mod(t)); };

  // b_t^-1 z^{rt} b z^{rt} a
  for (unsigned t = 0; t <= 2 * r; ++t) {
    detail::RelatorBuilder rb;
    const long long e = zpow(static_cast<long long>(r) * t);
    rb.pow(g.bt(t), -1).pow(g.z(), e).pow(g.b(), 1).pow(g.z(), e).pow(g.a(), 1);
    emit(rb.expr(), Family::DefB);
  }
  {
    detail::RelatorBuilder rb;
    rb.pow(g.w(), -1).pow(g.z(), smallest_c(ctx));
    for (unsigned i = 1; i <= r; ++i) rb.pow(g.u(i), 1);
    emit(rb.expr(), Family::DefW);
  }

  {
    detail::RelatorBuilder rb;
    rb.pow(g.z(), ell);
    emit(rb.expr(), Family::Units);
  }
  for (unsigned i = 1; i <= r; ++i) emit(commutator_expr(g.z(), 1, g.u(i)), Family::Units);
  for (unsigned i = 1; i <= r; ++i)
    for (unsigned j = i + 1; j <= r; ++j) emit(commutator_expr(g.u(i), 1, g.u(j)), Family::Units);

  {
    detail::RelatorBuilder rb;
    rb.pow(g.a(), 4);
    emit(rb.expr(), Family::AA);
  }
  emit(commutator_expr(g.a(), 2, g.z()), Family::AA);
  for (unsigned i = 1; i <= r; ++i) emit(commutator_expr(g.a(), 2, g.u(i)), Family::AA);

  auto absorb = [&](std::size_t x) {
    detail::RelatorBuilder rb;
    rb.pow(x, 1).pow(g.a(), 1).pow(x, 1).pow(g.a(), -1);
    emit(rb.expr(), Family::Absorb);
  };
  absorb(g.z());
  for (unsigned i = 1; i <= r; ++i) absorb(g.u(i));

  for (unsigned s = 0; s <= 2 * r; ++s)
    for (unsigned t = s + 1; t <= 2 * r; ++t) emit(commutator_expr(g.bt(s), 1, g.bt(t)), Family::BB);

  {
    detail::RelatorBuilder rb;
    rb.pow(g.b(), 3).pow(g.a(), -2);
    emit(rb.expr(), Family::Cyclo);
  }
  {
    detail::RelatorBuilder rb;
    for (unsigned t = 0; t <= 2 * r; ++t) rb.pow(g.bt(t), 1);
    rb.pow(g.a(), -2);
    emit(rb.expr(), Family::Cyclo);
  }

  const long long parity = (r % 2 == 0) ? 1 : -1;
  for (unsigned t = 0; t <= 2 * r; ++t) {
    detail::RelatorBuilder rb;
    rb.pow(g.bt(t), -static_cast<long long>(ell)).pow(g.w(), -1).pow(g.bt(t), parity).pow(g.w(), 1);
    emit(rb.expr(), Family::Elf);
  }

  for (const auto& subset : detail::nonempty_subsets_by_size(r)) {
    const auto coeffs = c_coeffs(ctx, subset);
    detail::RelatorBuilder rb;
    for (unsigned t = 0; t <= 2 * r; ++t) rb.pow(g.bt(t), coeffs[t].get_si());
    rb.pow(g.a(), -1);
    for (unsigned i : subset) rb.pow(g.u(i), 1);
    emit(WordExpr::grouped_power(rb.expr(), 3), Family::Cui);
  }

  for (unsigned i = 1; i <= r; ++i) {
    const long long ri = static_cast<long long>(r) * i;
    detail::RelatorBuilder rb;
    rb.pow(g.a(), 2).pow(g.b(), -1).pow(g.u(i), 1).pow(g.b(), 1).pow(g.z(), zpow(-ri));
    rb.pow(g.b(), -1).pow(g.bt(0), -1).pow(g.z(), zpow(ri)).pow(g.b(), 1);
    rb.pow(g.z(), zpow(-static_cast<long long>(i))).pow(g.u(i), 1);
    emit(rb.expr(), Family::Last);
  }
  return p;
}

inline Presentation generate(unsigned ell) { return generate(PrimeContext(ell)); }

/// Eliminates b_t and w by substituting their definitions, leaving the r+3
/// generators z, u1..ur, a, b.
inline Presentation reduced_form(const Presentation& p) {
  if (!p.ell || p.reduced) throw PresentationError("reduced_form needs an expanded SE_2 presentation");
  const PrimeContext ctx(*p.ell);
  const unsigned r = ctx.r();
  const Se2Layout g{r};

  std::vector<std::string> names{"z"};
  for (unsigned i = 1; i <= r; ++i) names.push_back("u" + std::to_string(i));
  names.push_back("a");
  names.push_back("b");
  auto small = make_alphabet(names);

  // Image of every expanded generator as a raw letter string over `small`.
  std::vector<std::vector<Letter>> image(g.generator_count());
  for (unsigned i = 0; i <= r + 2; ++i) image[i] = {make_letter(i, 1)};
  for (unsigned t = 0; t <= 2 * r; ++t) {
    const unsigned e = ctx.mod(static_cast<long long>(r) * t);
    auto& im = image[g.bt(t)];
    im.insert(im.end(), e, make_letter(0, 1));
    im.push_back(make_letter(r + 2, 1));
    im.insert(im.end(), e, make_letter(0, 1));
    im.push_back(make_letter(r + 1, 1));
  }
  {
    auto& im = image[g.w()];
    im.insert(im.end(), smallest_c(ctx), make_letter(0, 1));
    for (unsigned i = 1; i <= r; ++i) im.push_back(make_letter(i, 1));
  }

  auto substitute = [&](std::span<const Letter> letters) {
    std::vector<Letter> raw;
    for (Letter x : letters) {
      const auto& im = image[generator_of(x)];
      if (sign_of(x) > 0) {
        raw.insert(raw.end(), im.begin(), im.end());
      } else {
        for (auto it = im.rbegin(); it != im.rend(); ++it) raw.push_back(inverse_letter(*it));
      }
    }
    return Word(small, raw);
  };

  Presentation out;
  out.alphabet = small;
  out.ell = p.ell;
  out.reduced = true;
  for (const auto& rel : p.relators) {
    if (is_definitional(rel.family)) continue;
    Word word = substitute(rel.word.letters());
    WordExpr display = WordExpr::from_word(word);
    if (rel.family == Family::Cui && rel.display.factors().size() == 1) {
      if (const auto* grp = std::get_if<WordExpr::Group>(&rel.display.factors().front())) {
        std::vector<Letter> base_raw;
        for (const auto& f : grp->factors) {
          auto part = f.raw_letters();
          base_raw.insert(base_raw.end(), part.begin(), part.end());
        }
        display = WordExpr::grouped_power(WordExpr::from_word(substitute(base_raw)), grp->exponent);
      }
    }
    out.relators.push_back(Relator{std::move(word), std::move(display), rel.family});
  }
  return out;
}

struct DerivedFamilies {
  std::vector<Word> k;
  std::vector<Word> k_pow_ell;
  std::vector<Word> fk;
  std::vector<Word> ff;
};

/// k, its ell-th powers, [g, k_j] (generator-major) and [g_i, g_j] for i < j.
inline DerivedFamilies derived_families(const Presentation& p) {
  if (!p.ell) throw PresentationError("derived families need a prime");
  DerivedFamilies d;
  d.k = p.words();
  for (const auto& w : d.k) d.k_pow_ell.push_back(power(w, *p.ell));
  for (std::size_t gen = 0; gen < p.alphabet->size(); ++gen) {
    const Word x = Word::generator(p.alphabet, gen);
    for (const auto& w : d.k) d.fk.push_back(commutator(x, w));
  }
  for (std::size_t i = 0; i < p.alphabet->size(); ++i)
    for (std::size_t j = i + 1; j < p.alphabet->size(); ++j)
      d.ff.push_back(commutator(Word::generator(p.alphabet, i), Word::generator(p.alphabet, j)));
  return d;
}

/// 1-based positions in k of the relators that generate K modulo [F,K]K^5 at ell = 5.
inline constexpr std::array<std::size_t, 11> kEll5SublistE{5, 6, 15, 16, 17, 30, 31, 32, 33, 34, 37};
/// The complementary positions, in the order of the reference verification script.
inline constexpr std::array<std::size_t, 28> kEll5SublistN{1,  2,  3,  4,  7,  8,  9,  10, 11, 12,
                                                           13, 14, 18, 19, 20, 21, 22, 23, 24, 25,
                                                           26, 27, 28, 29, 35, 36, 39, 38};

struct Sublists {
  std::vector<Word> e;
  std::vector<Word> n;
};

inline Sublists sublist_e(const Presentation& p) {
  if (p.ell != 5u || p.reduced || p.relators.size() != 39)
    throw PresentationError("sublist e is only known for the expanded ell = 5 presentation");
  Sublists s;
  for (std::size_t i : kEll5SublistE) s.e.push_back(p.relators[i - 1].word);
  for (std::size_t i : kEll5SublistN) s.n.push_back(p.relators[i - 1].word);
  return s;
}

struct HopfTarget {
  std::size_t first;
  std::size_t second;
  Word word;
  /// 1-based position in k when the commutator is itself a relator.
  std::optional<std::size_t> position;
};

/// [e1, e2] for distinct e1, e2 in {z, u1, .., ur}.
inline std::vector<HopfTarget> hopf_targets(const Presentation& p) {
  if (!p.ell) throw PresentationError("hopf targets need a prime");
  const unsigned r = PrimeContext(*p.ell).r();
  std::vector<HopfTarget> out;
  for (std::size_t i = 0; i <= r; ++i) {
    for (std::size_t j = i + 1; j <= r; ++j) {
      HopfTarget t{i, j, commutator(Word::generator(p.alphabet, i), Word::generator(p.alphabet, j)),
                   std::nullopt};
      for (std::size_t k = 0; k < p.relators.size(); ++k) {
        if (p.relators[k].word == t.word) {
          t.position = k + 1;
          break;
        }
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace se2

#endif
