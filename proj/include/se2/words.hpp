#ifndef SE2_WORDS_HPP
#define SE2_WORDS_HPP

// Free-group words over a named generator alphabet, plus the textual word
// grammar `atom ('*' atom)*` with `atom := name ('^' int)? | '(' word ')' ('^' int)?`.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace se2 {

/// Signed generator letter. Generator g is encoded as 2g, its inverse as 2g+1.
using Letter = std::uint16_t;

constexpr Letter make_letter(std::size_t gen, int sign) {
  return static_cast<Letter>(2 * gen + (sign < 0 ? 1 : 0));
}
constexpr std::size_t generator_of(Letter x) { return x >> 1; }
constexpr int sign_of(Letter x) { return (x & 1) ? -1 : 1; }
constexpr Letter inverse_letter(Letter x) { return static_cast<Letter>(x ^ 1); }

class WordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in the word grammar. `column` is 1-based.
class ParseError : public WordError {
 public:
  ParseError(const std::string& what, std::size_t column)
      : WordError(what + " (column " + std::to_string(column) + ")"), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

inline bool is_generator_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
}

/// Ordered list of distinct generator names. Immutable after construction.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw WordError("alphabet must be nonempty");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!is_generator_name(names_[i]))
        throw WordError("invalid generator name '" + names_[i] + "'");
      if (!index_.emplace(names_[i], i).second)
        throw WordError("duplicate generator '" + names_[i] + "'");
    }
  }

  std::size_t size() const { return names_.size(); }
  std::size_t letter_count() const { return 2 * names_.size(); }
  const std::string& name(std::size_t gen) const { return names_.at(gen); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string letter_name(Letter x) const {
    return sign_of(x) < 0 ? name(generator_of(x)) + "^-1" : name(generator_of(x));
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> names) {
  return std::make_shared<const Alphabet>(std::move(names));
}

/// Cancel adjacent inverse pairs. Confluent, so the cancellation order is irrelevant.
inline std::vector<Letter> free_reduce(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter x : raw) {
    if (!out.empty() && out.back() == inverse_letter(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

inline bool is_freely_reduced(std::span<const Letter> raw) {
  for (std::size_t i = 1; i < raw.size(); ++i)
    if (raw[i] == inverse_letter(raw[i - 1])) return false;
  return true;
}

/// Total order on the 2n letters. `rank[x]` is the position of letter x.
class LetterRanking {
 public:
  LetterRanking() = default;

  /// Declaration order, each generator followed by its inverse.
  static LetterRanking standard(std::size_t generators) {
    LetterRanking r;
    r.rank_.resize(2 * generators);
    std::iota(r.rank_.begin(), r.rank_.end(), Letter{0});
    return r;
  }

  /// `order` lists all letters from smallest to largest.
  static LetterRanking from_order(std::span<const Letter> order) {
    LetterRanking r;
    r.rank_.assign(order.size(), 0);
    std::vector<bool> seen(order.size(), false);
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] >= order.size() || seen[order[i]])
        throw WordError("letter ranking must be a permutation of all letters");
      seen[order[i]] = true;
      r.rank_[order[i]] = static_cast<Letter>(i);
    }
    return r;
  }

  std::size_t size() const { return rank_.size(); }
  Letter rank(Letter x) const { return rank_[x]; }

  /// Letters from smallest to largest.
  std::vector<Letter> order() const {
    std::vector<Letter> out(rank_.size());
    for (std::size_t x = 0; x < rank_.size(); ++x) out[rank_[x]] = static_cast<Letter>(x);
    return out;
  }

  friend bool operator==(const LetterRanking&, const LetterRanking&) = default;

 private:
  std::vector<Letter> rank_;
};

/// Shortlex comparison of raw letter strings: shorter first, then letterwise by rank.
inline std::strong_ordering shortlex_compare(std::span<const Letter> a, std::span<const Letter> b,
                                             const LetterRanking& ranking) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return ranking.rank(a[i]) <=> ranking.rank(b[i]);
  }
  return std::strong_ordering::equal;
}

/// Freely reduced word over a shared alphabet.
class Word {
 public:
  explicit Word(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {
    if (!alphabet_) throw WordError("word requires an alphabet");
  }

  /// Builds the free reduction of `raw`.
  Word(AlphabetPtr alphabet, std::span<const Letter> raw) : Word(std::move(alphabet)) {
    for (Letter x : raw)
      if (x >= alphabet_->letter_count()) throw WordError("letter out of alphabet range");
    letters_ = free_reduce(raw);
  }

  static Word generator(AlphabetPtr alphabet, std::size_t gen, int exponent = 1) {
    if (gen >= alphabet->size()) throw WordError("generator index out of range");
    std::vector<Letter> raw(static_cast<std::size_t>(std::abs(exponent)),
                            make_letter(gen, exponent));
    return Word(std::move(alphabet), raw);
  }

  static Word generator(AlphabetPtr alphabet, std::string_view name, int exponent = 1) {
    auto g = alphabet->find(name);
    if (!g) throw WordError("unknown generator '" + std::string(name) + "'");
    return generator(std::move(alphabet), *g, exponent);
  }

  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  bool same_alphabet(const Word& other) const {
    return alphabet_ == other.alphabet_ || *alphabet_ == *other.alphabet_;
  }

  /// Structural equality; words over distinct but equal alphabets compare equal.
  friend bool operator==(const Word& a, const Word& b) {
    return a.same_alphabet(b) && a.letters_ == b.letters_;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Letter> letters_;
};

namespace detail {
inline void require_same_alphabet(const Word& a, const Word& b) {
  if (!a.same_alphabet(b)) throw WordError("alphabet mismatch");
}
}  // namespace detail

inline Word concat(const Word& a, const Word& b) {
  detail::require_same_alphabet(a, b);
  std::vector<Letter> raw(a.letters().begin(), a.letters().end());
  raw.insert(raw.end(), b.letters().begin(), b.letters().end());
  return Word(a.alphabet(), raw);
}

inline Word operator*(const Word& a, const Word& b) { return concat(a, b); }

inline Word invert(const Word& w) {
  std::vector<Letter> raw(w.letters().rbegin(), w.letters().rend());
  for (Letter& x : raw) x = inverse_letter(x);
  return Word(w.alphabet(), raw);
}

inline Word power(const Word& w, long long n) {
  const Word base = n < 0 ? invert(w) : w;
  const auto count = static_cast<std::size_t>(n < 0 ? -n : n);
  std::vector<Letter> raw;
  raw.reserve(count * base.length());
  for (std::size_t i = 0; i < count; ++i)
    raw.insert(raw.end(), base.letters().begin(), base.letters().end());
  return Word(w.alphabet(), raw);
}

/// [x,y] = x y x^-1 y^-1.
inline Word commutator(const Word& x, const Word& y) {
  detail::require_same_alphabet(x, y);
  return x * y * invert(x) * invert(y);
}

inline std::strong_ordering shortlex_compare(const Word& a, const Word& b,
                                             const LetterRanking& ranking) {
  return shortlex_compare(a.letters(), b.letters(), ranking);
}

/// Signed letter counts per generator (the image in the abelianization).
inline std::vector<long long> exponent_vector(const Word& w) {
  std::vector<long long> v(w.alphabet()->size(), 0);
  for (Letter x : w.letters()) v[generator_of(x)] += sign_of(x);
  return v;
}

/// Renders letters as `*`-joined runs, e.g. `a^2*b^-1*a`. The empty word renders as `1`.
inline std::string format_letters(const Alphabet& alphabet, std::span<const Letter> letters) {
  if (letters.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < letters.size()) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    if (!out.empty()) out += '*';
    out += alphabet.name(generator_of(letters[i]));
    const long long exponent = static_cast<long long>(j - i) * sign_of(letters[i]);
    if (exponent != 1) out += "^" + std::to_string(exponent);
    i = j;
  }
  return out;
}

inline std::string to_string(const Word& w) { return format_letters(*w.alphabet(), w.letters()); }

/// Parsed word expression. Keeps the written grouping and exponents so a word can be
/// rendered back the way it was written, e.g. `(b0*b1^-1*a^-1*u1)^3`.
class WordExpr {
 public:
  struct Atom {
    std::size_t generator;
    long long exponent;
  };
  struct Group {
    std::vector<WordExpr> factors;
    long long exponent;
  };
  using Factor = std::variant<Atom, Group>;

  WordExpr() = default;
  explicit WordExpr(std::vector<Factor> factors) : factors_(std::move(factors)) {}

  /// Flat run-length expression of a reduced word.
  static WordExpr from_word(const Word& w) {
    std::vector<Factor> factors;
    auto letters = w.letters();
    std::size_t i = 0;
    while (i < letters.size()) {
      std::size_t j = i;
      while (j < letters.size() && letters[j] == letters[i]) ++j;
      factors.push_back(Atom{generator_of(letters[i]),
                             static_cast<long long>(j - i) * sign_of(letters[i])});
      i = j;
    }
    return WordExpr(std::move(factors));
  }

  /// `(inner)^exponent`.
  static WordExpr grouped_power(WordExpr inner, long long exponent) {
    std::vector<WordExpr> f{std::move(inner)};
    return WordExpr({Factor{Group{std::move(f), exponent}}});
  }

  const std::vector<Factor>& factors() const { return factors_; }

  std::vector<Letter> raw_letters() const {
    std::vector<Letter> out;
    append_raw(out);
    return out;
  }

  Word evaluate(AlphabetPtr alphabet) const {
    for (Letter x : raw_letters())
      if (generator_of(x) >= alphabet->size()) throw WordError("generator index out of range");
    return Word(std::move(alphabet), raw_letters());
  }

  std::string format(const Alphabet& alphabet) const {
    if (factors_.empty()) return "1";
    std::string out;
    for (const auto& f : factors_) {
      if (!out.empty()) out += '*';
      if (const auto* a = std::get_if<Atom>(&f)) {
        out += alphabet.name(a->generator);
        if (a->exponent != 1) out += "^" + std::to_string(a->exponent);
      } else {
        const auto& g = std::get<Group>(f);
        out += '(';
        for (std::size_t i = 0; i < g.factors.size(); ++i) {
          if (i) out += '*';
          out += g.factors[i].format(alphabet);
        }
        out += ')';
        if (g.exponent != 1) out += "^" + std::to_string(g.exponent);
      }
    }
    return out;
  }

 private:
  void append_raw(std::vector<Letter>& out) const {
    for (const auto& f : factors_) {
      if (const auto* a = std::get_if<Atom>(&f)) {
        const auto n = static_cast<std::size_t>(a->exponent < 0 ? -a->exponent : a->exponent);
        out.insert(out.end(), n, make_letter(a->generator, a->exponent < 0 ? -1 : 1));
        continue;
      }
      const auto& g = std::get<Group>(f);
      std::vector<Letter> body;
      for (const auto& inner : g.factors) inner.append_raw(body);
      if (g.exponent < 0) {
        std::reverse(body.begin(), body.end());
        for (Letter& x : body) x = inverse_letter(x);
      }
      const auto n = static_cast<std::size_t>(g.exponent < 0 ? -g.exponent : g.exponent);
      for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), body.begin(), body.end());
    }
  }

  std::vector<Factor> factors_;
};

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, const Alphabet& alphabet) : s_(text), alphabet_(alphabet) {}

  WordExpr parse() {
    WordExpr e = product();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  WordExpr product() {
    std::vector<WordExpr::Factor> factors;
    skip_space();
    // A lone `1` denotes the empty word.
    if (pos_ < s_.size() && s_[pos_] == '1') {
      ++pos_;
      return WordExpr{};
    }
    do {
      atom(factors);
    } while (accept('*'));
    return WordExpr(std::move(factors));
  }

  long long exponent() {
    if (!accept('^')) return 1;
    skip_space();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("malformed exponent");
    }
    try {
      return std::stoll(std::string(s_.substr(start, pos_ - start)));
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail("exponent out of range");
    }
  }

  void atom(std::vector<WordExpr::Factor>& factors) {
    skip_space();
    if (pos_ >= s_.size()) fail("expected generator or '('");
    if (s_[pos_] == '(') {
      ++pos_;
      WordExpr inner = product();
      if (!accept(')')) fail("expected ')'");
      std::vector<WordExpr> body{std::move(inner)};
      factors.emplace_back(WordExpr::Group{std::move(body), exponent()});
      return;
    }
    if (!std::isalpha(static_cast<unsigned char>(s_[pos_]))) fail("expected generator or '('");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const auto name = s_.substr(start, pos_ - start);
    auto gen = alphabet_.find(name);
    if (!gen) {
      pos_ = start;
      fail("unknown generator '" + std::string(name) + "'");
    }
    factors.emplace_back(WordExpr::Atom{*gen, exponent()});
  }

  std::string_view s_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline WordExpr parse_word_expr(std::string_view text, const Alphabet& alphabet) {
  return detail::WordParser(text, alphabet).parse();
}

inline Word parse_word(std::string_view text, const AlphabetPtr& alphabet) {
  return parse_word_expr(text, *alphabet).evaluate(alphabet);
}

}  // namespace se2

#endif
