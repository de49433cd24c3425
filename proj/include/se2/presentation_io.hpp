#ifndef SE2_PRESENTATION_IO_HPP
#define SE2_PRESENTATION_IO_HPP

// Presentation files:
//
//   # comment to end of line
//   generators z u1 a
//   relator z^3
//   relator (z*a)^2        # ABSORB
//   order a a^-1 z ...     (optional letter ranking, smallest first)
//
// Some comments carry metadata and are written by serialize(): whole-line
// "# ell: N" and "# reduced", and a trailing relator comment naming its family.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "se2/presentation.hpp"
#include "se2/words.hpp"

namespace se2 {

class FormatError : public WordError {
 public:
  FormatError(const std::string& what, std::size_t line, std::size_t column)
      : WordError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Whitespace-separated tokens with their 0-based offsets.
inline std::vector<std::pair<std::string_view, std::size_t>> tokens(std::string_view s) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start), start);
  }
  return out;
}

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  Presentation p;
  std::vector<std::pair<std::string, std::size_t>> order_tokens;  // with line, column
  std::size_t order_line = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::string_view comment;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      comment = detail::trim(line.substr(hash + 1));
      line = line.substr(0, hash);
    }
    const auto toks = detail::tokens(line);
    if (toks.empty()) {
      if (comment.rfind("ell:", 0) == 0) {
        const std::string value(detail::trim(comment.substr(4)));
        try {
          p.ell = static_cast<unsigned>(std::stoul(value));
        } catch (const std::exception&) {
          throw FormatError("bad ell annotation '" + value + "'", line_no, 1);
        }
      } else if (comment == "reduced") {
        p.reduced = true;
      }
      continue;
    }
    const auto [keyword, kcol] = toks.front();
    if (keyword == "generators") {
      if (p.alphabet) throw FormatError("duplicate 'generators' line", line_no, kcol + 1);
      std::vector<std::string> names;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (!is_generator_name(toks[i].first))
          throw FormatError("invalid generator name '" + std::string(toks[i].first) + "'", line_no, toks[i].second + 1);
        names.emplace_back(toks[i].first);
      }
      if (names.empty()) throw FormatError("'generators' needs at least one name", line_no, kcol + 1);
      try {
        p.alphabet = make_alphabet(std::move(names));
      } catch (const WordError& e) {
        throw FormatError(e.what(), line_no, kcol + 1);
      }
    } else if (keyword == "relator") {
      if (!p.alphabet) throw FormatError("'relator' before 'generators'", line_no, kcol + 1);
      const std::size_t body = kcol + keyword.size();
      const std::string_view expr = line.substr(body);
      if (detail::trim(expr).empty()) throw FormatError("'relator' needs a word", line_no, body + 1);
      try {
        WordExpr e = parse_word_expr(expr, *p.alphabet);
        Word w = e.evaluate(p.alphabet);
        Family f = Family::Other;
        if (auto tagged = family_from_name(comment)) f = *tagged;
        p.relators.push_back(Relator{std::move(w), std::move(e), f});
      } catch (const ParseError& e) {
        // ParseError columns are relative to `expr`.
        std::string what = e.what();
        if (auto cut = what.rfind(" (column"); cut != std::string::npos) what.resize(cut);
        throw FormatError(what, line_no, body + e.column());
      }
    } else if (keyword == "order") {
      if (order_line) throw FormatError("duplicate 'order' line", line_no, kcol + 1);
      order_line = line_no;
      for (std::size_t i = 1; i < toks.size(); ++i) order_tokens.emplace_back(toks[i].first, toks[i].second + 1);
      if (order_tokens.empty()) throw FormatError("'order' needs letters", line_no, kcol + 1);
    } else {
      throw FormatError("unknown keyword '" + std::string(keyword) + "'", line_no, kcol + 1);
    }
  }
  if (!p.alphabet) throw FormatError("missing 'generators' line", line_no, 1);

  if (order_line) {
    const Alphabet& a = *p.alphabet;
    std::vector<Letter> letters;
    bool any_inverse = false;
    for (const auto& [tok, col] : order_tokens) {
      std::string_view name = tok;
      bool inverse = false;
      if (name.size() > 3 && name.substr(name.size() - 3) == "^-1") {
        name.remove_suffix(3);
        inverse = any_inverse = true;
      }
      auto g = a.find(name);
      if (!g) throw FormatError("unknown generator '" + std::string(name) + "' in order", order_line, col);
      letters.push_back(make_letter(*g, inverse ? -1 : 1));
    }
    if (!any_inverse) {
      // Generator names only: each is followed by its inverse.
      std::vector<Letter> full;
      for (Letter x : letters) {
        full.push_back(x);
        full.push_back(inverse_letter(x));
      }
      letters = std::move(full);
    }
    try {
      if (letters.size() != a.letter_count()) throw WordError("incomplete");
      p.ranking = LetterRanking::from_order(letters);
    } catch (const WordError&) {
      throw FormatError("'order' must list every generator once (or every letter once)", order_line, 1);
    }
  }
  return p;
}

inline std::string serialize(const Presentation& p) {
  std::ostringstream out;
  if (p.ell) out << "# ell: " << *p.ell << '\n';
  if (p.reduced) out << "# reduced\n";
  out << "generators";
  for (const auto& n : p.alphabet->names()) out << ' ' << n;
  out << '\n';
  for (const auto& r : p.relators) {
    out << "relator " << r.format();
    if (r.family != Family::Other) out << "  # " << family_name(r.family);
    out << '\n';
  }
  if (p.ranking) {
    const auto order = p.ranking->order();
    bool paired = true;
    for (std::size_t i = 0; i < order.size(); i += 2)
      paired = paired && sign_of(order[i]) > 0 && order[i + 1] == inverse_letter(order[i]);
    out << "order";
    for (std::size_t i = 0; i < order.size(); i += paired ? 2 : 1) out << ' ' << p.alphabet->letter_name(order[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace se2

#endif
