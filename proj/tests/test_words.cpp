#include <gtest/gtest.h>

#include <array>
#include <random>

#include "se2/words.hpp"

using namespace se2;

namespace {

AlphabetPtr ab() { return make_alphabet({"a", "b"}); }

std::vector<Letter> random_letters(std::mt19937& rng, std::size_t n, std::size_t gens) {
  std::uniform_int_distribution<Letter> d(0, static_cast<Letter>(2 * gens - 1));
  std::vector<Letter> out(n);
  for (auto& x : out) x = d(rng);
  return out;
}

// Sanov: a -> [[1,2],[0,1]], b -> [[1,0],[2,1]] generate a free subgroup of SL_2(Z),
// so a word is trivial in the free group iff its matrix is the identity.
using Mat = std::array<long long, 4>;
Mat mat_mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}
Mat sanov(std::span<const Letter> w) {
  const Mat gens[4] = {{1, 2, 0, 1}, {1, -2, 0, 1}, {1, 0, 2, 1}, {1, 0, -2, 1}};
  Mat m{1, 0, 0, 1};
  for (Letter x : w) m = mat_mul(m, gens[x]);
  return m;
}

}  // namespace

TEST(Words, ParsesScriptSyntax) {
  auto a = make_alphabet({"z", "u1", "a", "b", "b0"});
  const Word w = parse_word("b0^-1*b*a", a);
  EXPECT_EQ(to_string(w), "b0^-1*b*a");
  EXPECT_EQ(w.length(), 3u);
  EXPECT_EQ(to_string(parse_word("a^2*b^-1*u1*b*z^2", a)), "a^2*b^-1*u1*b*z^2");
  EXPECT_EQ(parse_word("(b0*a^-1)^3", a).length(), 6u);
  EXPECT_EQ(to_string(parse_word("z^-2", a)), "z^-2");
}

TEST(Words, EmptyWordRendersAsOne) {
  auto a = ab();
  EXPECT_TRUE(parse_word("1", a).empty());
  EXPECT_TRUE(parse_word("a*a^-1", a).empty());
  EXPECT_EQ(to_string(Word(a)), "1");
}

TEST(Words, ParseErrorsCarryColumns) {
  auto a = ab();
  try {
    parse_word("a*q", a);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("'q'"), std::string::npos);
  }
  EXPECT_THROW(parse_word("a^", a), ParseError);
  EXPECT_THROW(parse_word("a^x", a), ParseError);
  EXPECT_THROW(parse_word("(a*b", a), ParseError);
  EXPECT_THROW(parse_word("a b", a), ParseError);
  EXPECT_THROW(parse_word("", a), ParseError);
}

TEST(Words, AlphabetRejectsBadNames) {
  EXPECT_THROW(make_alphabet({"a", "a"}), WordError);
  EXPECT_THROW(make_alphabet({"1a"}), WordError);
  EXPECT_FALSE(is_generator_name("b_0"));
  EXPECT_TRUE(is_generator_name("b10"));
}

TEST(Words, FreeReductionMatchesSanovOracle) {
  std::mt19937 rng(7);
  auto a = ab();
  for (int trial = 0; trial < 2000; ++trial) {
    auto raw = random_letters(rng, rng() % 14, 2);
    const Word w(a, raw);
    EXPECT_TRUE(is_freely_reduced(w.letters()));
    EXPECT_EQ(sanov(raw), sanov(w.letters()));
    const bool trivial = sanov(raw) == Mat{1, 0, 0, 1};
    EXPECT_EQ(trivial, w.empty());
  }
}

TEST(Words, GroupLawsOnRandomWords) {
  std::mt19937 rng(11);
  auto a = make_alphabet({"x", "y", "t"});
  for (int trial = 0; trial < 500; ++trial) {
    const Word u(a, random_letters(rng, rng() % 9, 3));
    const Word v(a, random_letters(rng, rng() % 9, 3));
    const Word w(a, random_letters(rng, rng() % 9, 3));
    EXPECT_EQ((u * v) * w, u * (v * w));
    EXPECT_TRUE((u * invert(u)).empty());
    EXPECT_EQ(invert(invert(u)), u);
    EXPECT_EQ(invert(u * v), invert(v) * invert(u));
    EXPECT_EQ(commutator(u, v), u * v * invert(u) * invert(v));
    EXPECT_EQ(power(u, -2), invert(u) * invert(u));
    EXPECT_TRUE(power(u, 0).empty());
    auto eu = exponent_vector(u), ev = exponent_vector(v), euv = exponent_vector(u * v);
    for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(euv[g], eu[g] + ev[g]);
    for (auto e : exponent_vector(commutator(u, v))) EXPECT_EQ(e, 0);
  }
}

TEST(Words, PrintParseRoundTrip) {
  std::mt19937 rng(3);
  auto a = make_alphabet({"z", "u1", "b12"});
  for (int trial = 0; trial < 500; ++trial) {
    const Word w(a, random_letters(rng, rng() % 12, 3));
    EXPECT_EQ(parse_word(to_string(w), a), w);
  }
}

TEST(Words, DefaultRankingIsGeneratorThenInverse) {
  auto a = ab();
  const auto r = LetterRanking::standard(2);
  EXPECT_LT(r.rank(make_letter(0, 1)), r.rank(make_letter(0, -1)));
  EXPECT_LT(r.rank(make_letter(0, -1)), r.rank(make_letter(1, 1)));
  const Word x = parse_word("b", a), y = parse_word("a*a", a);
  EXPECT_EQ(shortlex_compare(x, y, r), std::strong_ordering::less);
  EXPECT_EQ(shortlex_compare(parse_word("a^-1", a), parse_word("b", a), r), std::strong_ordering::less);
}

TEST(Words, CustomRankingMustBePermutation) {
  const std::vector<Letter> bad{0, 0, 1, 2};
  EXPECT_THROW(LetterRanking::from_order(bad), WordError);
  const std::vector<Letter> good{3, 2, 1, 0};
  const auto r = LetterRanking::from_order(good);
  EXPECT_EQ(r.rank(3), 0u);
  EXPECT_EQ(r.order(), good);
}
