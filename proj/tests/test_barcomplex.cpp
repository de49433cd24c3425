#include <gtest/gtest.h>

#include <bit>
#include <map>
#include <random>

#include "se2/barcomplex.hpp"

using namespace se2;

namespace se2 {
void PrintTo(const BarChain& c, std::ostream* os) { *os << c.format(); }
}  // namespace se2

namespace {

const unsigned kPrimes[] = {3, 5, 7, 11, 13};

// Random group of order at most 27 when finite, sometimes with a free factor.
AbGroup random_group(std::mt19937& rng) {
  static const std::vector<std::vector<std::int64_t>> shapes{
      {2}, {3}, {5}, {2, 2}, {2, 3}, {3, 3}, {2, 2, 2}, {3, 9}, {27}, {4, 6}, {0}, {0, 3}, {2, 0}, {0, 0}};
  return AbGroup(shapes[rng() % shapes.size()]);
}

Element random_element(std::mt19937& rng, const AbGroup& g) {
  Element e(g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i) {
    const std::int64_t n = g.orders()[i];
    e[i] = n ? static_cast<std::int64_t>(rng() % n) : static_cast<std::int64_t>(rng() % 5) - 2;
  }
  return e;
}

BarChain random_chain(std::mt19937& rng, const AbGroup& g, std::size_t degree, std::int64_t modulus,
                      std::size_t terms = 4) {
  BarChain c(g, degree, modulus);
  for (std::size_t n = 0; n < terms; ++n) {
    std::vector<Element> xs;
    for (std::size_t i = 0; i < degree; ++i) xs.push_back(random_element(rng, g));
    c += BarChain::term(g, xs, static_cast<std::int64_t>(rng() % 7) - 3, modulus);
  }
  return c;
}

std::int64_t sign(std::size_t n) { return n % 2 ? -1 : 1; }

std::uint64_t choose(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t out = 1;
  for (unsigned i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Oracle: does target = boundary(c) mod p for some c spanned by `basis`?
// Gaussian elimination over F_p on the boundary vectors.
bool is_boundary_mod(const BarChain& target, const std::vector<BarChain>& basis, std::int64_t p) {
  std::map<BarChain::Tuple, std::size_t> index;
  auto vec = [&](const BarChain& c) {
    std::map<std::size_t, std::int64_t> v;
    for (const auto& [t, coeff] : c.terms()) {
      auto [it, ins] = index.try_emplace(t, index.size());
      v[it->second] = ((coeff % p) + p) % p;
    }
    return v;
  };
  std::vector<std::map<std::size_t, std::int64_t>> rows;
  for (const auto& b : basis) rows.push_back(vec(boundary(b)));
  auto residual = vec(target);
  auto inv = [&](std::int64_t a) {
    std::int64_t r = 1;
    for (std::int64_t e = p - 2; e > 0; --e) r = r * a % p;
    return r;
  };
  // Row-reduce the boundary vectors, then reduce the target against them.
  std::vector<std::pair<std::size_t, std::map<std::size_t, std::int64_t>>> pivots;
  auto eliminate = [&](std::map<std::size_t, std::int64_t>& v) {
    for (const auto& [col, row] : pivots) {
      auto it = v.find(col);
      if (it == v.end() || it->second == 0) continue;
      const std::int64_t f = it->second;
      for (const auto& [c, x] : row) v[c] = (((v[c] - f * x) % p) + p) % p;
    }
    std::erase_if(v, [](const auto& kv) { return kv.second == 0; });
  };
  for (auto& row : rows) {
    eliminate(row);
    if (row.empty()) continue;
    const auto [col, lead] = *row.begin();
    const std::int64_t s = inv(lead);
    for (auto& [c, x] : row) x = x * s % p;
    pivots.emplace_back(col, row);
  }
  eliminate(residual);
  return residual.empty();
}

// All degree-n tuples over the given non-identity elements.
std::vector<BarChain> all_tuples(const AbGroup& g, const std::vector<Element>& elems, std::size_t n, std::int64_t m) {
  std::vector<BarChain> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<Element> xs;
    for (auto i : idx) xs.push_back(elems[i]);
    out.push_back(BarChain::term(g, xs, 1, m));
    std::size_t q = 0;
    while (q < n && ++idx[q] == elems.size()) idx[q++] = 0;
    if (q == n) break;
  }
  return out;
}

}  // namespace

TEST(Boundary, SmallDegrees) {
  const AbGroup g({0, 0}, {"x", "y"});
  const Element x = g.basis(0), y = g.basis(1);
  EXPECT_TRUE(boundary(BarChain::term(g, {x})).is_zero());
  const BarChain expect = BarChain::term(g, {y}) - BarChain::term(g, {g.add(x, y)}) + BarChain::term(g, {x});
  EXPECT_EQ(boundary(BarChain::term(g, {x, y})), expect);
  // [x x^-1] = [1] is dropped.
  EXPECT_EQ(boundary(BarChain::term(g, {x, g.neg(x)})), BarChain::term(g, {g.neg(x)}) + BarChain::term(g, {x}));
  EXPECT_TRUE(BarChain::term(g, {x, g.zero()}).is_zero());
}

TEST(Boundary, SquaresToZeroOnRandomChains) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const AbGroup g = random_group(rng);
    const std::int64_t m = trial % 2 ? 0 : (trial % 4 == 0 ? 3 : 5);
    const BarChain c = random_chain(rng, g, 2 + rng() % 3, m);
    ASSERT_TRUE(boundary(boundary(c)).is_zero()) << c.format();
  }
}

TEST(Shuffle, LowDegreeExamples) {
  const AbGroup g({0, 0, 0}, {"x", "y", "z"});
  const Element x = g.basis(0), y = g.basis(1), z = g.basis(2);
  EXPECT_EQ(shuffle(BarChain::term(g, {x}), BarChain::term(g, {y})), BarChain::term(g, {x, y}) - BarChain::term(g, {y, x}));
  EXPECT_EQ(shuffle(BarChain::term(g, {x}), BarChain::term(g, {y, z})),
            BarChain::term(g, {x, y, z}) - BarChain::term(g, {y, x, z}) + BarChain::term(g, {y, z, x}));
  EXPECT_EQ(shuffle(BarChain::unit(g), BarChain::term(g, {x, y})), BarChain::term(g, {x, y}));
  EXPECT_EQ(exterior_cycle(g, {x}), BarChain::term(g, {x}));
  EXPECT_EQ(exterior_cycle(g, {}), BarChain::unit(g));
  EXPECT_THROW(exterior_cycle(g, {g.zero()}), BarError);
  EXPECT_THROW(shuffle(BarChain::term(g, {x}), BarChain::term(g, {x}, 1, 3)), BarError);
  EXPECT_THROW(shuffle(BarChain::term(g, {x}), BarChain::term(AbGroup::cyclic(2), {{1}})), BarError);
}

TEST(Shuffle, GradedCommutativeAssociativeAndLeibniz) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const AbGroup g = random_group(rng);
    const std::int64_t m = trial % 2 ? 0 : 3;
    const std::size_t da = 1 + rng() % 2, db = 1 + rng() % 2, dc = 1;
    const BarChain a = random_chain(rng, g, da, m, 3), b = random_chain(rng, g, db, m, 3),
                   c = random_chain(rng, g, dc, m, 2);
    EXPECT_EQ(shuffle(a, b), shuffle(b, a).scaled(sign(da * db)));
    EXPECT_EQ(shuffle(shuffle(a, b), c), shuffle(a, shuffle(b, c)));
    EXPECT_EQ(boundary(shuffle(a, b)), shuffle(boundary(a), b) + shuffle(a, boundary(b)).scaled(sign(da)));
  }
}

TEST(Shuffle, ExteriorCyclesAreCyclesAndSkewSymmetric) {
  const AbGroup g({3, 0, 0}, {"z", "u1", "u2"});
  const Element z = g.basis(0), u1 = g.basis(1), u2 = g.basis(2);
  EXPECT_EQ(exterior_cycle(g, {z, u1}), BarChain::term(g, {z, u1}) - BarChain::term(g, {u1, z}));
  EXPECT_TRUE(boundary(exterior_cycle(g, {z, u1})).is_zero());
  EXPECT_TRUE(boundary(exterior_cycle(g, {z, u1, u2})).is_zero());
  EXPECT_EQ(exterior_cycle(g, {u1, z, u2}), exterior_cycle(g, {z, u1, u2}).scaled(-1));
  EXPECT_TRUE(exterior_cycle(g, {u1, u1}).is_zero());
}

TEST(DividedPower, ExpansionAndErrors) {
  const AbGroup g = AbGroup::cyclic(3, "q");
  const Element q = g.basis(0);
  EXPECT_EQ(divided_power(g, q, 3, 0), BarChain::unit(g));
  EXPECT_EQ(divided_power(g, q, 3, 1), BarChain::term(g, {q, q}) + BarChain::term(g, {g.scale(q, 2), q}));
  EXPECT_EQ(divided_power(AbGroup::cyclic(5), {1}, 5, 3).size(), 64u);
  EXPECT_THROW(divided_power(AbGroup::cyclic(9), {1}, 3, 1), BarError);
  EXPECT_THROW(divided_power(g, g.zero(), 3, 1), BarError);
  EXPECT_THROW(divided_power(AbGroup::free(1), {1}, 3, 1), BarError);
  // A non-generator of order ell is fine.
  EXPECT_NO_THROW(divided_power(AbGroup::cyclic(9), {3}, 3, 2));
}

TEST(DividedPower, ProductCoefficientByHand) {
  // [q]^(1) ^ [q]^(1) has [q|q|q|q] from all six (2,2)-shuffles with signs
  // + - + + - +, so coefficient 2 = C(2,1).
  const AbGroup g = AbGroup::cyclic(3);
  const Element q = g.basis(0);
  const BarChain prod = shuffle(divided_power(g, q, 3, 1), divided_power(g, q, 3, 1));
  EXPECT_EQ(prod.coefficient({q, q, q, q}), 2);
  EXPECT_EQ(prod, divided_power(g, q, 3, 2).scaled(2));
}

TEST(DividedPower, BinomialProductRule) {
  for (unsigned ell : {3u, 5u})
    for (std::size_t s = 0; s <= 6; ++s)
      for (std::size_t i = 0; s + i <= 6; ++i) EXPECT_TRUE(divided_power_product_check(ell, s, i)) << ell << ' ' << s << ' ' << i;
  EXPECT_EQ(binomial(6, 3), 20);
  EXPECT_EQ(binomial(3, 5), 0);
}

TEST(DividedPower, BoundaryIsEllTimesLowerProduct) {
  for (unsigned ell : {3u, 5u})
    for (std::size_t s = 1; s <= 3; ++s) EXPECT_TRUE(bockstein_defect(ell, s).is_zero()) << ell << ' ' << s;
  EXPECT_THROW(bockstein_defect(3, 0), BarError);
  // Mod ell the divided powers are cycles.
  const AbGroup g = AbGroup::cyclic(5);
  for (std::size_t s = 1; s <= 3; ++s) EXPECT_TRUE(boundary(divided_power(g, {1}, 5, s, 5)).is_zero());
}

TEST(ChainMap, IdentityAndT) {
  const PrimeContext ctx(5);
  const AbGroup g = gl1_group(ctx);
  std::mt19937 rng(9);
  const BarChain c = random_chain(rng, g, 2, 0);
  EXPECT_EQ(chain_map(AbHom::identity(g), c), c);

  const Element u = gl1_element(UnitExp::eps(ctx, 1));
  const AbHom t = gl1_t(ctx);
  Element image = g.neg(u);
  image.insert(image.end(), u.begin(), u.end());
  EXPECT_EQ(chain_map(t, BarChain::term(g, {u})), BarChain::term(t.target(), {image}));

  const AbHom rho = gl1_rho(ctx);
  const Element v = gl1_element(UnitExp::minus_xi(ctx)), w = g.add(u, u);
  Element uvw, expect = g.add(u, w);
  for (const auto& x : {u, v, w}) uvw.insert(uvw.end(), x.begin(), x.end());
  const Element vw = g.add(v, w);
  expect.insert(expect.end(), vw.begin(), vw.end());
  EXPECT_EQ(rho(uvw), expect);
  EXPECT_THROW(chain_map(t, BarChain::term(AbGroup::cyclic(2), {{1}})), BarError);
  EXPECT_THROW(AbHom(AbGroup::cyclic(2), AbGroup::cyclic(3), {{1}}), BarError);
}

TEST(ChainMap, CommutesWithBoundary) {
  std::mt19937 rng(17);
  for (unsigned ell : {3u, 5u}) {
    const PrimeContext ctx(ell);
    const AbGroup g = gl1_group(ctx);
    const AbGroup g3 = AbGroup::product(AbGroup::product(g, g), g);
    for (int trial = 0; trial < 40; ++trial) {
      const std::int64_t m = trial % 2 ? 0 : ell;
      const BarChain c = random_chain(rng, g, 1 + rng() % 3, m);
      for (const AbHom& h : {gl1_t(ctx), gl1_inversion(ctx)})
        EXPECT_EQ(boundary(chain_map(h, c)), chain_map(h, boundary(c)));
      const BarChain c3 = random_chain(rng, g3, 1 + rng() % 3, m);
      EXPECT_EQ(boundary(chain_map(gl1_rho(ctx), c3)), chain_map(gl1_rho(ctx), boundary(c3)));
    }
  }
  // Arbitrary homs out of a free group.
  for (int trial = 0; trial < 100; ++trial) {
    const AbGroup target = random_group(rng);
    const AbGroup source = AbGroup::free(2);
    const AbHom h(source, target, {random_element(rng, target), random_element(rng, target)});
    const BarChain c = random_chain(rng, source, 1 + rng() % 3, 0);
    EXPECT_EQ(boundary(chain_map(h, c)), chain_map(h, boundary(c)));
  }
}

TEST(Obstructions, CountsAndEnumeration) {
  EXPECT_EQ(obstruction_count(PrimeContext(3)), 1u);
  EXPECT_EQ(obstruction_count(PrimeContext(5)), 4u);
  EXPECT_EQ(obstruction_count(PrimeContext(7)), 12u);
  for (unsigned ell : kPrimes) {
    const PrimeContext ctx(ell);
    const auto classes = enumerate_obstructions(ctx);
    EXPECT_EQ(classes.size(), obstruction_count(ctx)) << ell;
    // Brute force over (s, subset bitmask).
    const unsigned units = ctx.r() + 1;
    std::uint64_t brute = 0;
    for (unsigned mask = 0; mask < (1u << units); ++mask) {
      const unsigned i = static_cast<unsigned>(std::popcount(mask));
      for (unsigned s = 0; s <= i; ++s)
        if (i > s && (i - s) % 2 == 0) ++brute;
    }
    EXPECT_EQ(classes.size(), brute) << ell;
    for (std::size_t n = 0; n < classes.size(); ++n) {
      const auto& c = classes[n];
      EXPECT_EQ(c.degree, 2 * c.s + c.subset.size());
      EXPECT_EQ(c.degree, 3 * c.s + 2 * c.j());
      EXPECT_EQ(c.weight, c.s + c.subset.size());
      EXPECT_GT(c.j(), 0u);
      if (n) EXPECT_LE(classes[n - 1].degree, c.degree);
    }
  }
  const auto c3 = enumerate_obstructions(PrimeContext(3));
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].s, 0u);
  EXPECT_EQ(c3[0].subset, (std::vector<unsigned>{0, 1}));
  const auto c5 = enumerate_obstructions(PrimeContext(5));
  ASSERT_EQ(c5.size(), 4u);
  EXPECT_EQ(c5[3].s, 1u);
  EXPECT_EQ(c5[3].subset.size(), 3u);
}

TEST(Obstructions, Se2CyclesAreCyclesModEll) {
  for (unsigned ell : {3u, 5u, 7u}) {
    const PrimeContext ctx(ell);
    const auto cycles = se2_obstruction_cycles(ctx);
    EXPECT_EQ(cycles.size(), obstruction_count(ctx));
    for (const auto& c : cycles) {
      EXPECT_EQ(c.chain.degree(), c.cls.degree);
      EXPECT_EQ(c.chain.modulus(), ell);
      EXPECT_TRUE(boundary(c.chain).is_zero()) << ell << ' ' << c.chain.format();
      EXPECT_EQ(c.hopf_word.has_value(), c.degree == 2);
    }
  }
}

TEST(Obstructions, DegreeTwoHopfWords) {
  const auto c3 = se2_obstruction_cycles(PrimeContext(3));
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].degree, 2u);
  EXPECT_EQ(to_string(*c3[0].hopf_word), "z*u1*z^-1*u1^-1");
  EXPECT_EQ(c3[0].chain.format(), "2*[u1|z] + 1*[z|u1]");

  std::vector<std::string> words;
  for (const auto& c : se2_obstruction_cycles(PrimeContext(5)))
    if (c.degree == 2) words.push_back(to_string(*c.hopf_word));
  EXPECT_EQ(words, (std::vector<std::string>{"z*u1*z^-1*u1^-1", "z*u2*z^-1*u2^-1", "u1*u2*u1^-1*u2^-1"}));
}

TEST(Gl1Basis, LowDegreesAndDimensions) {
  const PrimeContext ctx(3);
  const auto d0 = homology_basis_gl1(ctx, 0);
  ASSERT_EQ(d0.size(), 1u);
  EXPECT_EQ(d0[0].chain, BarChain::unit(gl1_group(ctx), 3));
  EXPECT_EQ(homology_basis_gl1(ctx, 1).size(), 2u);
  const auto d2 = homology_basis_gl1(ctx, 2);
  ASSERT_EQ(d2.size(), 2u);
  EXPECT_EQ(d2[0].s + d2[1].s, 1u);
  for (unsigned ell : {3u, 5u, 7u}) {
    const PrimeContext c(ell);
    const unsigned units = c.r() + 1;
    for (std::size_t d = 0; d <= 5; ++d) {
      // Gamma(x) (x) Lambda(units): sum over s of C(units, d - 2s).
      std::uint64_t dim = 0;
      for (std::size_t s = 0; 2 * s <= d; ++s) dim += choose(units, static_cast<unsigned>(d - 2 * s));
      const auto basis = homology_basis_gl1(c, d);
      EXPECT_EQ(basis.size(), dim) << ell << ' ' << d;
      if (ell == 7 && d > 4) continue;
      for (const auto& b : basis) EXPECT_TRUE(boundary(b.chain).is_zero()) << ell << ' ' << d;
    }
  }
}

TEST(Involution, WeightSignUpToExplicitBoundaries) {
  const AbGroup g = AbGroup::free(1);
  const Element x = g.basis(0), xi = g.neg(x);
  EXPECT_EQ(chain_map(AbHom(g, g, {xi}), BarChain::term(g, {x})) + BarChain::term(g, {x}), boundary(BarChain::term(g, {x, xi})));

  // For each basis cycle eta of degree <= 2, inv(eta) - (-1)^weight eta is a
  // boundary mod ell. Witnesses are searched among degree d+1 chains whose
  // entries are products of the cycle's units with exponents in {-1, 0, 1}
  // (powers of xi for the divided power).
  for (unsigned ell : {3u, 5u}) {
    const PrimeContext ctx(ell);
    const AbGroup gl1 = gl1_group(ctx);
    const auto m = static_cast<std::int64_t>(ell);
    const AbHom inv = gl1_inversion(ctx);
    for (std::size_t d = 1; d <= 2; ++d)
      for (const auto& b : homology_basis_gl1(ctx, d)) {
        std::vector<Element> entries;
        if (b.s > 0) {
          for (unsigned e = 1; e < ell; ++e) entries.push_back(gl1.scale(gl1_xi(ctx), e));
        } else {
          std::vector<std::int64_t> exps(b.subset.size(), -1);
          while (true) {
            Element e = gl1.zero();
            for (std::size_t q = 0; q < exps.size(); ++q) e = gl1.add(e, gl1.scale(gl1.basis(b.subset[q]), exps[q]));
            if (!gl1.is_identity(e)) entries.push_back(e);
            std::size_t q = 0;
            while (q < exps.size() && ++exps[q] == 2) exps[q++] = -1;
            if (q == exps.size()) break;
          }
        }
        const auto witnesses = all_tuples(gl1, entries, d + 1, m);
        const BarChain diff = chain_map(inv, b.chain) - b.chain.scaled(sign(b.s + b.subset.size()));
        EXPECT_FALSE(diff.is_zero()) << ell << ' ' << b.chain.format();
        EXPECT_TRUE(is_boundary_mod(diff, witnesses, m)) << ell << ' ' << b.chain.format();
        // The cycle itself is not a boundary in the same search space.
        EXPECT_FALSE(is_boundary_mod(b.chain, witnesses, m)) << ell << ' ' << b.chain.format();
      }
  }
}
