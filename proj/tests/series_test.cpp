#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cfseries/series.hpp"
#include "test_support.hpp"

using namespace cfs;
using cfs::testing::family;
using cfs::testing::poly;
using cfs::testing::random_poly;
using cfs::testing::star;
using cfs::testing::support;

TEST(Coefficient, LookupAndHorizon) {
  EXPECT_EQ(family(FamilyKind::char_all, 5).coefficient(Word{0, 1}), 1);
  EXPECT_EQ(family(FamilyKind::factorial_x1, 6).coefficient(Word::repeat(1, 4)), 24);
  EXPECT_EQ(star(0, 6).coefficient(Word{1}), 0);
  EXPECT_THROW(star(0, 3).coefficient(Word::repeat(0, 4)), HorizonError);
  EXPECT_THROW(star(0, 3).coefficient(Word{2}), InvalidWordError);
}

TEST(Series, ZerosAreNeverStored) {
  Series s(Alphabet(1), 3);
  s.add_term(Word{1}, Rational(1, 2));
  s.add_term(Word{1}, Rational(-1, 2));
  s.add_term(Word{0}, 0);
  EXPECT_TRUE(s.is_zero());
  s.add_term(Word{0, 0, 0, 0}, 1);
  EXPECT_TRUE(s.is_zero()) << "beyond-horizon terms are dropped";
}

TEST(Add, Examples) {
  EXPECT_EQ(add(poly("1 x0 + 1 x1", 4), poly("1 x1", 4)), poly("1 x0 + 2 x1", 4));
  const Series c = poly("3/2 x0 x1 + -1 e + 2 x1", 4);
  EXPECT_TRUE(add(c, scale(-1, c)).is_zero());
  EXPECT_EQ(support(scale(Rational(-7, 3), c)), support(c));
  EXPECT_TRUE(scale(0, c).is_zero());
  EXPECT_EQ(add(c, poly("1 x0", 2)).horizon(), 2u);
  EXPECT_THROW(add(c, poly("1 x0", 4, 2)), AlphabetMismatchError);
}

TEST(Hadamard, Examples) {
  EXPECT_EQ(hadamard(poly("1 x0 + 1 x1", 4), poly("2 x1 + 1 x1 x1", 4)), poly("2 x1", 4));
  const Series c = poly("5 x0 + -2 x1 x0 + 1/3 e", 6);
  EXPECT_EQ(hadamard(family(FamilyKind::char_all, 6), c), c);
  Series even_x0(Alphabet(1), 12);
  for (std::size_t k = 0; k <= 6; ++k) even_x0.add_term(Word::repeat(0, 2 * k), 1);
  EXPECT_EQ(hadamard(family(FamilyKind::even_palindromes, 12), star(0, 12)), even_x0);
}

TEST(Cauchy, Examples) {
  EXPECT_EQ(cauchy(poly("1 x0", 4), poly("1 x1", 4)), poly("1 x0 x1", 4));
  EXPECT_EQ(cauchy(poly("1 e + 1 x1", 4), poly("1 e + 1 x0", 4)), poly("1 e + 1 x0 + 1 x1 + 1 x1 x0", 4));
  // x0* x1 x0* has k words of length k: x0^{n0} x1 x0^{n1} with n0 + n1 = k - 1.
  const auto c = cauchy(cauchy(star(0, 10), poly("1 x1", 10)), star(0, 10));
  const auto counts = support_counts_by_length(c);
  EXPECT_EQ(counts[0], 0u);
  for (std::size_t k = 1; k <= 10; ++k) EXPECT_EQ(counts[k], k);
  EXPECT_EQ(c, family(FamilyKind::linear_full, 10));
}

TEST(Cauchy, TruncatesAtMinimumHorizon) {
  const auto c = cauchy(star(0, 3), star(1, 5));
  EXPECT_EQ(c.horizon(), 3u);
  EXPECT_EQ(c.support_size(), 10u);  // x0^i x1^j, i + j <= 3
}

TEST(Shuffle, Examples) {
  Series two_x1(Alphabet(1), 10);
  for (std::size_t k = 0; k <= 10; ++k) two_x1.add_term(Word::repeat(1, k), Rational(1ul << k));
  EXPECT_EQ(shuffle(star(1, 10), star(1, 10)), two_x1);
  EXPECT_EQ(shuffle(star(0, 8), star(1, 8)), family(FamilyKind::char_all, 8));
  EXPECT_EQ(shuffle(poly("1 x1", 3), poly("1 x1", 3)), poly("2 x1 x1", 3));
}

TEST(ShufflePower, Examples) {
  const Series x = poly("1 x0 + 1 x1", 10);
  EXPECT_EQ(scale(Rational(1, 2), shuffle_power(x, 2)), poly("1 x0 x0 + 1 x0 x1 + 1 x1 x0 + 1 x1 x1", 10));
  const Series c = poly("2 x0 + -1/2 x1 x0 + 3 e", 10);
  EXPECT_EQ(shuffle_power(c, 1), c);
  EXPECT_EQ(shuffle_power(c, 0), Series::one(Alphabet(1), 10));
  for (std::size_t n = 0; n <= 10; ++n) {
    Series layer(Alphabet(1), 10);
    for (const auto& w : enumerate_words_of_length(Alphabet(1), n)) layer.add_term(w, 1);
    EXPECT_EQ(scale(Rational(1) / Rational(factorial(n)), shuffle_power(x, n)), layer) << n;
  }
}

TEST(LeftShift, Examples) {
  EXPECT_EQ(left_shift(poly("1 x0 x1", 4), Word{0}), poly("1 x1", 3));
  EXPECT_TRUE(left_shift(poly("1 x0 x1", 4), Word{1}).is_zero());
  EXPECT_EQ(left_shift(poly("1 x0 x1 x0", 4), Word{0, 1}), poly("1 x0", 2));
  // (x_i xi)^{-1} = xi^{-1} x_i^{-1}
  const Series c = family(FamilyKind::char_all, 6);
  EXPECT_EQ(left_shift(c, Word{0, 1}), left_shift(left_shift(c, Word{0}), Word{1}));
  EXPECT_EQ(left_shift(c, Word::repeat(0, 9)).horizon(), 0u);
}

TEST(Augment, Examples) {
  EXPECT_EQ(augment_left(Word{0}, poly("1 x1", 3)), poly("1 x0 x1", 4));
  const Series c = poly("1 x1 + 2 x0 x0 + 1 e", 5);
  EXPECT_EQ(augment_right(c, Word{}), c);
  const auto shifted = support_counts_by_length(augment_left(Word{0}, c));
  const auto base = support_counts_by_length(c);
  ASSERT_EQ(shifted.size(), base.size() + 1);
  EXPECT_EQ(shifted[0], 0u);
  for (std::size_t k = 0; k < base.size(); ++k) EXPECT_EQ(shifted[k + 1], base[k]);
}

// --- properties on random polynomials -------------------------------------

class RandomPairs : public ::testing::Test {
protected:
  std::mt19937 rng{20240501};
  static constexpr std::size_t L = 6;
  Series next(bool positive = false) { return random_poly(rng, 1, 4, L, 6, positive); }
};

TEST_F(RandomPairs, SupportLaws) {
  for (int trial = 0; trial < 200; ++trial) {
    const Series c = next(), d = next();
    const auto sc = support(c), sd = support(d);
    std::set<Word> inter, uni;
    std::set_intersection(sc.begin(), sc.end(), sd.begin(), sd.end(), std::inserter(inter, inter.end()));
    std::set_union(sc.begin(), sc.end(), sd.begin(), sd.end(), std::inserter(uni, uni.end()));
    EXPECT_EQ(support(hadamard(c, d)), inter);
    const auto ssum = support(add(c, d));
    EXPECT_TRUE(std::includes(uni.begin(), uni.end(), ssum.begin(), ssum.end()));
    std::set<Word> products;
    for (const auto& u : sc)
      for (const auto& v : sd)
        if (u.length() + v.length() <= L) products.insert(u.concat(v));
    const auto scd = support(cauchy(c, d));
    EXPECT_TRUE(std::includes(products.begin(), products.end(), scd.begin(), scd.end()));

    const auto sum_counts = support_counts_by_length(add(c, d));
    const auto cc = support_counts_by_length(c), dc = support_counts_by_length(d);
    for (std::size_t k = 0; k <= L; ++k) EXPECT_LE(sum_counts[k], cc[k] + dc[k]);
  }
}

TEST_F(RandomPairs, PositiveSumSupportIsUnion) {
  for (int trial = 0; trial < 100; ++trial) {
    const Series c = next(true), d = next(true);
    auto uni = support(c);
    const auto sd = support(d);
    uni.insert(sd.begin(), sd.end());
    EXPECT_EQ(support(add(c, d)), uni);
  }
}

TEST_F(RandomPairs, AlgebraicLaws) {
  for (int trial = 0; trial < 60; ++trial) {
    const Series a = next(), b = next(), c = next();
    EXPECT_EQ(shuffle(a, b), shuffle(b, a));
    EXPECT_EQ(shuffle(shuffle(a, b), c), shuffle(a, shuffle(b, c)));
    EXPECT_EQ(shuffle(a, add(b, c)), add(shuffle(a, b), shuffle(a, c)));
    EXPECT_EQ(cauchy(cauchy(a, b), c), cauchy(a, cauchy(b, c)));
    EXPECT_EQ(cauchy(a, add(b, c)), add(cauchy(a, b), cauchy(a, c)));
    EXPECT_EQ(cauchy(add(a, b), c), add(cauchy(a, c), cauchy(b, c)));
    EXPECT_EQ(hadamard(a, b), hadamard(b, a));
    EXPECT_EQ(hadamard(hadamard(a, b), c), hadamard(a, hadamard(b, c)));
    EXPECT_EQ(hadamard(a, add(b, c)), add(hadamard(a, b), hadamard(a, c)));
  }
}

TEST(ShuffleMass, CoefficientSumIsBinomial) {
  for (std::size_t la = 0; la <= 5; ++la)
    for (std::size_t lb = 0; la + lb <= 10; ++lb) {
      const Word a = Word::repeat(0, la), b = Word::repeat(1, lb);
      const Series s = shuffle(Series::monomial(Alphabet(1), 10, a), Series::monomial(Alphabet(1), 10, b));
      Rational mass = 0;
      for (const auto& [w, v] : s.terms()) mass += v;
      EXPECT_EQ(mass, Rational(binomial(la + lb, la)));
    }
}

TEST(ShuffleSupport, LinearParallelProductMatchesCauchySupport) {
  for (std::size_t L : {4, 7, 10}) {
    const Series lin = cauchy(star(0, L), poly("1 x1", L));
    EXPECT_EQ(support(shuffle(lin, lin)), support(cauchy(lin, lin))) << L;
    EXPECT_NE(shuffle(lin, lin), cauchy(lin, lin));
  }
}
