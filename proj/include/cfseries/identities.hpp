#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cfseries/chen_fliess.hpp"
#include "cfseries/entropy.hpp"
#include "cfseries/families.hpp"
#include "cfseries/interconnect.hpp"
#include "cfseries/series.hpp"
#include "cfseries/text_io.hpp"
#include "cfseries/words.hpp"

namespace cfs {

/// (x1* ∘ x1*, x0^{k0} x1^{k1} x0^{k2} x1^{k3} ...) = k0^{k1} (k0+k2)^{k3} ..., with 0^0 = 1.
inline BigInt composed_star_coefficient(const Word& w) {
  std::vector<std::size_t> runs;  // alternating x0-run, x1-run lengths, starting with x0
  int current = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (w[i] != current) {
      runs.push_back(run);
      run = 0;
      current = w[i];
    }
    ++run;
  }
  runs.push_back(run);
  BigInt value = 1;
  std::size_t x0_total = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (k % 2 == 0) x0_total += runs[k];
    else value *= power(BigInt(static_cast<unsigned long>(x0_total)), runs[k]);
  }
  return value;
}

struct IdentityCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline Series poly(const std::string& text, std::size_t L, int m = 1) {
  return build_family(SeriesFamily::polynomial(parse_polynomial(text)), Alphabet(m), L);
}

inline Series fam(FamilyKind k, std::size_t L, std::size_t param = 1) {
  return build_family(SeriesFamily::with_param(k, param), Alphabet(1), L);
}

inline Series star(int letter, std::size_t L) { return build_family(SeriesFamily::letter_star(letter), Alphabet(1), L); }

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace detail

/// The identity checks run by the `verify` subcommand. Each returns pass/fail with a short detail.
inline std::vector<IdentityCheck> run_identity_suite() {
  using detail::fam;
  using detail::poly;
  using detail::star;
  std::vector<IdentityCheck> out;
  const auto check = [&](std::string name, const std::function<std::string()>& body) {
    IdentityCheck c{std::move(name), false, {}};
    try {
      c.detail = body();
      c.passed = c.detail.empty();
      if (c.passed) c.detail = "ok";
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(c));
  };

  check("devlin b1..b6 printed list", [] {
    const char* printed[] = {
        "1",
        "1 x1",
        "2 x1 x1 + 1 x0",
        "6 x1 x1 x1 + 3 x0 x1 + 2 x1 x0",
        "24 x1 x1 x1 x1 + 12 x0 x1 x1 + 8 x1 x0 x1 + 6 x1 x1 x0 + 3 x0 x0",
        "120 x1 x1 x1 x1 x1 + 60 x0 x1 x1 x1 + 40 x1 x0 x1 x1 + 30 x1 x1 x0 x1 + 24 x1 x1 x1 x0 + "
        "15 x0 x0 x1 + 12 x0 x1 x0 + 8 x1 x0 x0",
    };
    const auto b = devlin_polynomials(6);
    for (std::size_t n = 1; n <= 6; ++n)
      if (b[n] != poly(printed[n - 1], 6)) return "b" + std::to_string(n) + " differs";
    return std::string{};
  });

  check("devlin support law n=1..20", [] {
    const Grading alt = Grading::alternative(Alphabet(1));
    const auto b = devlin_polynomials(20);
    const std::size_t fib[] = {1, 1, 2, 3, 5, 8};
    for (std::size_t n = 1; n <= 20; ++n) {
      for (const auto& [w, v] : b[n].terms())
        if (word_degree(w, alt) != n) return "b" + std::to_string(n) + " has a word of another degree";
      if (BigInt(static_cast<unsigned long>(b[n].support_size())) != grading_dimension(alt, n))
        return "|supp(b" + std::to_string(n) + ")| != dim(alt, n)";
      if (n <= 6 && b[n].support_size() != fib[n - 1]) return "Fibonacci count fails at n=" + std::to_string(n);
    }
    return std::string{};
  });

  check("x1* ∘ x1* closed form over all words of length <= 8", [] {
    const auto cc = compose(star(1, 8), star(1, 8));
    for (const auto& w : enumerate_words(Alphabet(1), 8))
      if (cc.coefficient(w) != Rational(composed_star_coefficient(w))) return "mismatch at " + to_string(w);
    // Every support word is e or starts with x0, so |supp_k| = 2^{k-1} and a_k = 1 - 1/k.
    const auto est = entropy_estimate(support_profile(cc, Grading::word_length(Alphabet(1))), {4, true});
    for (const auto& t : est.sequence)
      if (!detail::close(t.a, 1.0 - 1.0 / static_cast<double>(t.degree), 1e-12))
        return "a_k != 1 - 1/k at k=" + std::to_string(t.degree);
    const auto base = entropy_estimate(support_profile(star(1, 8), Grading::word_length(Alphabet(1))), {4, true});
    if (base.estimate != 0.0) return std::string("h(x1*) estimate is not 0");
    return std::string{};
  });

  check("x0* ⧢ x1* = char(X*) (L=12), xi* ⧢ xi* = (2xi)* (L=20)", [] {
    if (shuffle(star(0, 12), star(1, 12)) != fam(FamilyKind::char_all, 12)) return std::string("x0*⧢x1* differs");
    for (int i = 0; i <= 1; ++i) {
      Series two(Alphabet(1), 20);
      for (std::size_t k = 0; k <= 20; ++k) two.add_term(Word::repeat(i, k), Rational(power(BigInt(2), k)));
      if (shuffle(star(i, 20), star(i, 20)) != two) return "x" + std::to_string(i) + "* ⧢ itself differs";
    }
    return std::string{};
  });

  check("char(X^n) = (x0+x1)^{⧢n}/n!, n <= 10", [] {
    const Series x = poly("1 x0 + 1 x1", 10);
    for (std::size_t n = 0; n <= 10; ++n) {
      Series layer(Alphabet(1), 10);
      for (const auto& w : enumerate_words_of_length(Alphabet(1), n)) layer.add_term(w, 1);
      if (scale(Rational(1, 1) / Rational(factorial(n)), shuffle_power(x, n)) != layer)
        return "fails at n=" + std::to_string(n);
    }
    return std::string{};
  });

  check("entropy closed forms (word length)", [] {
    const Grading g = Grading::word_length(Alphabet(1));
    const auto est = [&](const Series& c, std::size_t window) { return entropy_estimate(support_profile(c, g), {window, true}); };
    const auto pal = est(fam(FamilyKind::even_palindromes, 24), 8);
    for (const auto& t : pal.sequence)
      if (!detail::close(t.a, 0.5, 1e-12)) return std::string("palindrome a_k != 1/2");
    if (!detail::close(pal.estimate, 0.5, 1e-12)) return std::string("palindromes estimate != 1/2");
    if (!detail::close(est(fam(FamilyKind::char_all, 16), 8).estimate, 1.0, 1e-12)) return std::string("char(X*) != 1");
    for (std::size_t N = 2; N <= 4; ++N)
      if (!detail::close(est(fam(FamilyKind::word_power, 8 * N, N), 8).estimate, 1.0 / static_cast<double>(N), 1e-12))
        return "word_power(" + std::to_string(N) + ") != 1/N";
    if (!detail::close(est(fam(FamilyKind::linear_full, 40), 1).estimate, std::log2(40.0) / 40.0, 1e-12))
      return std::string("linear_full a_40 != log2(40)/40");
    for (std::size_t N = 1; N <= 3; ++N) {
      double previous = 2.0;
      for (std::size_t L : {12, 18, 24}) {
        const auto e = est(fam(FamilyKind::input_limited, L, N), 1);
        const double expect = std::log2(binomial(L, N).get_d()) / static_cast<double>(L);
        if (!detail::close(e.estimate, expect, 1e-12)) return "input_limited(" + std::to_string(N) + ") a_L mismatch";
        if (!(e.estimate < previous)) return "input_limited(" + std::to_string(N) + ") not decreasing in L";
        previous = e.estimate;
      }
    }
    return std::string{};
  });

  check("realizations z'=z+zu and z'=z+u (L=12)", [] {
    const auto amp = parse_realization("n 1\nm 1\nA0 1\nA1 1\nC 1\nz0 1\n");
    if (realization_to_series(amp, 12) != fam(FamilyKind::char_all, 12)) return std::string("z'=z+zu differs");
    const auto lti = parse_realization("n 1\nm 1\nA0 1\nb1 1\nC 1\nz0 0\n");
    if (realization_to_series(lti, 12) != fam(FamilyKind::linear_siso, 12, 1)) return std::string("z'=z+u differs");
    return std::string{};
  });

  check("operator vs ODE", [] {
    const SimGrid grid(0.5, 512);
    const auto lti = parse_realization("n 1\nm 1\nA0 1\nb1 1\nC 1\nz0 0\n");
    const auto u = InputSignal::constant(1, 0.5, {0.5});
    const auto dev = max_abs_difference(evaluate_operator(fam(FamilyKind::linear_siso, 12, 1), u, grid).y,
                                        simulate_realization(lti, u, grid));
    if (!(dev < 1e-6)) return "linear deviation " + format_double(dev);
    const SimGrid grid2(0.4, 512);
    const auto y = evaluate_operator(fam(FamilyKind::char_all, 14), InputSignal::constant(1, 0.4, {0.4}), grid2).y;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (!(std::abs(y[j] - std::exp(1.4 * grid2.time(j))) < 1e-5)) return "char(X*) deviation at j=" + std::to_string(j);
    return std::string{};
  });

  check("parallel and cascade products", [] {
    const SimGrid g(0.5, 512);
    double dev = compare_parallel_product(star(0, 12), star(0, 12), InputSignal::constant(1, 0.5, {0.0}), g);
    if (!(dev < 1e-6)) return "x0*·x0* deviation " + format_double(dev);
    dev = compare_parallel_product(poly("1 x1", 4), poly("1 x1", 4), InputSignal::constant(1, 0.5, {1.0}), g);
    if (!(dev < 1e-8)) return "x1·x1 deviation " + format_double(dev);
    const SimGrid g2(0.2, 512);
    dev = compare_cascade(star(1, 8), star(1, 8), InputSignal::constant(1, 0.2, {0.5}), g2);
    if (!(dev < 1e-4)) return "cascade deviation " + format_double(dev);
    return std::string{};
  });

  check("growth bound witnesses", [] {
    if (!check_growth_bound(fam(FamilyKind::factorial_x1, 10), {1, 1, 10}).holds) return std::string("k! fails K=M=1");
    Series sq(Alphabet(1), 10);
    for (std::size_t k = 0; k <= 10; ++k) sq.add_term(Word::repeat(1, k), Rational(factorial(k) * factorial(k)));
    const auto r = check_growth_bound(sq, {1, 2, 10});
    if (r.holds || !r.violation || *r.violation != Word::repeat(1, 4)) return std::string("(k!)^2 witness is not x1^4");
    return std::string{};
  });

  return out;
}

} // namespace cfs
