#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfseries/errors.hpp"
#include "cfseries/rational.hpp"
#include "cfseries/series.hpp"
#include "cfseries/words.hpp"

namespace cfs {

enum class FamilyKind {
  polynomial,          // explicit list of terms
  char_all,            // sum of all words
  letter_star,         // x_i^*
  repeated_word_star,  // sum_n xi^n
  linear_siso,         // sum_{n>=r} x0^{n-1} x1
  linear_full,         // sum x0^{n0} x1 x0^{n1}
  input_limited,       // words with exactly N copies of x1, x0 elsewhere
  even_palindromes,    // sum of xi reverse(xi)
  word_power,          // sum_eta eta^N
  factorial_x1,        // sum_k k! x1^k
};

struct SeriesFamily {
  FamilyKind kind = FamilyKind::polynomial;
  int letter = 0;
  Word word;
  std::size_t param = 1;  // r for linear_siso, N for input_limited / word_power
  std::vector<std::pair<Word, Rational>> terms;

  static SeriesFamily polynomial(std::vector<std::pair<Word, Rational>> terms) {
    SeriesFamily f;
    f.terms = std::move(terms);
    return f;
  }
  static SeriesFamily simple(FamilyKind k) {
    SeriesFamily f;
    f.kind = k;
    return f;
  }
  static SeriesFamily letter_star(int letter) {
    SeriesFamily f = simple(FamilyKind::letter_star);
    f.letter = letter;
    return f;
  }
  static SeriesFamily repeated_word_star(Word xi) {
    SeriesFamily f = simple(FamilyKind::repeated_word_star);
    f.word = std::move(xi);
    return f;
  }
  static SeriesFamily with_param(FamilyKind k, std::size_t p) {
    SeriesFamily f = simple(k);
    f.param = p;
    return f;
  }
};

inline std::string_view family_name(FamilyKind k) {
  switch (k) {
  case FamilyKind::polynomial: return "polynomial";
  case FamilyKind::char_all: return "char_all";
  case FamilyKind::letter_star: return "letter_star";
  case FamilyKind::repeated_word_star: return "repeated_word_star";
  case FamilyKind::linear_siso: return "linear_siso";
  case FamilyKind::linear_full: return "linear_full";
  case FamilyKind::input_limited: return "input_limited";
  case FamilyKind::even_palindromes: return "even_palindromes";
  case FamilyKind::word_power: return "word_power";
  case FamilyKind::factorial_x1: return "factorial_x1";
  }
  return "?";
}

namespace detail {

inline void require_input_letter(Alphabet a, FamilyKind k) {
  if (a.m() < 1)
    throw ValidationError(std::string(family_name(k)) + " needs the letter x1 (m >= 1)");
}

inline void words_with_ones(Word prefix, std::size_t remaining, std::size_t ones, Series& out) {
  if (remaining == 0) {
    if (ones == 0) out.add_term(prefix, 1);
    return;
  }
  if (remaining > ones) {
    Word w = prefix;
    w.push_back(0);
    words_with_ones(w, remaining - 1, ones, out);
  }
  if (ones > 0) {
    prefix.push_back(1);
    words_with_ones(prefix, remaining - 1, ones - 1, out);
  }
}

} // namespace detail

/// Exact truncation of the named series to word length L.
inline Series build_family(const SeriesFamily& f, Alphabet a, std::size_t L) {
  Series out(a, L);
  switch (f.kind) {
  case FamilyKind::polynomial:
    for (const auto& [w, v] : f.terms) {
      validate_word(w, a);
      out.add_term(w, v);
    }
    break;
  case FamilyKind::char_all:
    for (const auto& w : enumerate_words(a, L)) out.add_term(w, 1);
    break;
  case FamilyKind::letter_star:
    if (!a.contains(f.letter))
      throw ValidationError("letter_star: letter x" + std::to_string(f.letter) + " not in alphabet");
    for (std::size_t k = 0; k <= L; ++k) out.add_term(Word::repeat(f.letter, k), 1);
    break;
  case FamilyKind::repeated_word_star: {
    if (f.word.empty()) throw ValidationError("repeated_word_star: word must be nonempty");
    validate_word(f.word, a);
    Word w;
    out.add_term(w, 1);
    while (w.length() + f.word.length() <= L) {
      w = w.concat(f.word);
      out.add_term(w, 1);
    }
    break;
  }
  case FamilyKind::linear_siso:
    detail::require_input_letter(a, f.kind);
    if (f.param < 1) throw ValidationError("linear_siso: relative degree r must be >= 1");
    for (std::size_t n = f.param; n <= L; ++n) out.add_term(Word::repeat(0, n - 1).concat(Word{1}), 1);
    break;
  case FamilyKind::linear_full:
    detail::require_input_letter(a, f.kind);
    for (std::size_t k = 1; k <= L; ++k)
      for (std::size_t n0 = 0; n0 < k; ++n0)
        out.add_term(Word::repeat(0, n0).concat(Word{1}).concat(Word::repeat(0, k - 1 - n0)), 1);
    break;
  case FamilyKind::input_limited:
    detail::require_input_letter(a, f.kind);
    if (f.param < 1) throw ValidationError("input_limited: N must be >= 1");
    for (std::size_t k = f.param; k <= L; ++k) detail::words_with_ones(Word{}, k, f.param, out);
    break;
  case FamilyKind::even_palindromes:
    for (const auto& xi : enumerate_words(a, L / 2)) out.add_term(xi.concat(xi.reversed()), 1);
    break;
  case FamilyKind::word_power: {
    const std::size_t N = f.param;
    if (N < 1) throw ValidationError("word_power: N must be >= 1");
    for (const auto& eta : enumerate_words(a, L / N)) {
      Word w;
      for (std::size_t i = 0; i < N; ++i) w = w.concat(eta);
      out.add_term(w, 1);
    }
    break;
  }
  case FamilyKind::factorial_x1:
    detail::require_input_letter(a, f.kind);
    for (std::size_t k = 0; k <= L; ++k) out.add_term(Word::repeat(1, k), Rational(factorial(k)));
    break;
  }
  return out;
}

} // namespace cfs
