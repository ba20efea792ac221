#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cfseries/errors.hpp"
#include "cfseries/families.hpp"
#include "cfseries/rational.hpp"
#include "cfseries/series.hpp"
#include "cfseries/words.hpp"

namespace cfs {

// ---------------------------------------------------------------------------
// Composition

/// The composition unit δ. It has no coefficient table and only ever appears
/// as an operand of composition.
struct CompositionUnit {
  friend constexpr bool operator==(CompositionUnit, CompositionUnit) = default;
};

using SeriesOrUnit = std::variant<Series, CompositionUnit>;

/// c ∘ d with one feed series per controlled letter (feeds[i-1] feeds x_i).
///
/// psi_d(eta)(1) is built right to left: e <- 1, then e <- x0 (d_i ⧢ e) for each
/// letter from last to first. Every step lengthens the shortest word by one, so
/// truncating to the horizon after each step is exact. Values are memoized per
/// suffix since support words of c share suffixes.
inline Series compose(const Series& c, std::span<const Series> feeds) {
  const Alphabet a = c.alphabet();
  if (feeds.size() != static_cast<std::size_t>(a.m()))
    throw ValidationError("compose: expected " + std::to_string(a.m()) + " feed series, got " +
                          std::to_string(feeds.size()));
  std::size_t L = c.horizon();
  for (const auto& d : feeds) {
    require_same_alphabet(c, d, "compose");
    L = std::min(L, d.horizon());
  }

  std::map<Word, Series> memo;
  memo.emplace(Word{}, Series::one(a, L));
  const auto psi_of = [&](const Word& eta, auto&& self) -> const Series& {
    if (auto it = memo.find(eta); it != memo.end()) return it->second;
    const Series& inner = self(eta.drop_front(1), self);
    const int letter = eta.front();
    Series fed = letter == 0 ? inner : shuffle(feeds[letter - 1].truncated(L), inner);
    Series step = augment_left(Word{0}, fed).truncated(L);
    return memo.emplace(eta, std::move(step)).first->second;
  };

  Series out(a, L);
  for (const auto& [eta, coeff] : c.terms()) {
    if (eta.length() > L) break;
    for (const auto& [w, v] : psi_of(eta, psi_of).terms()) out.add_term(w, coeff * v);
  }
  return out;
}

/// Single-input composition: d feeds x1.
inline Series compose(const Series& c, const Series& d) {
  if (c.alphabet().m() != 1)
    throw ValidationError("compose: a single feed series needs m = 1; pass one feed per input letter");
  return compose(c, std::span<const Series>(&d, 1));
}

/// Composition with δ as a possible operand: δ∘c = c∘δ = c.
inline SeriesOrUnit compose_with_unit(const SeriesOrUnit& c, const SeriesOrUnit& d) {
  if (std::holds_alternative<CompositionUnit>(c)) return d;
  if (std::holds_alternative<CompositionUnit>(d)) return c;
  return compose(std::get<Series>(c), std::get<Series>(d));
}

// ---------------------------------------------------------------------------
// Unity feedback

/// b_0 .. b_{n_max}: b_0 = 0, b_1 = 1, b_n = (n-1) b_{n-1} x1 + (n-2) b_{n-2} x0.
/// Each is truncated at `horizon` (b_n itself has words of length <= n-1).
inline std::vector<Series> devlin_polynomials(std::size_t n_max, std::size_t horizon) {
  const Alphabet a(1);
  std::vector<Series> b;
  b.reserve(n_max + 1);
  b.emplace_back(a, horizon);
  if (n_max >= 1) b.push_back(Series::one(a, horizon));
  for (std::size_t n = 2; n <= n_max; ++n) {
    Series next = scale(Rational(static_cast<unsigned long>(n - 1)), augment_right(b[n - 1], Word{1}));
    next = add(next, scale(Rational(static_cast<unsigned long>(n - 2)), augment_right(b[n - 2], Word{0})));
    b.push_back(next.truncated(horizon));
  }
  return b;
}

/// Untruncated b_0 .. b_{n_max}.
inline std::vector<Series> devlin_polynomials(std::size_t n_max) {
  return devlin_polynomials(n_max, std::min<std::size_t>(n_max, Word::kMaxLength));
}

/// Truncation of c@δ for c = sum_k k! x1^k: the sum b_1 + ... + b_{n_max}.
inline Series devlin_feedback(std::size_t n_max, std::size_t horizon) {
  if (n_max < 1) throw ValidationError("devlin: n_max must be >= 1");
  const auto b = devlin_polynomials(n_max, horizon);
  Series out(Alphabet(1), horizon);
  for (std::size_t n = 1; n <= n_max; ++n) out = add(out, b[n]);
  return out;
}

/// c@d. Only the unity-feedback case with c = sum_k k! x1^k is available, and
/// it returns the Devlin sum with enough terms to be exact on c's horizon.
inline Series feedback_product(const SeriesOrUnit& c, const SeriesOrUnit& d) {
  if (std::holds_alternative<Series>(c) && std::holds_alternative<CompositionUnit>(d)) {
    const Series& fwd = std::get<Series>(c);
    if (fwd.alphabet().m() == 1 &&
        fwd == build_family(SeriesFamily::simple(FamilyKind::factorial_x1), fwd.alphabet(), fwd.horizon()))
      // x0^L has alternative degree 2L+1, the largest among words of length <= L.
      return devlin_feedback(2 * fwd.horizon() + 1, fwd.horizon());
  }
  throw UnsupportedOperationError(
      "feedback product c@d is only available for c = sum k! x1^k with d = delta");
}

// ---------------------------------------------------------------------------
// Bilinear / affine realizations

using RVector = std::vector<Rational>;

struct RMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Rational> data;  // row-major

  RMatrix() = default;
  RMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// z' = (A0 z + b0) + sum_i u_i (A_i z + b_i),  z(0) = z0,  y = C z.
struct BilinearRealization {
  std::size_t n = 0;
  Alphabet alphabet;
  std::vector<RMatrix> A;  // one per letter
  std::vector<RVector> b;  // one per letter
  RVector C;
  RVector z0;

  void validate() const {
    const auto letters = static_cast<std::size_t>(alphabet.size());
    if (A.size() != letters || b.size() != letters)
      throw DimensionError("realization needs A_i and b_i for each of the " + std::to_string(letters) + " letters");
    for (std::size_t i = 0; i < letters; ++i) {
      if (A[i].rows != n || A[i].cols != n)
        throw DimensionError("A" + std::to_string(i) + " is not " + std::to_string(n) + "x" + std::to_string(n));
      if (b[i].size() != n) throw DimensionError("b" + std::to_string(i) + " has wrong length");
    }
    if (C.size() != n) throw DimensionError("C has wrong length");
    if (z0.size() != n) throw DimensionError("z0 has wrong length");
  }

  /// [[A_i, b_i], [0, 0]]
  RMatrix augmented(std::size_t letter) const {
    RMatrix M(n + 1, n + 1);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) M(r, c) = A[letter](r, c);
      M(r, n) = b[letter][r];
    }
    return M;
  }
};

/// (c, x_{j1} ... x_{jk}) = C~ A~_{j1} ... A~_{jk} z~0.
inline Series realization_to_series(const BilinearRealization& R, std::size_t horizon) {
  R.validate();
  const std::size_t dim = R.n + 1;
  std::vector<RMatrix> aug;
  for (int i = 0; i <= R.alphabet.m(); ++i) aug.push_back(R.augmented(static_cast<std::size_t>(i)));
  RVector z(dim, 0), row(dim, 0);
  for (std::size_t i = 0; i < R.n; ++i) {
    z[i] = R.z0[i];
    row[i] = R.C[i];
  }
  z[R.n] = 1;

  Series out(R.alphabet, horizon);
  const auto dot = [&](const RVector& r) {
    Rational s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += r[i] * z[i];
    return s;
  };
  const auto visit = [&](const Word& w, const RVector& r, auto&& self) -> void {
    out.add_term(w, dot(r));
    if (w.length() == horizon) return;
    for (int letter = 0; letter <= R.alphabet.m(); ++letter) {
      const RMatrix& M = aug[static_cast<std::size_t>(letter)];
      RVector next(dim, 0);
      bool nonzero = false;
      for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < dim; ++i) next[j] += r[i] * M(i, j);
        nonzero = nonzero || next[j] != 0;
      }
      // A zero row vector stays zero along every extension.
      if (!nonzero) continue;
      Word child = w;
      child.push_back(letter);
      self(child, next, self);
    }
  };
  bool any = false;
  for (const auto& v : row) any = any || v != 0;
  if (any) visit(Word{}, row, visit);
  return out;
}

// ---------------------------------------------------------------------------
// Local convergence bound |(c, eta)| <= K M^|eta| |eta|!

struct GrowthWitness {
  Rational K = 1;
  Rational M = 1;
  std::size_t horizon = 0;
};

struct GrowthCheck {
  bool holds = true;
  std::optional<Word> violation;
};

inline GrowthCheck check_growth_bound(const Series& c, const GrowthWitness& w) {
  if (w.K <= 0 || w.M <= 0) throw ValidationError("growth witness needs K > 0 and M > 0");
  Rational m_pow = 1;
  std::size_t pow_len = 0;
  for (const auto& [eta, v] : c.terms()) {
    if (eta.length() > w.horizon) break;
    while (pow_len < eta.length()) {
      m_pow *= w.M;
      ++pow_len;
    }
    const Rational bound = w.K * m_pow * Rational(factorial(eta.length()));
    if (abs(v) > bound) return {false, eta};
  }
  return {};
}

} // namespace cfs
