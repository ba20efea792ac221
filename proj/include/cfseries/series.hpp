#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cfseries/errors.hpp"
#include "cfseries/rational.hpp"
#include "cfseries/words.hpp"

namespace cfs {

/// A formal power series truncated at word length `horizon`.
///
/// The table holds exactly the nonzero coefficients of words with length
/// <= horizon; every other word of that length range has coefficient zero.
/// Words beyond the horizon are unknown, and asking for them is an error.
class Series {
public:
  using Table = std::map<Word, Rational>;

  Series() = default;
  Series(Alphabet a, std::size_t horizon) : alphabet_(a), horizon_(horizon) {
    if (horizon > Word::kMaxLength)
      throw HorizonError("horizon " + std::to_string(horizon) + " exceeds maximum word length " +
                         std::to_string(Word::kMaxLength));
  }

  static Series monomial(Alphabet a, std::size_t horizon, const Word& w, const Rational& coeff = 1) {
    Series s(a, horizon);
    s.add_term(w, coeff);
    return s;
  }

  /// The series 1 (coefficient one on the empty word).
  static Series one(Alphabet a, std::size_t horizon) { return monomial(a, horizon, Word{}); }

  Alphabet alphabet() const noexcept { return alphabet_; }
  std::size_t horizon() const noexcept { return horizon_; }
  const Table& terms() const noexcept { return table_; }
  std::size_t support_size() const noexcept { return table_.size(); }
  bool is_zero() const noexcept { return table_.empty(); }

  Rational coefficient(const Word& w) const {
    validate_word(w, alphabet_);
    if (w.length() > horizon_)
      throw HorizonError("coefficient of '" + to_string(w) + "' requested beyond horizon " +
                         std::to_string(horizon_));
    auto it = table_.find(w);
    return it == table_.end() ? Rational(0) : it->second;
  }

  /// Accumulates coeff into (c, w). Terms beyond the horizon are dropped.
  void add_term(const Word& w, const Rational& coeff) {
    if (w.length() > horizon_ || coeff == 0) return;
    validate_word(w, alphabet_);
    auto [it, inserted] = table_.try_emplace(w, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) {
        table_.erase(it);
        return;
      }
    }
    it->second.canonicalize();
  }

  Series truncated(std::size_t horizon) const {
    Series s(alphabet_, std::min(horizon, horizon_));
    for (const auto& [w, c] : table_)
      if (w.length() <= s.horizon_) s.table_.emplace_hint(s.table_.end(), w, c);
    return s;
  }

  friend bool operator==(const Series&, const Series&) = default;

private:
  Alphabet alphabet_;
  std::size_t horizon_ = 0;
  Table table_;
};

inline void require_same_alphabet(const Series& c, const Series& d, const char* op) {
  if (c.alphabet() != d.alphabet())
    throw AlphabetMismatchError(std::string(op) + ": alphabets differ (m=" + std::to_string(c.alphabet().m()) +
                                " vs m=" + std::to_string(d.alphabet().m()) + ")");
}

inline Series add(const Series& c, const Series& d) {
  require_same_alphabet(c, d, "add");
  Series out = c.truncated(d.horizon());
  for (const auto& [w, v] : d.terms()) out.add_term(w, v);
  return out;
}

inline Series scale(const Rational& alpha, const Series& c) {
  Series out(c.alphabet(), c.horizon());
  if (alpha == 0) return out;
  for (const auto& [w, v] : c.terms()) out.add_term(w, alpha * v);
  return out;
}

inline Series subtract(const Series& c, const Series& d) { return add(c, scale(-1, d)); }

/// (c ⊙ d, w) = (c, w)(d, w)
inline Series hadamard(const Series& c, const Series& d) {
  require_same_alphabet(c, d, "hadamard");
  Series out(c.alphabet(), std::min(c.horizon(), d.horizon()));
  const auto& small = c.support_size() <= d.support_size() ? c : d;
  const auto& large = &small == &c ? d : c;
  for (const auto& [w, v] : small.terms()) {
    if (w.length() > out.horizon()) continue;
    auto it = large.terms().find(w);
    if (it != large.terms().end()) out.add_term(w, v * it->second);
  }
  return out;
}

/// Concatenation product.
inline Series cauchy(const Series& c, const Series& d) {
  require_same_alphabet(c, d, "cauchy");
  Series out(c.alphabet(), std::min(c.horizon(), d.horizon()));
  const std::size_t L = out.horizon();
  for (const auto& [u, cu] : c.terms()) {
    if (u.length() > L) break;
    for (const auto& [v, dv] : d.terms()) {
      if (u.length() + v.length() > L) break;
      out.add_term(u.concat(v), cu * dv);
    }
  }
  return out;
}

inline Series shuffle(const Series& c, const Series& d) {
  require_same_alphabet(c, d, "shuffle");
  Series out(c.alphabet(), std::min(c.horizon(), d.horizon()));
  const std::size_t L = out.horizon();
  for (const auto& [u, cu] : c.terms()) {
    if (u.length() > L) break;
    for (const auto& [v, dv] : d.terms()) {
      if (u.length() + v.length() > L) break;
      const Rational weight = cu * dv;
      for (const auto& [w, mult] : shuffle_words(u, v)) out.add_term(w, weight * Rational(mult));
    }
  }
  return out;
}

/// c^{⧢n}, with c^{⧢0} = 1.
inline Series shuffle_power(const Series& c, std::size_t n) {
  Series out = Series::one(c.alphabet(), c.horizon());
  for (std::size_t k = 0; k < n; ++k) out = shuffle(c, out);
  return out;
}

/// xi^{-1}(c): keeps the words starting with xi and strips that prefix.
inline Series left_shift(const Series& c, const Word& xi) {
  validate_word(xi, c.alphabet());
  const std::size_t h = c.horizon() >= xi.length() ? c.horizon() - xi.length() : 0;
  Series out(c.alphabet(), h);
  for (const auto& [w, v] : c.terms())
    if (w.starts_with(xi)) out.add_term(w.drop_front(xi.length()), v);
  return out;
}

/// xi c
inline Series augment_left(const Word& xi, const Series& c) {
  validate_word(xi, c.alphabet());
  Series out(c.alphabet(), c.horizon() + xi.length());
  for (const auto& [w, v] : c.terms()) out.add_term(xi.concat(w), v);
  return out;
}

/// c xi
inline Series augment_right(const Series& c, const Word& xi) {
  validate_word(xi, c.alphabet());
  Series out(c.alphabet(), c.horizon() + xi.length());
  for (const auto& [w, v] : c.terms()) out.add_term(w.concat(xi), v);
  return out;
}

/// Words of the support grouped by length: result[k] = |supp(c) ∩ X^k|.
inline std::vector<std::size_t> support_counts_by_length(const Series& c) {
  std::vector<std::size_t> counts(c.horizon() + 1, 0);
  for (const auto& [w, v] : c.terms()) ++counts[w.length()];
  return counts;
}

} // namespace cfs
