#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfseries/errors.hpp"
#include "cfseries/rational.hpp"

namespace cfs {

/// Alphabet {x0, ..., xm}. Letter 0 is the drift letter.
class Alphabet {
public:
  static constexpr int kMaxM = 15;

  constexpr Alphabet() = default;
  explicit Alphabet(int m) : m_(m) {
    if (m < 0 || m > kMaxM)
      throw ValidationError("alphabet size parameter m=" + std::to_string(m) +
                            " outside 0.." + std::to_string(kMaxM));
  }

  constexpr int m() const noexcept { return m_; }
  constexpr int size() const noexcept { return m_ + 1; }
  constexpr bool contains(int letter) const noexcept { return letter >= 0 && letter <= m_; }

  friend constexpr bool operator==(Alphabet, Alphabet) = default;

private:
  int m_ = 1;
};

/// A word over at most 16 letters, packed four bits per letter, most significant first.
///
/// Ordering is by length, then lexicographic by letter index, which is the
/// canonical order of every table and every printed listing.
class Word {
public:
  static constexpr std::size_t kMaxLength = 64;

  Word() = default;
  Word(std::initializer_list<int> letters) {
    for (int l : letters) push_back(l);
  }
  explicit Word(std::span<const int> letters) {
    for (int l : letters) push_back(l);
  }

  static Word repeat(int letter, std::size_t count) {
    Word w;
    for (std::size_t i = 0; i < count; ++i) w.push_back(letter);
    return w;
  }

  std::size_t length() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  int operator[](std::size_t pos) const noexcept {
    return static_cast<int>((blocks_[pos / 16] >> shift(pos)) & 0xFu);
  }
  int front() const noexcept { return (*this)[0]; }
  int back() const noexcept { return (*this)[length_ - 1]; }

  void push_back(int letter) {
    if (letter < 0 || letter > Alphabet::kMaxM)
      throw InvalidWordError("letter index " + std::to_string(letter) + " out of range");
    if (length_ >= kMaxLength)
      throw InvalidWordError("word longer than " + std::to_string(kMaxLength) + " letters");
    blocks_[length_ / 16] |= static_cast<std::uint64_t>(letter) << shift(length_);
    ++length_;
  }

  Word concat(const Word& other) const {
    Word w = *this;
    for (std::size_t i = 0; i < other.length_; ++i) w.push_back(other[i]);
    return w;
  }

  Word prepend(int letter) const {
    Word w;
    w.push_back(letter);
    return w.concat(*this);
  }

  /// Letters [pos, pos+count).
  Word slice(std::size_t pos, std::size_t count) const {
    Word w;
    for (std::size_t i = pos; i < pos + count && i < length_; ++i) w.push_back((*this)[i]);
    return w;
  }

  Word drop_front(std::size_t count) const {
    return count >= length_ ? Word{} : slice(count, length_ - count);
  }

  bool starts_with(const Word& prefix) const noexcept {
    if (prefix.length_ > length_) return false;
    for (std::size_t i = 0; i < prefix.length_; ++i)
      if ((*this)[i] != prefix[i]) return false;
    return true;
  }

  Word reversed() const {
    Word w;
    for (std::size_t i = length_; i-- > 0;) w.push_back((*this)[i]);
    return w;
  }

  /// |w|_{x_letter}
  std::size_t count(int letter) const noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < length_; ++i) n += ((*this)[i] == letter);
    return n;
  }

  int max_letter() const noexcept {
    int best = -1;
    for (std::size_t i = 0; i < length_; ++i) best = std::max(best, (*this)[i]);
    return best;
  }

  std::vector<int> letters() const {
    std::vector<int> out(length_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = (*this)[i];
    return out;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    return a.blocks_ <=> b.blocks_;
  }

  std::size_t hash() const noexcept {
    std::size_t h = length_;
    for (auto b : blocks_) h ^= std::hash<std::uint64_t>{}(b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

private:
  static constexpr unsigned shift(std::size_t pos) noexcept {
    return static_cast<unsigned>(60 - 4 * (pos % 16));
  }

  std::array<std::uint64_t, 4> blocks_{};
  std::uint8_t length_ = 0;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept { return w.hash(); }
};

inline void validate_word(const Word& w, Alphabet a) {
  if (w.max_letter() > a.m())
    throw InvalidWordError("letter x" + std::to_string(w.max_letter()) +
                           " not in alphabet with m=" + std::to_string(a.m()));
}

/// Display syntax: "x0 x1 x0", and "e" for the empty word.
inline std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.length(); ++i) {
    if (i) out += ' ';
    out += 'x';
    out += std::to_string(w[i]);
  }
  return out;
}

inline Word parse_word(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  Word w;
  bool saw_empty = false, saw_letter = false;
  while (in >> tok) {
    if (tok == "e") {
      saw_empty = true;
      continue;
    }
    if (tok.size() < 2 || tok[0] != 'x')
      throw ParseError("bad word token '" + tok + "' in '" + std::string(text) + "'");
    int letter = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(tok[i])))
        throw ParseError("bad word token '" + tok + "'");
      letter = letter * 10 + (tok[i] - '0');
      if (letter > Alphabet::kMaxM) throw InvalidWordError("letter '" + tok + "' out of range");
    }
    w.push_back(letter);
    saw_letter = true;
  }
  if (saw_empty && saw_letter) throw ParseError("'e' cannot be combined with letters");
  return w;
}

/// All words of length <= max_len, shortest first, lexicographic within a length.
inline std::vector<Word> enumerate_words(Alphabet a, std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t layer_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i)
      for (int l = 0; l <= a.m(); ++l) out.push_back(out[i].concat(Word{l}));
    layer_begin = layer_end;
  }
  return out;
}

/// Words of exactly length `len`, lexicographic.
inline std::vector<Word> enumerate_words_of_length(Alphabet a, std::size_t len) {
  std::vector<Word> layer{Word{}};
  for (std::size_t k = 0; k < len; ++k) {
    std::vector<Word> next;
    next.reserve(layer.size() * a.size());
    for (const auto& w : layer)
      for (int l = 0; l <= a.m(); ++l) next.push_back(w.concat(Word{l}));
    layer = std::move(next);
  }
  return layer;
}

// ---------------------------------------------------------------------------
// Gradings

/// deg(w) = sum_i letter_degrees[i] * |w|_{x_i} + empty_word_degree.
struct Grading {
  std::string name;
  Alphabet alphabet;
  std::vector<int> letter_degrees;
  int empty_word_degree = 0;

  Grading(std::string name, Alphabet a, std::vector<int> degrees, int empty_degree)
      : name(std::move(name)), alphabet(a), letter_degrees(std::move(degrees)),
        empty_word_degree(empty_degree) {
    if (letter_degrees.size() != static_cast<std::size_t>(a.size()))
      throw ValidationError("grading needs one degree per letter");
    for (int d : letter_degrees)
      if (d < 1) throw ValidationError("letter degrees must be >= 1");
    if (empty_word_degree < 0) throw ValidationError("empty-word degree must be >= 0");
  }

  static Grading word_length(Alphabet a) {
    return Grading("wordlen", a, std::vector<int>(a.size(), 1), 0);
  }

  /// x0 weighs 2, every other letter 1, and the empty word has degree 1.
  static Grading alternative(Alphabet a) {
    std::vector<int> d(a.size(), 1);
    d[0] = 2;
    return Grading("alt", a, std::move(d), 1);
  }

  static Grading from_name(std::string_view name, Alphabet a) {
    if (name == "wordlen") return word_length(a);
    if (name == "alt") return alternative(a);
    throw ValidationError("unknown grading '" + std::string(name) + "' (expected wordlen or alt)");
  }

  int min_letter_degree() const { return *std::min_element(letter_degrees.begin(), letter_degrees.end()); }

  /// Largest degree n such that every word of degree <= n has length <= horizon.
  std::size_t complete_degree(std::size_t horizon) const {
    return static_cast<std::size_t>(empty_word_degree) +
           static_cast<std::size_t>(min_letter_degree()) * (horizon + 1) - 1;
  }
};

inline std::size_t word_degree(const Word& w, const Grading& g) {
  validate_word(w, g.alphabet);
  std::size_t deg = static_cast<std::size_t>(g.empty_word_degree);
  for (std::size_t i = 0; i < w.length(); ++i) deg += static_cast<std::size_t>(g.letter_degrees[w[i]]);
  return deg;
}

/// dim(0..n_max): number of words of each degree, by DP over total letter weight.
inline std::vector<BigInt> grading_dimensions(const Grading& g, std::size_t n_max) {
  std::vector<BigInt> weight_count(n_max + 1, 0);
  weight_count[0] = 1;
  for (std::size_t w = 1; w <= n_max; ++w)
    for (int d : g.letter_degrees)
      if (static_cast<std::size_t>(d) <= w) weight_count[w] += weight_count[w - d];
  std::vector<BigInt> dims(n_max + 1, 0);
  const auto e = static_cast<std::size_t>(g.empty_word_degree);
  for (std::size_t n = e; n <= n_max; ++n) dims[n] = weight_count[n - e];
  return dims;
}

inline BigInt grading_dimension(const Grading& g, std::size_t n) { return grading_dimensions(g, n)[n]; }

struct GrowthParams {
  double gamma = 0;
  double gamma_bisection = 0;
  std::optional<double> gamma_closed_form;
  /// Diagnostic only: dim(n) / gamma^n at a large n.
  double k_constant = 0;
};

inline std::optional<double> growth_closed_form(const Grading& g) {
  const int m = g.alphabet.m();
  if (std::all_of(g.letter_degrees.begin(), g.letter_degrees.end(), [](int d) { return d == 1; }))
    return static_cast<double>(m + 1);
  const bool alt_shape = g.letter_degrees[0] == 2 &&
                         std::all_of(g.letter_degrees.begin() + 1, g.letter_degrees.end(),
                                     [](int d) { return d == 1; });
  if (alt_shape && m >= 1) return (m + std::sqrt(static_cast<double>(m * m + 4))) / 2.0;
  return std::nullopt;
}

/// gamma = 1/rho with rho the root in (0,1) of 1 - sum_i z^{deg x_i}.
inline GrowthParams growth_params(const Grading& g) {
  const auto f = [&](double z) {
    double s = 1.0;
    for (int d : g.letter_degrees) s -= std::pow(z, d);
    return s;
  };
  if (f(1.0) >= 0.0)
    throw ValidationError("grading '" + g.name + "' has no exponential growth (needs at least two letters)");
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  GrowthParams p;
  p.gamma_bisection = 1.0 / (0.5 * (lo + hi));
  p.gamma_closed_form = growth_closed_form(g);
  p.gamma = p.gamma_closed_form.value_or(p.gamma_bisection);

  constexpr std::size_t kSample = 200;
  const BigInt d = grading_dimension(g, kSample);
  if (d > 0) {
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, d.get_mpz_t());
    const double log_d = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
    p.k_constant = std::exp(log_d - static_cast<double>(kSample) * std::log(p.gamma));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Shuffle of words

/// a ⧢ b as a multiset; keys are the distinct interleavings.
///
/// Runs a layered walk over (letters consumed from a, prefix) states so that
/// identical prefixes reached along different paths are merged.
inline std::map<Word, std::uint64_t> shuffle_words(const Word& a, const Word& b) {
  if (a.length() + b.length() > Word::kMaxLength)
    throw InvalidWordError("shuffle result exceeds maximum word length");
  std::map<std::pair<std::size_t, Word>, std::uint64_t> layer{{{0, Word{}}, 1}};
  const std::size_t total = a.length() + b.length();
  for (std::size_t k = 0; k < total; ++k) {
    std::map<std::pair<std::size_t, Word>, std::uint64_t> next;
    for (const auto& [state, mult] : layer) {
      const auto& [i, prefix] = state;
      const std::size_t j = k - i;
      if (i < a.length()) next[{i + 1, prefix.concat(Word{a[i]})}] += mult;
      if (j < b.length()) next[{i, prefix.concat(Word{b[j]})}] += mult;
    }
    layer = std::move(next);
  }
  std::map<Word, std::uint64_t> out;
  for (const auto& [state, mult] : layer) out[state.second] += mult;
  return out;
}

} // namespace cfs

template <>
struct std::hash<cfs::Word> {
  std::size_t operator()(const cfs::Word& w) const noexcept { return w.hash(); }
};
