#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfseries/chen_fliess.hpp"
#include "cfseries/errors.hpp"
#include "cfseries/interconnect.hpp"
#include "cfseries/rational.hpp"
#include "cfseries/series.hpp"
#include "cfseries/words.hpp"

namespace cfs {

// ---------------------------------------------------------------------------
// Polynomial literals: `<rational> <word>` terms joined by `+` or newlines,
// e.g. "2 x1 x1 + 1 x0". A missing coefficient means 1, a missing word means e.

inline std::vector<std::pair<Word, Rational>> parse_polynomial(std::string_view text) {
  std::vector<std::pair<Word, Rational>> terms;
  std::string normalized(text);
  for (char& ch : normalized)
    if (ch == '\n' || ch == '\r') ch = '+';
  std::size_t start = 0, term_index = 0;
  bool any = false;
  while (start <= normalized.size()) {
    std::size_t end = normalized.find('+', start);
    if (end == std::string::npos) end = normalized.size();
    const std::string piece = normalized.substr(start, end - start);
    start = end + 1;
    ++term_index;
    std::istringstream in(piece);
    std::string first;
    if (!(in >> first)) continue;
    any = true;
    Rational coeff = 1;
    std::string word_text;
    if (first != "e" && first[0] != 'x') {
      try {
        coeff = parse_rational(first);
      } catch (const ParseError& e) {
        throw ParseError("term " + std::to_string(term_index) + ": " + e.what());
      }
    } else {
      word_text = first;
    }
    std::string rest;
    std::getline(in, rest);
    word_text += " " + rest;
    try {
      terms.emplace_back(parse_word(word_text), coeff);
    } catch (const ValidationError& e) {
      throw ParseError("term " + std::to_string(term_index) + ": " + e.what());
    }
  }
  if (!any) throw ParseError("empty polynomial literal");
  return terms;
}

/// One `coefficient word` line per nonzero term, in (length, lex) order; "0" for the zero series.
inline void write_series(std::ostream& os, const Series& c) {
  if (c.is_zero()) {
    os << "0\n";
    return;
  }
  for (const auto& [w, v] : c.terms()) os << to_string(v) << ' ' << to_string(w) << '\n';
}

inline std::string format_series(const Series& c) {
  std::ostringstream os;
  write_series(os, c);
  return os.str();
}

// ---------------------------------------------------------------------------
// Realization documents
//
//   n 1          state dimension
//   m 1          number of inputs
//   A0 1         n*n entries, row-major (missing A_i are zero)
//   A1 1
//   b1 0         n entries (missing b_i are zero)
//   C 1          n entries
//   z0 1         n entries
//
// `#` starts a comment.

inline BilinearRealization parse_realization(std::istream& in) {
  std::map<std::string, std::vector<Rational>> fields;
  std::map<std::string, std::size_t> line_of;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (fields.contains(key)) throw ParseError("realization line " + std::to_string(lineno) + ": duplicate '" + key + "'");
    std::vector<Rational> vals;
    std::string tok;
    while (ls >> tok) {
      try {
        vals.push_back(parse_rational(tok));
      } catch (const ParseError& e) {
        throw ParseError("realization line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    fields.emplace(key, std::move(vals));
    line_of.emplace(key, lineno);
  }
  const auto scalar = [&](const std::string& key) -> long {
    auto it = fields.find(key);
    if (it == fields.end() || it->second.size() != 1 || it->second[0].get_den() != 1 || it->second[0] < 0)
      throw ParseError("realization: '" + key + "' must be a single nonnegative integer");
    return it->second[0].get_num().get_si();
  };
  BilinearRealization R;
  R.n = static_cast<std::size_t>(scalar("n"));
  R.alphabet = Alphabet(static_cast<int>(scalar("m")));
  const std::size_t n = R.n;
  const auto vec = [&](const std::string& key, bool required) -> RVector {
    auto it = fields.find(key);
    if (it == fields.end()) {
      if (required) throw ParseError("realization: missing '" + key + "'");
      return RVector(n, 0);
    }
    if (it->second.size() != n)
      throw DimensionError("realization line " + std::to_string(line_of[key]) + ": '" + key + "' needs " +
                           std::to_string(n) + " entries");
    return it->second;
  };
  for (int i = 0; i <= R.alphabet.m(); ++i) {
    const std::string akey = "A" + std::to_string(i);
    RMatrix M(n, n);
    if (auto it = fields.find(akey); it != fields.end()) {
      if (it->second.size() != n * n)
        throw DimensionError("realization line " + std::to_string(line_of[akey]) + ": '" + akey + "' needs " +
                             std::to_string(n * n) + " entries");
      M.data = it->second;
    }
    R.A.push_back(std::move(M));
    R.b.push_back(vec("b" + std::to_string(i), false));
  }
  R.C = vec("C", true);
  R.z0 = vec("z0", true);
  for (const auto& [key, vals] : fields) {
    const bool known = key == "n" || key == "m" || key == "C" || key == "z0" ||
                       ((key[0] == 'A' || key[0] == 'b') && key.size() > 1 &&
                        key.find_first_not_of("0123456789", 1) == std::string::npos &&
                        std::stoi(key.substr(1)) <= R.alphabet.m());
    if (!known) throw ParseError("realization line " + std::to_string(line_of[key]) + ": unknown key '" + key + "'");
  }
  R.validate();
  return R;
}

inline BilinearRealization parse_realization(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_realization(in);
}

// ---------------------------------------------------------------------------
// Input-signal documents: one `t_start t_end u_1 ... u_m` line per segment.

inline InputSignal parse_input_signal(std::istream& in) {
  std::vector<InputSegment> segs;
  std::string line;
  std::size_t lineno = 0;
  int m = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> nums;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("input line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
    if (nums.empty()) continue;
    if (nums.size() < 3) throw ParseError("input line " + std::to_string(lineno) + ": need t_start t_end and values");
    const int cols = static_cast<int>(nums.size()) - 2;
    if (m >= 0 && cols != m) throw ParseError("input line " + std::to_string(lineno) + ": inconsistent channel count");
    m = cols;
    segs.push_back({nums[0], nums[1], std::vector<double>(nums.begin() + 2, nums.end())});
  }
  if (segs.empty()) throw ParseError("input document has no segments");
  return InputSignal(m, std::move(segs));
}

inline InputSignal parse_input_signal(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_input_signal(in);
}

} // namespace cfs
