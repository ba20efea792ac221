#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cfseries/errors.hpp"
#include "cfseries/rational.hpp"
#include "cfseries/series.hpp"
#include "cfseries/words.hpp"

namespace cfs {

struct DegreeCount {
  std::size_t degree = 0;
  std::size_t count = 0;  // |supp_n(c)|
  BigInt dimension;       // |X(n)|
  bool complete = false;
};

/// Per-degree support counts of a truncated series under a grading.
///
/// Degrees above `complete_up_to` contain words longer than the horizon, so
/// their counts are lower bounds only and are marked incomplete.
struct SupportProfile {
  Grading grading;
  std::size_t complete_up_to = 0;
  std::vector<DegreeCount> rows;  // degree 0 .. max(complete_up_to, top degree present)
  std::vector<std::size_t> support_sequence;  // complete degrees with nonzero count

  std::size_t count(std::size_t degree) const { return degree < rows.size() ? rows[degree].count : 0; }
};

inline SupportProfile support_profile(const Series& c, const Grading& g) {
  if (c.alphabet() != g.alphabet)
    throw AlphabetMismatchError("support_profile: grading alphabet differs from series alphabet");
  SupportProfile p{g, g.complete_degree(c.horizon()), {}, {}};
  std::vector<std::size_t> counts(p.complete_up_to + 1, 0);
  for (const auto& [w, v] : c.terms()) {
    const std::size_t deg = word_degree(w, g);
    if (deg >= counts.size()) counts.resize(deg + 1, 0);
    ++counts[deg];
  }
  const auto dims = grading_dimensions(g, counts.size() - 1);
  p.rows.reserve(counts.size());
  for (std::size_t n = 0; n < counts.size(); ++n) {
    const bool complete = n <= p.complete_up_to;
    p.rows.push_back({n, counts[n], dims[n], complete});
    if (complete && counts[n] > 0) p.support_sequence.push_back(n);
  }
  return p;
}

struct EntropyOptions {
  std::size_t window = 8;
  /// Report 0 when no complete degree in the upper half of the range is occupied.
  bool detect_polynomial = true;
};

struct EntropyTerm {
  std::size_t degree = 0;
  double a = 0;  // log_gamma(count) / degree
};

struct EntropyEstimate {
  std::vector<EntropyTerm> sequence;
  double estimate = 0;
  std::size_t window = 0;
  double gamma = 0;
  bool treated_as_polynomial = false;
};

/// Windowed-max surrogate of limsup_k log_gamma|supp_{n_k}(c)| / n_k.
///
/// Degree 0 is never part of the sequence: a_k divides by n_k.
inline EntropyEstimate entropy_estimate(const SupportProfile& p, const EntropyOptions& opt = {}) {
  if (opt.window < 1) throw ValidationError("entropy window must be >= 1");
  if (p.complete_up_to < 1)
    throw InsufficientHorizonError("horizon too short: no complete positive degree under grading '" +
                                   p.grading.name + "'");
  EntropyEstimate e;
  e.window = opt.window;
  e.gamma = growth_params(p.grading).gamma;
  const double log_gamma = std::log(e.gamma);
  for (std::size_t n : p.support_sequence) {
    if (n == 0) continue;
    e.sequence.push_back({n, std::log(static_cast<double>(p.rows[n].count)) / (static_cast<double>(n) * log_gamma)});
  }
  if (opt.detect_polynomial) {
    const std::size_t half = p.complete_up_to / 2;
    const bool upper_occupied =
        std::any_of(e.sequence.begin(), e.sequence.end(), [&](const EntropyTerm& t) { return t.degree > half; });
    if (!upper_occupied) {
      e.treated_as_polynomial = true;
      return e;
    }
  }
  const std::size_t first = e.sequence.size() > opt.window ? e.sequence.size() - opt.window : 0;
  for (std::size_t i = first; i < e.sequence.size(); ++i) e.estimate = std::max(e.estimate, e.sequence[i].a);
  // Finite-n rounding and the grading constant K can push a_k a hair past 1.
  e.estimate = std::clamp(e.estimate, 0.0, 1.0);
  return e;
}

/// h(c - d) on the shared horizon.
inline EntropyEstimate entropy_distance(const Series& c, const Series& d, const Grading& g,
                                        const EntropyOptions& opt = {}) {
  require_same_alphabet(c, d, "entropy_distance");
  if (c.horizon() != d.horizon())
    throw HorizonError("entropy_distance: horizons differ (" + std::to_string(c.horizon()) + " vs " +
                       std::to_string(d.horizon()) + ")");
  return entropy_estimate(support_profile(subtract(c, d), g), opt);
}

// ---------------------------------------------------------------------------
// CSV: degree,count,dimension,a_k,complete  (+ summary row)

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

inline void write_profile_csv(std::ostream& os, const SupportProfile& p, const EntropyEstimate* e = nullptr) {
  os << "degree,count,dimension,a_k,complete\n";
  std::size_t next_term = 0;
  for (const auto& r : p.rows) {
    os << r.degree << ',' << r.count << ',' << r.dimension.get_str() << ',';
    if (e != nullptr) {
      while (next_term < e->sequence.size() && e->sequence[next_term].degree < r.degree) ++next_term;
      if (next_term < e->sequence.size() && e->sequence[next_term].degree == r.degree)
        os << format_double(e->sequence[next_term].a);
    }
    os << ',' << (r.complete ? 1 : 0) << '\n';
  }
  if (e != nullptr)
    os << "estimate," << format_double(e->estimate) << ",gamma=" << format_double(e->gamma)
       << ",window=" << e->window << ",polynomial=" << (e->treated_as_polynomial ? 1 : 0) << '\n';
}

} // namespace cfs
