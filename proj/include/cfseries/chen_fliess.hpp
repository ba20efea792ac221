#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cfseries/entropy.hpp"
#include "cfseries/errors.hpp"
#include "cfseries/interconnect.hpp"
#include "cfseries/series.hpp"
#include "cfseries/words.hpp"

namespace cfs {

using Trace = std::vector<double>;

/// Uniform grid on [0, T] with `steps` intervals.
struct SimGrid {
  double T = 1.0;
  std::size_t steps = 1;

  SimGrid() = default;
  SimGrid(double final_time, std::size_t n) : T(final_time), steps(n) {
    if (!(T > 0) || !std::isfinite(T)) throw ValidationError("final time T must be positive and finite");
    if (steps < 1) throw ValidationError("grid needs at least one step");
  }

  double step() const noexcept { return T / static_cast<double>(steps); }
  double time(std::size_t j) const noexcept { return T * static_cast<double>(j) / static_cast<double>(steps); }
};

struct InputSegment {
  double t_start = 0;
  double t_end = 0;
  std::vector<double> values;  // u_1 .. u_m on [t_start, t_end)
};

/// Piecewise-constant input u = (u_1, ..., u_m); channel 0 is the constant 1.
class InputSignal {
public:
  InputSignal() = default;
  InputSignal(int m, std::vector<InputSegment> segments) : m_(m), segments_(std::move(segments)) {
    if (segments_.empty()) throw ValidationError("input signal has no segments");
    for (std::size_t k = 0; k < segments_.size(); ++k) {
      const auto& s = segments_[k];
      if (s.values.size() != static_cast<std::size_t>(m_))
        throw ValidationError("input segment " + std::to_string(k) + " has " + std::to_string(s.values.size()) +
                              " values, expected " + std::to_string(m_));
      if (!(s.t_end > s.t_start)) throw ValidationError("input segment " + std::to_string(k) + " is empty or reversed");
      for (double v : s.values)
        if (!std::isfinite(v)) throw ValidationError("non-finite input value in segment " + std::to_string(k));
      if (k > 0 && std::abs(s.t_start - segments_[k - 1].t_end) > 1e-12 * std::max(1.0, s.t_start))
        throw ValidationError("input segments are not contiguous at t=" + std::to_string(s.t_start));
    }
    if (std::abs(segments_.front().t_start) > 1e-12) throw ValidationError("input must start at t=0");
  }

  static InputSignal constant(int m, double T, std::vector<double> values) {
    return InputSignal(m, {{0.0, T, std::move(values)}});
  }

  int m() const noexcept { return m_; }
  const std::vector<InputSegment>& segments() const noexcept { return segments_; }
  double end_time() const noexcept { return segments_.back().t_end; }

  double sup_norm() const noexcept {
    double r = 0;
    for (const auto& s : segments_)
      for (double v : s.values) r = std::max(r, std::abs(v));
    return r;
  }

private:
  int m_ = 1;
  std::vector<InputSegment> segments_;
};

/// Input values at the two ends of every grid interval, per channel (0 .. m).
/// Piecewise-constant inputs have equal ends; sampled traces are linear in between.
struct SampledInput {
  std::vector<std::vector<double>> left;
  std::vector<std::vector<double>> right;

  std::size_t channels() const noexcept { return left.size(); }

  double sup_norm() const noexcept {
    double r = 0;
    for (std::size_t i = 1; i < left.size(); ++i)
      for (std::size_t j = 0; j < left[i].size(); ++j) r = std::max({r, std::abs(left[i][j]), std::abs(right[i][j])});
    return r;
  }

  static SampledInput ones_channel(std::size_t steps) {
    SampledInput s;
    s.left.emplace_back(steps, 1.0);
    s.right.emplace_back(steps, 1.0);
    return s;
  }

  static SampledInput from_signal(const InputSignal& u, const SimGrid& grid) {
    const double tol = 1e-9 * grid.T;
    if (std::abs(u.end_time() - grid.T) > tol)
      throw ValidationError("input covers [0," + format_double(u.end_time()) + "] but the grid ends at T=" +
                            format_double(grid.T));
    for (const auto& seg : u.segments()) {
      const double pos = seg.t_start / grid.step();
      if (std::abs(pos - std::round(pos)) * grid.step() > tol)
        throw ValidationError("input breakpoint t=" + format_double(seg.t_start) + " is not a grid point");
    }
    SampledInput s = ones_channel(grid.steps);
    for (int i = 0; i < u.m(); ++i) {
      std::vector<double> vals(grid.steps);
      std::size_t seg = 0;
      for (std::size_t j = 0; j < grid.steps; ++j) {
        const double mid = grid.time(j) + 0.5 * grid.step();
        while (seg + 1 < u.segments().size() && mid >= u.segments()[seg].t_end) ++seg;
        vals[j] = u.segments()[seg].values[static_cast<std::size_t>(i)];
      }
      s.left.push_back(vals);
      s.right.push_back(std::move(vals));
    }
    return s;
  }

  /// Channels 1..m from traces sampled at the grid points.
  static SampledInput from_traces(std::span<const Trace> traces, const SimGrid& grid) {
    SampledInput s = ones_channel(grid.steps);
    for (const auto& tr : traces) {
      if (tr.size() != grid.steps + 1) throw ValidationError("trace length does not match the grid");
      s.left.emplace_back(tr.begin(), tr.end() - 1);
      s.right.emplace_back(tr.begin() + 1, tr.end());
    }
    return s;
  }
};

namespace detail {

inline Trace integrate_channel(const SampledInput& u, std::size_t channel, const Trace& inner, double h) {
  const auto& ul = u.left[channel];
  const auto& ur = u.right[channel];
  Trace out(inner.size());
  out[0] = 0.0;
  for (std::size_t j = 0; j + 1 < inner.size(); ++j)
    out[j + 1] = out[j] + 0.5 * h * (ul[j] * inner[j] + ur[j] * inner[j + 1]);
  return out;
}

/// Visits E_eta for every eta in `needed` (closed under taking suffixes),
/// building each trace from its suffix by one cumulative trapezoid.
template <class Visit>
void walk_iterated_integrals(int m, const std::set<Word>& needed, const SampledInput& u, const SimGrid& grid,
                             Visit&& visit) {
  if (u.channels() != static_cast<std::size_t>(m) + 1)
    throw ValidationError("input has " + std::to_string(u.channels() - 1) + " channels, alphabet needs " +
                          std::to_string(m));
  const double h = grid.step();
  const auto dfs = [&](const Word& eta, const Trace& E, auto&& self) -> void {
    visit(eta, E);
    if (eta.length() == Word::kMaxLength) return;
    for (int letter = 0; letter <= m; ++letter) {
      Word child = eta.prepend(letter);
      if (!needed.contains(child)) continue;
      self(child, integrate_channel(u, static_cast<std::size_t>(letter), E, h), self);
    }
  };
  if (needed.contains(Word{})) dfs(Word{}, Trace(grid.steps + 1, 1.0), dfs);
}

inline std::set<Word> suffix_closure(std::span<const Word> words) {
  std::set<Word> out;
  for (const auto& w : words)
    for (std::size_t k = 0; k <= w.length(); ++k)
      if (!out.insert(w.drop_front(k)).second) break;
  return out;
}

} // namespace detail

/// E_eta[u](t_j) for each requested word.
inline std::map<Word, Trace> iterated_integrals(Alphabet a, std::span<const Word> words, const SampledInput& u,
                                                const SimGrid& grid) {
  for (const auto& w : words) validate_word(w, a);
  const std::set<Word> wanted(words.begin(), words.end());
  std::map<Word, Trace> out;
  detail::walk_iterated_integrals(a.m(), detail::suffix_closure(words), u, grid, [&](const Word& w, const Trace& E) {
    if (wanted.contains(w)) out.emplace(w, E);
  });
  return out;
}

inline std::map<Word, Trace> iterated_integrals(Alphabet a, std::size_t max_len, const InputSignal& u,
                                                const SimGrid& grid) {
  const auto words = enumerate_words(a, max_len);
  return iterated_integrals(a, words, SampledInput::from_signal(u, grid), grid);
}

struct OperatorOutput {
  Trace y;
  /// K (M(m+1)(R+1)T)^{L+1} / (1 - M(m+1)(R+1)T), when a witness is given and the ratio is < 1.
  std::optional<double> tail_indicator;
};

/// y(t_j) = sum_{|eta| <= L} (c, eta) E_eta[u](t_j)
inline OperatorOutput evaluate_operator(const Series& c, const SampledInput& u, const SimGrid& grid,
                                        const std::optional<GrowthWitness>& witness = std::nullopt) {
  OperatorOutput out;
  out.y.assign(grid.steps + 1, 0.0);
  std::vector<Word> support;
  support.reserve(c.support_size());
  for (const auto& [w, v] : c.terms()) support.push_back(w);
  const auto needed = detail::suffix_closure(support);
  detail::walk_iterated_integrals(c.alphabet().m(), needed, u, grid, [&](const Word& w, const Trace& E) {
    auto it = c.terms().find(w);
    if (it == c.terms().end()) return;
    const double coeff = it->second.get_d();
    for (std::size_t j = 0; j < E.size(); ++j) out.y[j] += coeff * E[j];
  });
  if (witness) {
    const double ratio = witness->M.get_d() * (c.alphabet().m() + 1) * (u.sup_norm() + 1.0) * grid.T;
    if (ratio < 1.0)
      out.tail_indicator =
          witness->K.get_d() * std::pow(ratio, static_cast<double>(c.horizon() + 1)) / (1.0 - ratio);
  }
  return out;
}

inline OperatorOutput evaluate_operator(const Series& c, const InputSignal& u, const SimGrid& grid,
                                        const std::optional<GrowthWitness>& witness = std::nullopt) {
  if (u.m() != c.alphabet().m()) throw ValidationError("input channel count does not match the alphabet");
  return evaluate_operator(c, SampledInput::from_signal(u, grid), grid, witness);
}

/// Classical RK4 on z' = (A0 z + b0) + sum_i u_i (A_i z + b_i), y = C z.
inline Trace simulate_realization(const BilinearRealization& R, const SampledInput& u, const SimGrid& grid) {
  R.validate();
  const std::size_t n = R.n;
  const auto letters = static_cast<std::size_t>(R.alphabet.size());
  if (u.channels() != letters) throw ValidationError("input channel count does not match the realization");
  std::vector<std::vector<double>> A(letters, std::vector<double>(n * n)), b(letters, std::vector<double>(n));
  for (std::size_t i = 0; i < letters; ++i) {
    for (std::size_t k = 0; k < n * n; ++k) A[i][k] = R.A[i].data[k].get_d();
    for (std::size_t k = 0; k < n; ++k) b[i][k] = R.b[i][k].get_d();
  }
  std::vector<double> C(n), z(n);
  for (std::size_t k = 0; k < n; ++k) {
    C[k] = R.C[k].get_d();
    z[k] = R.z0[k].get_d();
  }
  const auto field = [&](std::size_t j, double s, const std::vector<double>& x) {
    std::vector<double> dz(n, 0.0);
    for (std::size_t i = 0; i < letters; ++i) {
      const double ui = u.left[i][j] + s * (u.right[i][j] - u.left[i][j]);
      if (ui == 0.0) continue;
      for (std::size_t r = 0; r < n; ++r) {
        double acc = b[i][r];
        for (std::size_t c = 0; c < n; ++c) acc += A[i][r * n + c] * x[c];
        dz[r] += ui * acc;
      }
    }
    return dz;
  };
  const auto output = [&](const std::vector<double>& x) {
    double y = 0;
    for (std::size_t k = 0; k < n; ++k) y += C[k] * x[k];
    return y;
  };
  const auto axpy = [&](const std::vector<double>& x, double a, const std::vector<double>& d) {
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = x[k] + a * d[k];
    return r;
  };

  const double h = grid.step();
  Trace y(grid.steps + 1);
  y[0] = output(z);
  for (std::size_t j = 0; j < grid.steps; ++j) {
    const auto k1 = field(j, 0.0, z);
    const auto k2 = field(j, 0.5, axpy(z, 0.5 * h, k1));
    const auto k3 = field(j, 0.5, axpy(z, 0.5 * h, k2));
    const auto k4 = field(j, 1.0, axpy(z, h, k3));
    for (std::size_t k = 0; k < n; ++k) z[k] += h / 6.0 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
    y[j + 1] = output(z);
  }
  return y;
}

inline Trace simulate_realization(const BilinearRealization& R, const InputSignal& u, const SimGrid& grid) {
  return simulate_realization(R, SampledInput::from_signal(u, grid), grid);
}

inline double max_abs_difference(const Trace& a, const Trace& b) {
  double d = 0;
  for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

/// max_t |F_c[u] F_d[u] - F_{c⧢d}[u]|
inline double compare_parallel_product(const Series& c, const Series& d, const InputSignal& u, const SimGrid& grid) {
  const auto yc = evaluate_operator(c, u, grid).y;
  const auto yd = evaluate_operator(d, u, grid).y;
  const auto ycd = evaluate_operator(shuffle(c, d), u, grid).y;
  Trace prod(yc.size());
  for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = yc[j] * yd[j];
  return max_abs_difference(prod, ycd);
}

/// max_t |F_c[F_d[u]] - F_{c∘d}[u]| for single-input systems.
inline double compare_cascade(const Series& c, const Series& d, const InputSignal& u, const SimGrid& grid) {
  if (c.alphabet().m() != 1 || d.alphabet().m() != 1)
    throw ValidationError("compare_cascade handles single-input series only");
  const Trace inner = evaluate_operator(d, u, grid).y;
  const auto fed = SampledInput::from_traces(std::span<const Trace>(&inner, 1), grid);
  const Trace outer = evaluate_operator(c, fed, grid).y;
  const Trace direct = evaluate_operator(compose(c, d), u, grid).y;
  return max_abs_difference(outer, direct);
}

inline void write_trace_csv(std::ostream& os, const SimGrid& grid, const Trace& y) {
  os << "t,y\n";
  for (std::size_t j = 0; j < y.size(); ++j) os << format_double(grid.time(j)) << ',' << format_double(y[j]) << '\n';
}

} // namespace cfs
