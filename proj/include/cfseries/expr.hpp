#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cfseries/errors.hpp"
#include "cfseries/families.hpp"
#include "cfseries/interconnect.hpp"
#include "cfseries/series.hpp"
#include "cfseries/text_io.hpp"
#include "cfseries/words.hpp"

namespace cfs {

/// Settings shared by every subcommand.
struct RunConfig {
  std::size_t horizon = 8;
  std::string grading = "wordlen";
  std::size_t window = 8;
  std::size_t steps = 512;
  double T = 0.5;
  std::string output_path;
};

enum class NodeKind { family, realization, unit, op };

struct ExprNode {
  NodeKind kind = NodeKind::op;
  std::string path;  // location in the document, e.g. "$.args[1]"

  SeriesFamily family;                              // family / poly leaves
  std::optional<BilinearRealization> realization;   // realization leaves

  std::string op;
  std::vector<ExprNode> args;
  Rational factor = 1;  // scale
  std::size_t n = 0;    // shuffle_power exponent, devlin n_max
  Word word;            // left_shift / augment_*
};

/// A validated expression tree over a single alphabet.
struct SeriesExpr {
  Alphabet alphabet;
  ExprNode root;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

inline std::size_t get_count(const json& j, const char* key, const std::string& path,
                             std::optional<std::size_t> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(path, std::string("missing integer field '") + key + "'");
  }
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(path, std::string("field '") + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

inline std::string get_string(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j.at(key).is_string()) fail(path, std::string("missing string field '") + key + "'");
  return j.at(key).get<std::string>();
}

inline Word get_word(const json& j, const char* key, const std::string& path, Alphabet a) {
  try {
    Word w = parse_word(get_string(j, key, path));
    validate_word(w, a);
    return w;
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

struct ArityRule {
  std::string_view op;
  std::size_t min_args;
  std::size_t max_args;
};

inline constexpr ArityRule kArity[] = {
    {"add", 2, 1000},     {"scale", 1, 1},         {"hadamard", 2, 1000}, {"cauchy", 2, 1000},
    {"shuffle", 2, 1000}, {"shuffle_power", 1, 1}, {"left_shift", 1, 1},  {"augment_left", 1, 1},
    {"augment_right", 1, 1}, {"compose", 2, 2},    {"devlin", 0, 0},
};

inline ExprNode parse_node(const json& j, const std::string& path, Alphabet a, bool under_compose,
                           const std::filesystem::path& base_dir) {
  if (!j.is_object()) fail(path, "expected an object");
  ExprNode node;
  node.path = path;

  if (j.contains("unit")) {
    if (j.at("unit") != "delta") fail(path, "unknown unit (only \"delta\")");
    if (!under_compose) fail(path, "delta may only appear as an argument of compose");
    node.kind = NodeKind::unit;
    return node;
  }
  if (j.contains("poly")) {
    node.kind = NodeKind::family;
    try {
      auto terms = parse_polynomial(get_string(j, "poly", path));
      for (const auto& [w, v] : terms) validate_word(w, a);
      node.family = SeriesFamily::polynomial(std::move(terms));
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
    return node;
  }
  if (j.contains("realization") || j.contains("realization_inline")) {
    node.kind = NodeKind::realization;
    try {
      if (j.contains("realization_inline")) {
        node.realization = parse_realization(get_string(j, "realization_inline", path));
      } else {
        const auto file = base_dir / get_string(j, "realization", path);
        std::ifstream in(file);
        if (!in) fail(path, "cannot open realization file '" + file.string() + "'");
        node.realization = parse_realization(in);
      }
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
    if (node.realization->alphabet != a) fail(path, "realization input count differs from the document alphabet");
    return node;
  }
  if (j.contains("family")) {
    node.kind = NodeKind::family;
    const std::string name = get_string(j, "family", path);
    if (name == "char_all") node.family = SeriesFamily::simple(FamilyKind::char_all);
    else if (name == "letter_star") {
      const auto letter = get_count(j, "letter", path);
      if (!a.contains(static_cast<int>(letter))) fail(path, "letter x" + std::to_string(letter) + " not in alphabet");
      node.family = SeriesFamily::letter_star(static_cast<int>(letter));
    } else if (name == "repeated_word_star") {
      Word xi = get_word(j, "word", path, a);
      if (xi.empty()) fail(path, "repeated_word_star needs a nonempty word");
      node.family = SeriesFamily::repeated_word_star(xi);
    } else if (name == "linear_siso") {
      const auto r = get_count(j, "r", path, 1);
      if (r < 1) fail(path, "linear_siso needs r >= 1");
      node.family = SeriesFamily::with_param(FamilyKind::linear_siso, r);
    } else if (name == "linear_full") node.family = SeriesFamily::simple(FamilyKind::linear_full);
    else if (name == "input_limited" || name == "word_power") {
      const auto N = get_count(j, "N", path);
      if (N < 1) fail(path, name + " needs N >= 1");
      node.family = SeriesFamily::with_param(
          name == "input_limited" ? FamilyKind::input_limited : FamilyKind::word_power, N);
    } else if (name == "even_palindromes") node.family = SeriesFamily::simple(FamilyKind::even_palindromes);
    else if (name == "factorial_x1") node.family = SeriesFamily::simple(FamilyKind::factorial_x1);
    else fail(path, "unknown family '" + name + "'");
    const bool needs_x1 = name == "linear_siso" || name == "linear_full" || name == "input_limited" ||
                          name == "factorial_x1";
    if (needs_x1 && a.m() < 1) fail(path, name + " needs an alphabet with x1");
    return node;
  }
  if (!j.contains("op")) fail(path, "node needs one of op, family, poly, realization, unit");

  node.kind = NodeKind::op;
  node.op = get_string(j, "op", path);
  const ArityRule* rule = nullptr;
  for (const auto& r : kArity)
    if (r.op == node.op) rule = &r;
  if (rule == nullptr) fail(path, "unknown node kind '" + node.op + "'");

  json args = j.contains("args") ? j.at("args") : json::array();
  if (!args.is_array()) fail(path, "'args' must be an array");
  std::size_t min_args = rule->min_args, max_args = rule->max_args;
  if (node.op == "compose") min_args = max_args = 1 + static_cast<std::size_t>(a.m());
  if (args.size() < min_args || args.size() > max_args) {
    std::string want = min_args == max_args ? std::to_string(min_args)
                       : max_args >= 1000   ? "at least " + std::to_string(min_args)
                                            : std::to_string(min_args) + ".." + std::to_string(max_args);
    fail(path, node.op + " takes " + want + " argument(s), got " + std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i)
    node.args.push_back(
        parse_node(args[i], path + ".args[" + std::to_string(i) + "]", a, node.op == "compose", base_dir));

  if (node.op == "scale") {
    if (!j.contains("factor")) fail(path, "scale needs 'factor'");
    const auto& f = j.at("factor");
    try {
      node.factor = f.is_string() ? parse_rational(f.get<std::string>())
                    : f.is_number_integer() ? Rational(f.get<long>())
                                            : throw ParseError("factor must be an integer or a \"p/q\" string");
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  } else if (node.op == "shuffle_power") {
    node.n = get_count(j, "n", path);
  } else if (node.op == "devlin") {
    node.n = get_count(j, "n_max", path);
    if (node.n < 1) fail(path, "devlin needs n_max >= 1");
    if (a.m() != 1) fail(path, "devlin is defined over {x0, x1} (m = 1)");
  } else if (node.op == "left_shift" || node.op == "augment_left" || node.op == "augment_right") {
    node.word = get_word(j, "word", path, a);
  }
  return node;
}

} // namespace detail

/// Parses an expression document.
///
/// The document is either a bare node or `{"alphabet": m, "expr": node}`;
/// the bare form uses m = 1. Realization paths resolve against `base_dir`.
inline SeriesExpr parse_expression(std::string_view document, const std::filesystem::path& base_dir = ".") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("expression document: ") + e.what());
  }
  SeriesExpr expr;
  const nlohmann::json* root = &j;
  if (j.is_object() && j.contains("expr")) {
    const auto m = detail::get_count(j, "alphabet", "$", 1);
    try {
      expr.alphabet = Alphabet(static_cast<int>(m));
    } catch (const ValidationError& e) {
      detail::fail("$", e.what());
    }
    root = &j.at("expr");
  } else {
    expr.alphabet = Alphabet(1);
  }
  expr.root = detail::parse_node(*root, "$", expr.alphabet, false, base_dir);
  return expr;
}

inline SeriesExpr load_expression(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open expression file '" + file.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_expression(buf.str(), file.parent_path().empty() ? "." : file.parent_path());
}

namespace detail {

template <class... Kinds>
[[noreturn]] void throw_as_dynamic_kind(const Error& e, const std::string& msg) {
  ((dynamic_cast<const Kinds*>(&e) != nullptr ? throw Kinds(msg) : void()), ...);
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) throw ValidationError(msg);
  throw ComputationError(msg);
}

/// Rethrows `e` with the node path prepended, keeping its concrete type.
[[noreturn]] inline void rethrow_at(const std::string& path, const Error& e) {
  const std::string msg = e.what();
  if (msg.rfind("$", 0) == 0) throw;  // already carries a node path
  throw_as_dynamic_kind<InvalidWordError, AlphabetMismatchError, DimensionError, ParseError, HorizonError,
                        InsufficientHorizonError, UnsupportedOperationError>(e, path + ": " + msg);
}

inline SeriesOrUnit eval_node(const ExprNode& node, Alphabet a, std::size_t L) {
  try {
    switch (node.kind) {
    case NodeKind::unit: return CompositionUnit{};
    case NodeKind::family: return build_family(node.family, a, L);
    case NodeKind::realization: return realization_to_series(*node.realization, L);
    case NodeKind::op: break;
    }
    std::vector<SeriesOrUnit> vals;
    for (const auto& child : node.args) vals.push_back(eval_node(child, a, L));
    const auto series_at = [&](std::size_t i) -> const Series& { return std::get<Series>(vals[i]); };
    const auto fold = [&](auto&& f) {
      Series acc = series_at(0);
      for (std::size_t i = 1; i < vals.size(); ++i) acc = f(acc, series_at(i));
      return acc;
    };
    const std::string& op = node.op;
    if (op == "add") return fold([](const Series& x, const Series& y) { return add(x, y); });
    if (op == "hadamard") return fold([](const Series& x, const Series& y) { return hadamard(x, y); });
    if (op == "cauchy") return fold([](const Series& x, const Series& y) { return cauchy(x, y); });
    if (op == "shuffle") return fold([](const Series& x, const Series& y) { return shuffle(x, y); });
    if (op == "scale") return scale(node.factor, series_at(0));
    if (op == "shuffle_power") return shuffle_power(series_at(0), node.n);
    if (op == "left_shift") return left_shift(series_at(0), node.word);
    if (op == "augment_left") return augment_left(node.word, series_at(0)).truncated(L);
    if (op == "augment_right") return augment_right(series_at(0), node.word).truncated(L);
    if (op == "devlin") return devlin_feedback(node.n, L);
    if (op == "compose") {
      if (a.m() == 1) return compose_with_unit(vals[0], vals[1]);
      if (std::holds_alternative<CompositionUnit>(vals[0])) {
        if (vals.size() == 2) return vals[1];
        throw ValidationError("delta ∘ (d_1, ..., d_m) is not a single series");
      }
      std::vector<Series> feeds;
      for (std::size_t i = 1; i < vals.size(); ++i) {
        if (std::holds_alternative<CompositionUnit>(vals[i]))
          throw UnsupportedOperationError("delta as one feed of a multi-input composition");
        feeds.push_back(series_at(i));
      }
      return compose(series_at(0), feeds);
    }
    throw ValidationError("unknown node kind '" + op + "'");
  } catch (const std::bad_variant_access&) {
    throw ValidationError(node.path + ": delta used where a series is required");
  } catch (const Error& e) {
    rethrow_at(node.path, e);
  }
}

} // namespace detail

/// Bottom-up evaluation at horizon cfg.horizon.
inline Series evaluate_expression(const SeriesExpr& e, const RunConfig& cfg) {
  auto v = detail::eval_node(e.root, e.alphabet, cfg.horizon);
  if (std::holds_alternative<CompositionUnit>(v))
    throw ValidationError("$: expression evaluates to delta, which has no coefficients");
  return std::get<Series>(std::move(v));
}

} // namespace cfs
