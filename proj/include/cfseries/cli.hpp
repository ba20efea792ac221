#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cfseries/chen_fliess.hpp"
#include "cfseries/entropy.hpp"
#include "cfseries/errors.hpp"
#include "cfseries/expr.hpp"
#include "cfseries/identities.hpp"
#include "cfseries/interconnect.hpp"
#include "cfseries/text_io.hpp"

namespace cfs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;

/// Relative output paths are placed under $CFSERIES_OUTPUT_DIR when it is set.
inline std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("CFSERIES_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
      p = std::filesystem::path(dir) / p;
  }
  return p;
}

namespace detail {

inline BilinearRealization load_realization(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open realization file '" + file + "'");
  return parse_realization(in);
}

inline InputSignal load_input(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open input file '" + file + "'");
  return parse_input_signal(in);
}

} // namespace detail

/// Runs one command line. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact noncommutative formal power series: products, support entropy, Fliess operators"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  RunConfig cfg;
  std::string expr_file, expr2_file, word_text, realization_file, input_file;
  std::size_t devlin_n = 6;
  bool no_poly_detect = false;
  std::string witness_k, witness_m;

  const auto add_horizon = [&](CLI::App* sub) {
    sub->add_option("-L,--horizon", cfg.horizon, "word-length truncation horizon")->check(CLI::Range(0, 64));
  };
  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("-o,--out", cfg.output_path, "write data here instead of stdout ($CFSERIES_OUTPUT_DIR prefixes relative paths)");
  };
  const auto add_grading = [&](CLI::App* sub) {
    sub->add_option("--grading", cfg.grading, "wordlen or alt")->check(CLI::IsMember({"wordlen", "alt"}));
  };

  auto* coeff = app.add_subcommand("coeff", "print one exact coefficient");
  coeff->add_option("--expr", expr_file, "expression document")->required();
  coeff->add_option("--word", word_text, "word, e.g. \"x0 x1\" (e = empty word)")->required();
  add_horizon(coeff);

  auto* support = app.add_subcommand("support", "per-degree support counts as CSV");
  support->add_option("--expr", expr_file)->required();
  add_grading(support);
  add_horizon(support);
  add_out(support);

  auto* entropy = app.add_subcommand("entropy", "support counts, a_k sequence and entropy estimate as CSV");
  entropy->add_option("--expr", expr_file)->required();
  add_grading(entropy);
  add_horizon(entropy);
  entropy->add_option("--window", cfg.window, "trailing support-sequence entries maximized over")->check(CLI::PositiveNumber);
  entropy->add_flag("--no-poly-detect", no_poly_detect, "never report 0 for series that look polynomial");
  add_out(entropy);

  auto* distance = app.add_subcommand("distance", "entropy distance h(c - d)");
  distance->add_option("--expr", expr_file, "first series")->required();
  distance->add_option("--expr2", expr2_file, "second series")->required();
  add_grading(distance);
  add_horizon(distance);
  distance->add_option("--window", cfg.window)->check(CLI::PositiveNumber);
  distance->add_flag("--no-poly-detect", no_poly_detect);

  auto* eval = app.add_subcommand("eval-series", "dump nonzero coefficients in (length, lex) order");
  eval->add_option("--expr", expr_file)->required();
  add_horizon(eval);
  add_out(eval);

  auto* devlin = app.add_subcommand("devlin", "print the Devlin polynomials b_1 .. b_n");
  devlin->add_option("-n", devlin_n, "last index")->check(CLI::Range(1, 40));
  add_out(devlin);

  auto* realize = app.add_subcommand("realize", "generating series of a bilinear/affine realization");
  realize->add_option("--realization", realization_file)->required();
  add_horizon(realize);
  add_out(realize);

  auto* simulate = app.add_subcommand("simulate", "Fliess operator or ODE output trace as CSV t,y");
  auto* sim_expr = simulate->add_option("--expr", expr_file, "evaluate F_c for this series");
  auto* sim_real = simulate->add_option("--realization", realization_file, "integrate this realization");
  sim_expr->excludes(sim_real);
  simulate->add_option("--input", input_file, "piecewise-constant input document")->required();
  simulate->add_option("-T,--final-time", cfg.T)->check(CLI::PositiveNumber);
  simulate->add_option("--steps", cfg.steps)->check(CLI::PositiveNumber);
  simulate->add_option("--witness-K", witness_k, "growth constant K for the tail indicator");
  simulate->add_option("--witness-M", witness_m, "growth constant M for the tail indicator");
  add_horizon(simulate);
  add_out(simulate);

  auto* verify = app.add_subcommand("verify", "run the built-in identity suite");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  const auto with_output = [&](auto&& emit) {
    if (cfg.output_path.empty()) {
      emit(out);
      return;
    }
    const auto path = resolve_output(cfg.output_path);
    std::ofstream file(path);
    if (!file) throw ValidationError("cannot write '" + path.string() + "'");
    emit(file);
  };
  const auto load_series = [&](const std::string& file) { return evaluate_expression(load_expression(file), cfg); };

  try {
    if (coeff->parsed()) {
      const Series c = load_series(expr_file);
      out << to_string(c.coefficient(parse_word(word_text))) << '\n';
    } else if (support->parsed() || entropy->parsed()) {
      const auto e = load_expression(expr_file);
      const Series c = evaluate_expression(e, cfg);
      const auto profile = support_profile(c, Grading::from_name(cfg.grading, e.alphabet));
      if (support->parsed()) {
        with_output([&](std::ostream& os) { write_profile_csv(os, profile); });
      } else {
        const auto est = entropy_estimate(profile, {cfg.window, !no_poly_detect});
        with_output([&](std::ostream& os) { write_profile_csv(os, profile, &est); });
      }
    } else if (distance->parsed()) {
      const auto e = load_expression(expr_file);
      const Series c = evaluate_expression(e, cfg);
      const Series d = load_series(expr2_file);
      const auto est =
          entropy_distance(c, d, Grading::from_name(cfg.grading, e.alphabet), {cfg.window, !no_poly_detect});
      out << format_double(est.estimate) << '\n';
    } else if (eval->parsed()) {
      const Series c = load_series(expr_file);
      with_output([&](std::ostream& os) { write_series(os, c); });
    } else if (devlin->parsed()) {
      const auto b = devlin_polynomials(devlin_n);
      with_output([&](std::ostream& os) {
        for (std::size_t n = 1; n <= devlin_n; ++n) {
          os << 'b' << n << " =";
          bool first = true;
          for (const auto& [w, v] : b[n].terms()) {
            os << (first ? " " : " + ") << to_string(v) << ' ' << to_string(w);
            first = false;
          }
          os << '\n';
        }
      });
    } else if (realize->parsed()) {
      const Series c = realization_to_series(detail::load_realization(realization_file), cfg.horizon);
      with_output([&](std::ostream& os) { write_series(os, c); });
    } else if (simulate->parsed()) {
      if (expr_file.empty() && realization_file.empty())
        throw ValidationError("simulate needs --expr or --realization");
      const SimGrid grid(cfg.T, cfg.steps);
      const InputSignal u = detail::load_input(input_file);
      Trace y;
      if (!expr_file.empty()) {
        std::optional<GrowthWitness> witness;
        if (!witness_k.empty() || !witness_m.empty()) {
          if (witness_k.empty() || witness_m.empty())
            throw ValidationError("--witness-K and --witness-M go together");
          witness = GrowthWitness{parse_rational(witness_k), parse_rational(witness_m), cfg.horizon};
        }
        const auto result = evaluate_operator(load_series(expr_file), u, grid, witness);
        if (result.tail_indicator) err << "tail indicator: " << format_double(*result.tail_indicator) << '\n';
        y = result.y;
      } else {
        y = simulate_realization(detail::load_realization(realization_file), u, grid);
      }
      with_output([&](std::ostream& os) { write_trace_csv(os, grid, y); });
    } else if (verify->parsed()) {
      bool all = true;
      for (const auto& r : run_identity_suite()) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.passed) out << " -- " << r.detail;
        out << '\n';
        all = all && r.passed;
      }
      if (!all) return kExitComputation;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ComputationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitOk;
}

} // namespace cfs::cli
