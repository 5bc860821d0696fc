#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "commands.hpp"
#include "gradshift/error.hpp"

namespace {

using gradshift::Json;
namespace cli = gradshift::cli;

void emit(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw gradshift::Error(gradshift::ErrorCode::InvalidArgument,
                           "cannot write " + path);
  }
  out << text;
}

void emit_json(const Json &j, const std::string &path) {
  emit(j.dump(2) + "\n", path);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Spectral parameter-shift rules for quantum circuit derivatives"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string out_path;
  app.add_option("--seed", seed, "Master seed")->envname("GRADSHIFT_SEED");
  app.add_option("--out", out_path, "Output file (default stdout)");

  cli::AnalyzeOptions analyze;
  auto *analyze_cmd = app.add_subcommand("analyze", "Spectrum and gaps of a generator");
  analyze_cmd->add_option("--generator", analyze.generator,
                          "Catalog name or generator JSON file")
      ->required();

  cli::RuleOptions rule;
  auto *rule_cmd = app.add_subcommand("rule", "Build a shift rule");
  rule_cmd->add_option("--generator", rule.generator, "Catalog name or JSON file");
  rule_cmd->add_option("--gaps", rule.gaps, "Comma-separated gaps");
  rule_cmd->add_option("--method", rule.method, "Rule family")
      ->capture_default_str();
  rule_cmd->add_option("--shifts", rule.shifts, "Comma-separated shifts, e.g. 0.8pi,0.29pi");
  rule_cmd->add_option("--x", rule.x, "Evaluation point for point-dependent methods");

  cli::DiffOptions diff;
  auto *diff_cmd = app.add_subcommand("diff", "Evaluate or estimate a derivative");
  diff_cmd->add_option("--circuit", diff.circuit, "Circuit JSON file")->required();
  diff_cmd->add_option("--x", diff.x, "Parameter value");
  diff_cmd->add_option("--rule", diff.rule_file, "Rule JSON file");
  diff_cmd->add_option("--method", diff.method, "Rule family")->capture_default_str();
  diff_cmd->add_option("--gaps", diff.gaps, "Override the generator gaps");
  diff_cmd->add_option("--shifts", diff.shifts, "Comma-separated shifts");
  diff_cmd->add_flag("--oracle", diff.oracle, "Report exact and finite-difference values");
  diff_cmd->add_option("--shots", diff.shots, "Shots per term for a sampled estimate");

  cli::VarianceMapOptions vmap;
  auto *vmap_cmd = app.add_subcommand("variance-map", "Variance landscape as CSV");
  vmap_cmd->add_option("--preset", vmap.preset, "Published landscape")
      ->check(CLI::IsMember({"fig2a", "fig2b", "fig3"}));
  vmap_cmd->add_option("--method,--family", vmap.family,
                       "symmetric-s1, triangulation-s1 or symmetric-s2")
      ->capture_default_str();
  vmap_cmd->add_option("--gaps", vmap.gaps, "Comma-separated gaps");
  vmap_cmd->add_option("--grid", vmap.grid, "start:stop:points[,start:stop:points]");
  vmap_cmd->add_option("--fixed-shift", vmap.fixed_shift,
                       "Third stencil of the triangulation family");

  cli::VerifyCliOptions verify;
  auto *verify_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  verify_cmd->add_option("--filter", verify.filter, "Run checks whose id, name or tag matches");
  verify_cmd->add_option("--mutation", verify.mutation,
                         "Inject a defect: none or flip-closed-s2-sign")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return cli::kExitInput;
  }

  try {
    if (*analyze_cmd) {
      emit_json(cli::analyze(analyze), out_path);
    } else if (*rule_cmd) {
      emit_json(cli::rule(rule), out_path);
    } else if (*diff_cmd) {
      diff.seed = seed;
      emit_json(cli::diff(diff), out_path);
    } else if (*vmap_cmd) {
      const auto result = cli::variance_map(vmap);
      std::ostringstream csv;
      gradshift::write_grid_csv(csv, result.grid);
      emit(csv.str(), out_path);
      if (out_path.empty() || out_path == "-") {
        std::cerr << result.summary.dump(2) << "\n";
      } else {
        emit_json(result.summary, out_path + ".json");
      }
    } else if (*verify_cmd) {
      verify.seed = seed;
      const auto results = cli::verify(verify);
      for (const auto &r : results) {
        std::fprintf(stderr, "[%s] %-9s %s (%.2f s): %s\n",
                     r.passed ? "PASS" : "FAIL", r.id.c_str(), r.name.c_str(),
                     r.seconds, r.detail.c_str());
      }
      const Json report = gradshift::checks_to_json(results);
      emit_json(report, out_path);
      return report["passed"].get<bool>() ? cli::kExitOk : cli::kExitVerify;
    }
  } catch (const gradshift::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return gradshift::is_input_error(e.code()) ? cli::kExitInput
                                               : cli::kExitNumerical;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "error (ParseError): " << e.what() << "\n";
    return cli::kExitInput;
  }
  return cli::kExitOk;
}
