#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semcomm/experiment.hpp"

namespace fs = std::filesystem;
using namespace semcomm;

namespace {

struct CommonFlags {
  std::string lambda = "w";
  std::uint64_t alpha = 0;
  std::size_t slack = 1;
  bool single_lambda = false;
  std::string partition = "constituents";
  std::string out = "semcomm_out";
  std::uint64_t seed = 0;
};

void add_inductive_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--lambda", f.lambda, "lambda policy: w, const:<v> or inf")->capture_default_str();
  app->add_option("--alpha", f.alpha, "prior pseudo-sample size")->capture_default_str();
  app->add_option("--slack", f.slack, "unexemplified kinds added to the sub-language")->capture_default_str();
  app->add_flag("--single-lambda", f.single_lambda, "use lambda(w) in the prior instead of lambda(K)");
}

void add_output_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--out", f.out, "output directory")->capture_default_str();
  app->add_option("--seed", f.seed, "seed for randomized parts")->capture_default_str();
}

RunConfig to_config(const CommonFlags& f) {
  RunConfig cfg;
  cfg.lambda = LambdaPolicy::parse(f.lambda);
  cfg.alpha = f.alpha;
  cfg.slack = f.slack;
  cfg.single_lambda_prior = f.single_lambda;
  if (f.partition == "constituents")
    cfg.partition_kind = PartitionKind::constituents;
  else if (f.partition == "state_descriptions")
    cfg.partition_kind = PartitionKind::state_descriptions;
  else
    throw UsageError("--partition must be constituents or state_descriptions");
  cfg.output_dir = f.out;
  cfg.seed = f.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic content measures, inductive posteriors and semantic compression of FOL evidence"};
  app.require_subcommand(1);
  CommonFlags flags;

  std::vector<std::string> analyze_inputs;
  auto* analyze = app.add_subcommand("analyze", "content entropy table for one or more evidence files");
  analyze->add_option("inputs", analyze_inputs, "evidence files or directories")->required();
  add_inductive_flags(analyze, flags);
  add_output_flags(analyze, flags);
  analyze->add_option("--partition", flags.partition, "constituents or state_descriptions")->capture_default_str();

  std::string compress_input;
  std::string text_path;
  double codec_lambda = 0.0;
  auto* compress = app.add_subcommand("compress", "lossless semantic compression with a character baseline");
  compress->add_option("input", compress_input, "evidence file")->required();
  compress->add_option("--text", text_path, "plain text for the character baseline");
  compress->add_option("--codec-lambda", codec_lambda, "coder lambda (default: alphabet size)");
  add_output_flags(compress, flags);

  std::string decompress_input;
  std::string decompress_output;
  auto* decompress = app.add_subcommand("decompress", "decode a .semc file to normalized evidence");
  decompress->add_option("input", decompress_input, ".semc file")->required();
  decompress->add_option("-o,--output", decompress_output, "output evidence file");
  add_output_flags(decompress, flags);

  std::string lossy_input;
  double d_star = 0.0;
  std::vector<double> betas;
  std::size_t lossy_kinds = 10, lossy_slack = 4, budget = 4096;
  auto* lossy = app.add_subcommand("lossy", "rate versus content-information sweep");
  lossy->add_option("input", lossy_input, "evidence file")->required();
  lossy->add_option("--dstar", d_star, "required content information (normalized)")->capture_default_str();
  lossy->add_option("--betas", betas, "ascending multiplier grid")->delimiter(',');
  lossy->add_option("--kinds", lossy_kinds, "cells of the coarse sub-language")->capture_default_str();
  lossy->add_option("--lossy-slack", lossy_slack, "unexemplified cells kept in the coarse sub-language")
      ->capture_default_str();
  lossy->add_option("--budget", budget, "reconstruction candidate budget")->capture_default_str();
  add_inductive_flags(lossy, flags);
  add_output_flags(lossy, flags);

  std::size_t pac_k = 2;
  std::uint64_t pac_alpha = 0;
  std::optional<double> epsilon, epsilon_prime;
  auto* pac = app.add_subcommand("pac", "sample size bound for the minimal constituent");
  pac->add_option("-K,--kinds", pac_k, "number of kinds K")->required();
  pac->add_option("--alpha", pac_alpha, "prior pseudo-sample size")->capture_default_str();
  auto* eps_opt = pac->add_option("--epsilon", epsilon, "error probability in (0, 1)");
  auto* epsp_opt = pac->add_option("--epsilon-prime", epsilon_prime, "odds target epsilon/(1-epsilon)");
  eps_opt->excludes(epsp_opt);

  std::string converge_input;
  SyntheticSpec synthetic;
  auto* converge = app.add_subcommand("converge", "posterior of the minimal constituent along evidence prefixes");
  converge->add_option("input", converge_input, "evidence file (omit for a synthetic stream)");
  converge->add_option("--synthetic-k", synthetic.big_k, "K of the synthetic stream")->capture_default_str();
  converge->add_option("--synthetic-c", synthetic.c, "exemplified kinds of the synthetic stream")
      ->capture_default_str();
  converge->add_option("--synthetic-n", synthetic.n, "length of the synthetic stream")->capture_default_str();
  add_inductive_flags(converge, flags);
  add_output_flags(converge, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*pac) return cmd_pac(pac_k, pac_alpha, epsilon, epsilon_prime, std::cout, std::cerr);

    RunConfig cfg = to_config(flags);
    if (*analyze) {
      std::vector<fs::path> inputs(analyze_inputs.begin(), analyze_inputs.end());
      return cmd_analyze(inputs, cfg, std::cout, std::cerr);
    }
    if (*compress) {
      cfg.codec_lambda = codec_lambda;
      if (!text_path.empty()) cfg.text_path = text_path;
      return cmd_compress(compress_input, cfg, std::cout, std::cerr);
    }
    if (*decompress) {
      std::optional<fs::path> dest;
      if (!decompress_output.empty()) dest = decompress_output;
      return cmd_decompress(decompress_input, dest, cfg, std::cout, std::cerr);
    }
    if (*lossy) {
      cfg.d_star = d_star;
      cfg.beta_grid = betas;
      cfg.lossy_kinds = lossy_kinds;
      cfg.lossy_slack = lossy_slack;
      cfg.candidate_budget = budget;
      return cmd_lossy(lossy_input, cfg, std::cout, std::cerr);
    }
    if (*converge) {
      std::optional<fs::path> in;
      if (!converge_input.empty()) in = converge_input;
      return cmd_converge(in, synthetic, cfg, std::cout, std::cerr);
    }
  } catch (const UsageError& e) {
    std::cerr << "semcomm: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "semcomm: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "semcomm: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
