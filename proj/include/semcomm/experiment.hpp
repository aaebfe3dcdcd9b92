#pragma once

// Command implementations behind the semcomm CLI. Each command validates its
// configuration first, writes its outputs under RunConfig::output_dir and
// returns a process exit code (0 ok, 1 failure, 2 usage error).

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semcomm/codec.hpp"
#include "semcomm/errors.hpp"
#include "semcomm/inductive.hpp"
#include "semcomm/io.hpp"
#include "semcomm/measures.hpp"

namespace semcomm {

struct UsageError : public Error { using Error::Error; };

enum class PartitionKind { constituents, state_descriptions };

struct RunConfig {
  LambdaPolicy lambda = LambdaPolicy::proportional();
  std::uint64_t alpha = 0;
  bool single_lambda_prior = false;
  std::size_t slack = 1;
  PartitionKind partition_kind = PartitionKind::constituents;
  double d_star = 0.0;
  std::vector<double> beta_grid;  // empty: default grid
  int max_iters = 2000;
  double tol = 1e-12;
  std::size_t lossy_kinds = 10;
  std::size_t lossy_slack = 4;
  std::size_t candidate_budget = 4096;
  double codec_lambda = 0.0;  // <= 0: alphabet size
  std::filesystem::path output_dir = "semcomm_out";
  std::uint64_t seed = 0;
  /// Plain-text source for the character baseline (compress only).
  std::optional<std::filesystem::path> text_path;

  /// Throws UsageError on the first invalid field.
  void validate() const;
  Json to_json() const;
  InductiveParams inductive(std::size_t big_k) const;
  LossyConfig lossy() const;
};

/// 0 and 10^(x/2) for x = -4..60.
std::vector<double> default_beta_grid();

/// Evidence files named directly or found (*.fol, *.json) in directories,
/// in natural name order. Throws UsageError when nothing is found.
std::vector<std::filesystem::path> collect_evidence_files(const std::vector<std::filesystem::path>& inputs);

struct CompressionResult {
  CodecStats codec;
  std::uint64_t shannon_bits = 0;
  double shannon_ideal_bits = 0.0;
  std::uint64_t gzip_bits = 0;
  std::string baseline_source;  // "text:<file>" or "evidence"
  double ratio() const { return codec.payload_bits ? double(shannon_bits) / double(codec.payload_bits) : 0.0; }
};

struct SourceReport {
  std::string source_id;
  std::string loader;
  std::size_t statements = 0;
  std::size_t duplicates = 0;
  UniverseSignature signature;
  std::size_t big_k = 0;
  std::size_t c = 0;
  std::uint64_t n = 0;
  double inf_entropy_bits = 0.0;
  ContEntropy cont;
  ExtremeReal min_scaled;
  ExtremeReal max_scaled;
  CompressionResult compression;
  std::string params_hash;

  Json to_json() const;
};

/// Analysis of one evidence file (no cross-source scaling).
SourceReport analyze_source(const std::filesystem::path& path, const RunConfig& cfg);
/// Fills the scaled columns across the reports.
void scale_reports(std::vector<SourceReport>& reports);

/// Text used for the character baseline: explicit path, else a sibling .txt,
/// else the normalized evidence.
std::pair<std::string, std::string> baseline_text(const std::filesystem::path& evidence_path,
                                                  const EvidenceSet& evidence,
                                                  const std::optional<std::filesystem::path>& explicit_text);
CompressionResult compress_evidence(const EvidenceSet& evidence, const std::string& text,
                                    const std::string& baseline_source, const RunConfig& cfg);

int cmd_analyze(const std::vector<std::filesystem::path>& inputs, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);
int cmd_compress(const std::filesystem::path& input, const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_decompress(const std::filesystem::path& input, const std::optional<std::filesystem::path>& output,
                   const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_lossy(const std::filesystem::path& input, const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Exactly one of epsilon / epsilon_prime must be set.
int cmd_pac(std::size_t big_k, std::uint64_t alpha, std::optional<double> epsilon,
            std::optional<double> epsilon_prime, std::ostream& out, std::ostream& err);

struct SyntheticSpec {
  std::size_t big_k = 4;
  std::size_t c = 2;
  std::size_t n = 2000;
};
/// Evidence file when given, otherwise a seeded synthetic stream.
int cmd_converge(const std::optional<std::filesystem::path>& input, const SyntheticSpec& synthetic,
                 const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Verbosity from SEMCOMM_LOG: 0 quiet, 1 info (default), 2 debug.
int log_level();
void log_line(int level, const std::string& message);

}  // namespace semcomm
