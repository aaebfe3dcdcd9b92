#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "semcomm/extreme_real.hpp"
#include "semcomm/fol.hpp"
#include "semcomm/inductive.hpp"
#include "semcomm/lossy.hpp"
#include "semcomm/measures.hpp"
#include "semcomm/sublanguage.hpp"

namespace semcomm {

using Json = nlohmann::ordered_json;

struct LoadedEvidence {
  EvidenceSet evidence;
  /// "lines" or "json-triples".
  std::string loader;
};

/// Line format (one statement per line, '#' comments), or a JSON list of
/// triples: ["Pred", "Subj", "Obj"], ["Pred", "Subj"], or objects with
/// predicate/subject/object (and optional negated) keys, possibly wrapped as
/// {"triples": [...]}.
LoadedEvidence load_evidence(const std::filesystem::path& path);
LoadedEvidence load_evidence(std::istream& in, const std::string& source_id);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// {sign, log10_mag}; log10_mag is null for zero.
Json to_json(const ExtremeReal& x);

Json sublanguage_json(const SubLanguage& sl, const EvidenceSummary& summary, const SymbolTable& symbols);
Json params_json(const InductiveParams& params);
Json posterior_json(const InductiveModel& model);

/// FNV-1a over the compact dump, as 16 hex digits.
std::string params_hash(const Json& params);

struct EntropyRow {
  std::string source_id;
  ExtremeReal normalized;
  ExtremeReal min_scaled;
  ExtremeReal max_scaled;
};

/// source_id,H_cont_normalized,H_cont_min_scaled,H_cont_max_scaled
void write_entropy_csv(std::ostream& out, const std::vector<EntropyRow>& rows);
/// beta,rate_bits,cont_info_normalized,relative_informativeness,on_frontier
void write_rd_csv(std::ostream& out, const RDSweep& sweep);

/// Shortest round-trip decimal for doubles; infinities as "inf"/"-inf".
std::string format_double(double v);

}  // namespace semcomm
