#pragma once

// Sub-language construction and the constituent lattice.
//
// Every observed entity is one individual. Its kind (attributive constituent)
// is the multiset of (predicate, direction, polarity) participations it has in
// the deduplicated evidence; two individuals share a kind iff those multisets
// are equal. The sub-language has K = (#distinct patterns) + slack kinds, the
// slack kinds being unexemplified. Constituents are the non-empty subsets of
// the K kinds, identified by a bit mask (so K <= 64 for constituent-level
// work).

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "semcomm/fol.hpp"

namespace semcomm {

using KindMask = std::uint64_t;

enum class Direction : std::uint8_t { outgoing, incoming, unary };

struct Participation {
  PredicateId predicate;
  Direction direction = Direction::outgoing;
  Polarity polarity = Polarity::asserted;
  auto operator<=>(const Participation&) const = default;
};

/// Sorted multiset of participations.
using Pattern = std::vector<Participation>;

std::string describe(const Pattern& pattern, const SymbolTable& symbols);

/// Identifies the sub-language a constituent or sentence belongs to.
struct LanguageTag {
  std::uint64_t fingerprint = 0;
  std::size_t big_k = 0;
  bool operator==(const LanguageTag&) const = default;
};

struct SubLanguageConfig {
  std::size_t slack = 0;
  /// Used when the evidence is empty (K must then be supplied).
  std::size_t explicit_k = 0;
  std::size_t max_enum_k = 20;
};

class SubLanguage {
 public:
  SubLanguage() = default;
  SubLanguage(std::size_t big_k, std::vector<Pattern> observed_patterns,
              std::map<EntityId, std::size_t> cell_of);

  std::size_t big_k() const { return big_k_; }
  /// Patterns of the exemplified cells, indexed by cell id. Cells at indices
  /// >= observed_patterns().size() are slack cells.
  const std::vector<Pattern>& observed_patterns() const { return patterns_; }
  const std::map<EntityId, std::size_t>& cell_of() const { return cell_of_; }
  std::size_t cell(EntityId e) const { return cell_of_.at(e); }
  bool evidence_complete() const { return true; }
  const LanguageTag& tag() const { return tag_; }

 private:
  std::size_t big_k_ = 0;
  std::vector<Pattern> patterns_;
  std::map<EntityId, std::size_t> cell_of_;
  LanguageTag tag_;
};

struct EvidenceSummary {
  std::uint64_t n = 0;
  std::size_t c = 0;
  std::vector<std::uint64_t> counts;  // one per kind, size K

  std::size_t big_k() const { return counts.size(); }
  /// Requires K <= 64.
  KindMask exemplified_mask() const;
  static EvidenceSummary from_counts(std::vector<std::uint64_t> counts);
};

/// Throws InconsistencyError when a statement and its negation are both present.
std::pair<SubLanguage, EvidenceSummary> build_sublanguage(const EvidenceSet& evidence,
                                                          const SubLanguageConfig& cfg = {});

/// Kinds of the observed individuals in first-mention order.
std::vector<std::size_t> kind_stream(const EvidenceSet& evidence, const SubLanguage& sl);

/// Merges cells into at most `max_kinds` disjunctive cells: exemplified cells
/// are grouped contiguously, slack cells keep their own groups (up to half of
/// the budget). Returns the group of every original cell.
/// Assumes the exemplified cells come first, as build_sublanguage produces them.
std::vector<std::size_t> merge_cells(std::size_t big_k, std::size_t exemplified,
                                     std::size_t max_kinds);
EvidenceSummary merge_summary(const EvidenceSummary& summary, const std::vector<std::size_t>& group);

struct Constituent {
  KindMask kinds = 0;
  LanguageTag tag;

  int width() const { return __builtin_popcountll(kinds); }
  std::uint64_t id() const { return kinds; }
  bool operator==(const Constituent& o) const { return kinds == o.kinds && tag == o.tag; }
};

/// All 2^K - 1 constituents ordered by (width, lexicographic kind set).
/// Throws CapacityError when K > max_enum_k.
std::vector<Constituent> enumerate_constituents(const LanguageTag& tag, std::size_t max_enum_k = 20);
std::vector<Constituent> enumerate_constituents(const SubLanguage& sl, std::size_t max_enum_k = 20);

/// Finite set of partition cells (constituents, or state descriptions in toy
/// universes), read as their disjunction.
class Sentence {
 public:
  Sentence() = default;
  Sentence(LanguageTag tag, std::vector<std::uint64_t> ids);

  static Sentence contradiction(const LanguageTag& tag) { return Sentence(tag, {}); }
  static Sentence of(const Constituent& c) { return Sentence(c.tag, {c.id()}); }
  static Sentence of(const std::vector<Constituent>& cs);

  const LanguageTag& tag() const { return tag_; }
  /// Sorted, unique.
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  bool contains(std::uint64_t id) const;
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  bool operator==(const Sentence&) const = default;

 private:
  LanguageTag tag_;
  std::vector<std::uint64_t> ids_;
};

Sentence conjunction(const Sentence& a, const Sentence& b);
Sentence disjunction(const Sentence& a, const Sentence& b);
/// Complement relative to `universe` (normally the tautology).
Sentence negation(const Sentence& a, const Sentence& universe);

/// True iff c is one of h's disjuncts. Throws DomainError on a language mismatch.
bool constituent_entails(const Constituent& c, const Sentence& h);

}  // namespace semcomm
