#pragma once

// First-order evidence: interned entities and predicates, atomic statements,
// and the line-oriented evidence format `Pred(Subj, Obj)` / `!Pred(Subj, Obj)`
// / `Pred(Subj)`.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semcomm {

struct EntityId {
  std::uint32_t value = 0;
  auto operator<=>(const EntityId&) const = default;
};

struct PredicateId {
  std::uint32_t value = 0;
  auto operator<=>(const PredicateId&) const = default;
};

enum class Polarity : std::uint8_t { asserted, negated };

struct Predicate {
  std::string name;
  int arity = 2;
};

/// Name interner for one universe. Not thread-safe; each evidence set owns one.
class SymbolTable {
 public:
  EntityId intern_entity(std::string_view name);
  /// Throws ArityError if `name` was seen before with a different arity.
  PredicateId intern_predicate(std::string_view name, int arity);

  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<PredicateId> find_predicate(std::string_view name) const;

  const std::string& name(EntityId id) const { return entities_[id.value]; }
  const Predicate& predicate(PredicateId id) const { return predicates_[id.value]; }

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t predicate_count() const { return predicates_.size(); }

 private:
  std::vector<std::string> entities_;
  std::vector<Predicate> predicates_;
  std::unordered_map<std::string, std::uint32_t> entity_index_;
  std::unordered_map<std::string, std::uint32_t> predicate_index_;
};

struct AtomicStatement {
  PredicateId predicate;
  EntityId subject;
  std::optional<EntityId> object;  // empty for monadic predicates
  Polarity polarity = Polarity::asserted;

  bool monadic() const { return !object.has_value(); }
  auto operator<=>(const AtomicStatement&) const = default;
};

/// Parses one statement, interning names into `symbols`. `line_no` is only
/// used for error positions.
AtomicStatement parse_statement(std::string_view line, SymbolTable& symbols,
                                std::size_t line_no = 1);

/// Normalized text form: `Pred(Subj, Obj)`, `!Pred(Subj, Obj)` or `Pred(Subj)`.
std::string to_string(const AtomicStatement& s, const SymbolTable& symbols);

/// Ordered, immutable list of statements observed from one source.
class EvidenceSet {
 public:
  EvidenceSet() = default;
  EvidenceSet(std::string source_id, SymbolTable symbols, std::vector<AtomicStatement> statements);

  const std::string& source_id() const { return source_id_; }
  const SymbolTable& symbols() const { return symbols_; }
  const std::vector<AtomicStatement>& statements() const { return statements_; }
  /// Entities in order of first mention.
  const std::vector<EntityId>& entities_observed() const { return entities_; }
  /// Predicates in order of first mention.
  const std::vector<PredicateId>& predicates_observed() const { return predicates_; }
  /// duplicate(i) is true when statement i repeats an earlier statement.
  bool duplicate(std::size_t i) const { return duplicate_[i]; }
  std::size_t duplicate_count() const;

  bool empty() const { return statements_.empty(); }
  std::size_t size() const { return statements_.size(); }

  /// Prefix of the first `count` statements (same symbol table).
  EvidenceSet prefix(std::size_t count) const;

  /// One normalized statement per line.
  std::string normalized_text() const;

 private:
  std::string source_id_;
  SymbolTable symbols_;
  std::vector<AtomicStatement> statements_;
  std::vector<EntityId> entities_;
  std::vector<PredicateId> predicates_;
  std::vector<bool> duplicate_;
};

/// Line format: one statement per line, `#` comments and blank lines skipped.
EvidenceSet parse_evidence(std::istream& in, std::string source_id);
EvidenceSet parse_evidence(const std::filesystem::path& path);

}  // namespace semcomm
