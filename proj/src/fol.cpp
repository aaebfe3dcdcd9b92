#include "semcomm/fol.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "semcomm/errors.hpp"

namespace semcomm {

EntityId SymbolTable::intern_entity(std::string_view name) {
  auto [it, inserted] = entity_index_.try_emplace(std::string(name),
                                                  static_cast<std::uint32_t>(entities_.size()));
  if (inserted) entities_.emplace_back(name);
  return EntityId{it->second};
}

PredicateId SymbolTable::intern_predicate(std::string_view name, int arity) {
  auto it = predicate_index_.find(std::string(name));
  if (it != predicate_index_.end()) {
    const Predicate& p = predicates_[it->second];
    if (p.arity != arity) {
      throw ArityError("predicate '" + p.name + "' used with arity " + std::to_string(arity) +
                       " but previously with arity " + std::to_string(p.arity));
    }
    return PredicateId{it->second};
  }
  const auto id = static_cast<std::uint32_t>(predicates_.size());
  predicates_.push_back(Predicate{std::string(name), arity});
  predicate_index_.emplace(std::string(name), id);
  return PredicateId{id};
}

std::optional<EntityId> SymbolTable::find_entity(std::string_view name) const {
  auto it = entity_index_.find(std::string(name));
  if (it == entity_index_.end()) return std::nullopt;
  return EntityId{it->second};
}

std::optional<PredicateId> SymbolTable::find_predicate(std::string_view name) const {
  auto it = predicate_index_.find(std::string(name));
  if (it == predicate_index_.end()) return std::nullopt;
  return PredicateId{it->second};
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool is_name_char(char c) {
  return !is_space(c) && c != '(' && c != ')' && c != ',' && c != '!' && c != '#';
}

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string_view name(const char* what) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    return text_.substr(start, pos_ - start);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = at_end() ? "end of line" : std::string("'") + peek() + "'";
    throw ParseError(msg + ", found " + found, line_, pos_ + 1);
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

AtomicStatement parse_statement(std::string_view line, SymbolTable& symbols, std::size_t line_no) {
  Cursor cur(line, line_no);
  cur.skip_ws();
  AtomicStatement s;
  if (cur.accept('!')) {
    s.polarity = Polarity::negated;
    cur.skip_ws();
  }
  const std::string_view pred = cur.name("predicate name");
  cur.skip_ws();
  if (!cur.accept('(')) cur.fail("expected '('");
  cur.skip_ws();
  const std::string_view subj = cur.name("subject");
  cur.skip_ws();
  std::optional<std::string_view> obj;
  if (cur.accept(',')) {
    cur.skip_ws();
    obj = cur.name("object");
    cur.skip_ws();
  } else if (cur.peek() != ')') {
    cur.fail("expected ',' between arguments or ')'");
  }
  if (!cur.accept(')')) cur.fail("expected ')'");
  cur.skip_ws();
  if (!cur.at_end()) cur.fail("unexpected trailing input");

  s.predicate = symbols.intern_predicate(pred, obj ? 2 : 1);
  s.subject = symbols.intern_entity(subj);
  if (obj) s.object = symbols.intern_entity(*obj);
  return s;
}

std::string to_string(const AtomicStatement& s, const SymbolTable& symbols) {
  std::string out;
  if (s.polarity == Polarity::negated) out += '!';
  out += symbols.predicate(s.predicate).name;
  out += '(';
  out += symbols.name(s.subject);
  if (s.object) {
    out += ", ";
    out += symbols.name(*s.object);
  }
  out += ')';
  return out;
}

EvidenceSet::EvidenceSet(std::string source_id, SymbolTable symbols,
                         std::vector<AtomicStatement> statements)
    : source_id_(std::move(source_id)),
      symbols_(std::move(symbols)),
      statements_(std::move(statements)) {
  std::set<EntityId> seen_entities;
  std::set<PredicateId> seen_predicates;
  std::set<AtomicStatement> seen;
  duplicate_.reserve(statements_.size());
  auto note = [&](EntityId e) {
    if (seen_entities.insert(e).second) entities_.push_back(e);
  };
  for (const auto& s : statements_) {
    duplicate_.push_back(!seen.insert(s).second);
    if (seen_predicates.insert(s.predicate).second) predicates_.push_back(s.predicate);
    note(s.subject);
    if (s.object) note(*s.object);
  }
}

std::size_t EvidenceSet::duplicate_count() const {
  std::size_t n = 0;
  for (bool d : duplicate_) n += d;
  return n;
}

EvidenceSet EvidenceSet::prefix(std::size_t count) const {
  count = std::min(count, statements_.size());
  return EvidenceSet(source_id_, symbols_,
                     std::vector<AtomicStatement>(statements_.begin(), statements_.begin() + count));
}

std::string EvidenceSet::normalized_text() const {
  std::string out;
  for (const auto& s : statements_) {
    out += to_string(s, symbols_);
    out += '\n';
  }
  return out;
}

EvidenceSet parse_evidence(std::istream& in, std::string source_id) {
  SymbolTable symbols;
  std::vector<AtomicStatement> statements;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    std::size_t first = line.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      statements.push_back(parse_statement(line, symbols, line_no));
    } catch (const ParseError& e) {
      throw ParseError(e.message, e.line, e.column, source_id);
    } catch (const ArityError& e) {
      throw ArityError(source_id + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return EvidenceSet(std::move(source_id), std::move(symbols), std::move(statements));
}

EvidenceSet parse_evidence(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open evidence file: " + path.string());
  return parse_evidence(in, path.filename().string());
}

}  // namespace semcomm
