#include "semcomm/sublanguage.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "semcomm/errors.hpp"

namespace semcomm {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
}

LanguageTag make_tag(std::size_t big_k, const std::vector<Pattern>& patterns) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, big_k);
  for (const auto& p : patterns) {
    fnv_mix(h, p.size());
    for (const auto& part : p) {
      fnv_mix(h, part.predicate.value);
      fnv_mix(h, static_cast<std::uint64_t>(part.direction) << 8 |
                     static_cast<std::uint64_t>(part.polarity));
    }
  }
  return LanguageTag{h, big_k};
}

}  // namespace

std::string describe(const Pattern& pattern, const SymbolTable& symbols) {
  std::string out;
  for (const auto& p : pattern) {
    if (!out.empty()) out += ' ';
    if (p.polarity == Polarity::negated) out += '!';
    out += symbols.predicate(p.predicate).name;
    switch (p.direction) {
      case Direction::outgoing: out += ":out"; break;
      case Direction::incoming: out += ":in"; break;
      case Direction::unary: out += ":unary"; break;
    }
  }
  return out;
}

SubLanguage::SubLanguage(std::size_t big_k, std::vector<Pattern> observed_patterns,
                         std::map<EntityId, std::size_t> cell_of)
    : big_k_(big_k),
      patterns_(std::move(observed_patterns)),
      cell_of_(std::move(cell_of)),
      tag_(make_tag(big_k_, patterns_)) {}

KindMask EvidenceSummary::exemplified_mask() const {
  if (counts.size() > 64) throw CapacityError("constituent masks need K <= 64");
  KindMask m = 0;
  for (std::size_t j = 0; j < counts.size(); ++j)
    if (counts[j] > 0) m |= KindMask{1} << j;
  return m;
}

EvidenceSummary EvidenceSummary::from_counts(std::vector<std::uint64_t> counts) {
  EvidenceSummary s;
  s.counts = std::move(counts);
  for (auto v : s.counts) {
    s.n += v;
    s.c += v > 0;
  }
  return s;
}

std::pair<SubLanguage, EvidenceSummary> build_sublanguage(const EvidenceSet& evidence,
                                                          const SubLanguageConfig& cfg) {
  if (evidence.empty()) {
    if (cfg.explicit_k == 0)
      throw DomainError("empty evidence needs an explicit K for the sub-language");
    SubLanguage sl(cfg.explicit_k, {}, {});
    return {sl, EvidenceSummary::from_counts(std::vector<std::uint64_t>(cfg.explicit_k, 0))};
  }

  const auto& symbols = evidence.symbols();
  std::set<AtomicStatement> unique(evidence.statements().begin(), evidence.statements().end());
  for (const auto& s : unique) {
    if (s.polarity != Polarity::asserted) continue;
    AtomicStatement neg = s;
    neg.polarity = Polarity::negated;
    if (unique.count(neg)) {
      throw InconsistencyError("evidence asserts both " + to_string(s, symbols) + " and " +
                               to_string(neg, symbols));
    }
  }

  std::map<EntityId, Pattern> pattern_of;
  for (const auto& s : unique) {
    if (s.monadic()) {
      pattern_of[s.subject].push_back({s.predicate, Direction::unary, s.polarity});
    } else {
      pattern_of[s.subject].push_back({s.predicate, Direction::outgoing, s.polarity});
      pattern_of[*s.object].push_back({s.predicate, Direction::incoming, s.polarity});
    }
  }
  for (auto& [e, p] : pattern_of) std::sort(p.begin(), p.end());

  // Cells are numbered by first mention of an individual carrying the pattern.
  std::vector<Pattern> patterns;
  std::map<Pattern, std::size_t> cell_index;
  std::map<EntityId, std::size_t> cell_of;
  std::vector<std::uint64_t> counts;
  for (EntityId e : evidence.entities_observed()) {
    const Pattern& p = pattern_of.at(e);
    auto [it, inserted] = cell_index.try_emplace(p, patterns.size());
    if (inserted) {
      patterns.push_back(p);
      counts.push_back(0);
    }
    cell_of[e] = it->second;
    ++counts[it->second];
  }

  const std::size_t big_k = patterns.size() + cfg.slack;
  counts.resize(big_k, 0);
  SubLanguage sl(big_k, std::move(patterns), std::move(cell_of));
  return {std::move(sl), EvidenceSummary::from_counts(std::move(counts))};
}

std::vector<std::size_t> kind_stream(const EvidenceSet& evidence, const SubLanguage& sl) {
  std::vector<std::size_t> out;
  out.reserve(evidence.entities_observed().size());
  for (EntityId e : evidence.entities_observed()) out.push_back(sl.cell(e));
  return out;
}

std::vector<std::size_t> merge_cells(std::size_t big_k, std::size_t exemplified,
                                     std::size_t max_kinds) {
  if (max_kinds == 0) throw DomainError("merge_cells needs max_kinds >= 1");
  std::vector<std::size_t> group(big_k);
  if (big_k <= max_kinds) {
    for (std::size_t j = 0; j < big_k; ++j) group[j] = j;
    return group;
  }
  const std::size_t slack = big_k - exemplified;
  std::size_t slack_groups = std::min(slack, max_kinds / 2);
  const std::size_t obs_groups = std::min(exemplified, max_kinds - slack_groups);
  slack_groups = std::min(slack, max_kinds - obs_groups);
  for (std::size_t j = 0; j < exemplified; ++j) group[j] = j * obs_groups / exemplified;
  for (std::size_t s = 0; s < slack; ++s) group[exemplified + s] = obs_groups + s * slack_groups / slack;
  return group;
}

EvidenceSummary merge_summary(const EvidenceSummary& summary, const std::vector<std::size_t>& group) {
  std::size_t groups = 0;
  for (auto g : group) groups = std::max(groups, g + 1);
  std::vector<std::uint64_t> counts(groups, 0);
  for (std::size_t j = 0; j < summary.counts.size(); ++j) counts[group.at(j)] += summary.counts[j];
  return EvidenceSummary::from_counts(std::move(counts));
}

std::vector<Constituent> enumerate_constituents(const LanguageTag& tag, std::size_t max_enum_k) {
  const std::size_t k = tag.big_k;
  if (k > max_enum_k || k > 63) {
    throw CapacityError("K = " + std::to_string(k) + " exceeds the enumeration limit " +
                        std::to_string(std::min<std::size_t>(max_enum_k, 63)) +
                        "; use width-class queries on the inductive model instead");
  }
  std::vector<Constituent> out;
  out.reserve((std::size_t{1} << k) - 1);
  for (std::size_t w = 1; w <= k; ++w) {
    // Lexicographic combinations of w kinds out of k.
    std::vector<std::size_t> idx(w);
    for (std::size_t i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      KindMask m = 0;
      for (auto i : idx) m |= KindMask{1} << i;
      out.push_back(Constituent{m, tag});
      std::size_t pos = w;
      while (pos > 0 && idx[pos - 1] == k - w + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < w; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return out;
}

std::vector<Constituent> enumerate_constituents(const SubLanguage& sl, std::size_t max_enum_k) {
  return enumerate_constituents(sl.tag(), max_enum_k);
}

Sentence::Sentence(LanguageTag tag, std::vector<std::uint64_t> ids)
    : tag_(tag), ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

Sentence Sentence::of(const std::vector<Constituent>& cs) {
  if (cs.empty()) return Sentence();
  std::vector<std::uint64_t> ids;
  ids.reserve(cs.size());
  for (const auto& c : cs) {
    if (!(c.tag == cs.front().tag)) throw DomainError("constituents from different sub-languages");
    ids.push_back(c.id());
  }
  return Sentence(cs.front().tag, std::move(ids));
}

bool Sentence::contains(std::uint64_t id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

namespace {
void require_same(const Sentence& a, const Sentence& b) {
  if (!(a.tag() == b.tag())) throw DomainError("sentences from different sub-languages");
}
}  // namespace

Sentence conjunction(const Sentence& a, const Sentence& b) {
  require_same(a, b);
  std::vector<std::uint64_t> out;
  std::set_intersection(a.ids().begin(), a.ids().end(), b.ids().begin(), b.ids().end(),
                        std::back_inserter(out));
  return Sentence(a.tag(), std::move(out));
}

Sentence disjunction(const Sentence& a, const Sentence& b) {
  require_same(a, b);
  std::vector<std::uint64_t> out;
  std::set_union(a.ids().begin(), a.ids().end(), b.ids().begin(), b.ids().end(),
                 std::back_inserter(out));
  return Sentence(a.tag(), std::move(out));
}

Sentence negation(const Sentence& a, const Sentence& universe) {
  require_same(a, universe);
  std::vector<std::uint64_t> out;
  std::set_difference(universe.ids().begin(), universe.ids().end(), a.ids().begin(), a.ids().end(),
                      std::back_inserter(out));
  return Sentence(a.tag(), std::move(out));
}

bool constituent_entails(const Constituent& c, const Sentence& h) {
  if (!(c.tag == h.tag())) throw DomainError("constituent and sentence come from different sub-languages");
  return h.contains(c.id());
}

}  // namespace semcomm
