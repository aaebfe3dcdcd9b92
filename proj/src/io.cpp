#include "semcomm/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "semcomm/errors.hpp"

namespace semcomm {

namespace {

// Names in the line format cannot contain whitespace or ( ) , ! #.
std::string sanitize_name(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    const bool bad = c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v' || c == '(' ||
                     c == ')' || c == ',' || c == '!' || c == '#';
    out += bad ? '_' : c;
  }
  if (out.empty()) throw DomainError("empty name in JSON triple");
  return out;
}

LoadedEvidence load_json(const std::string& text, const std::string& source_id) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what(), 1, e.byte, source_id);
  }
  if (doc.is_object() && doc.contains("triples")) doc = doc["triples"];
  if (!doc.is_array()) throw ParseError("expected a JSON array of triples", 1, 1, source_id);

  SymbolTable symbols;
  std::vector<AtomicStatement> stmts;
  std::size_t index = 0;
  for (const auto& item : doc) {
    ++index;
    std::string pred, subj, obj;
    bool negated = false;
    if (item.is_array() && (item.size() == 2 || item.size() == 3)) {
      pred = item[0].get<std::string>();
      subj = item[1].get<std::string>();
      if (item.size() == 3) obj = item[2].get<std::string>();
    } else if (item.is_object() && item.contains("predicate") && item.contains("subject")) {
      pred = item["predicate"].get<std::string>();
      subj = item["subject"].get<std::string>();
      if (item.contains("object") && !item["object"].is_null()) obj = item["object"].get<std::string>();
      if (item.contains("negated")) negated = item["negated"].get<bool>();
    } else {
      throw ParseError("triple " + std::to_string(index) + " is neither [P, S, O] nor {predicate, subject, object}",
                       index, 1, source_id);
    }
    AtomicStatement s;
    try {
      s.predicate = symbols.intern_predicate(sanitize_name(pred), obj.empty() ? 1 : 2);
    } catch (const ArityError& e) {
      throw ArityError(source_id + ": triple " + std::to_string(index) + ": " + e.what());
    }
    s.subject = symbols.intern_entity(sanitize_name(subj));
    if (!obj.empty()) s.object = symbols.intern_entity(sanitize_name(obj));
    s.polarity = negated ? Polarity::negated : Polarity::asserted;
    stmts.push_back(s);
  }
  return {EvidenceSet(source_id, std::move(symbols), std::move(stmts)), "json-triples"};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

LoadedEvidence load_evidence(std::istream& in, const std::string& source_id) {
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  std::size_t first = 0;
  if (text.compare(0, 3, "\xEF\xBB\xBF") == 0) first = 3;
  first = text.find_first_not_of(" \t\r\n", first);
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{'))
    return load_json(text.substr(first), source_id);
  std::istringstream lines(text);
  return {parse_evidence(lines, source_id), "lines"};
}

LoadedEvidence load_evidence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open evidence file: " + path.string());
  return load_evidence(in, path.filename().string());
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

Json to_json(const ExtremeReal& x) {
  Json j;
  j["sign"] = x.sign();
  if (x.is_zero())
    j["log10_mag"] = nullptr;
  else
    j["log10_mag"] = x.log10_mag();
  return j;
}

Json sublanguage_json(const SubLanguage& sl, const EvidenceSummary& summary, const SymbolTable& symbols) {
  Json j;
  j["K"] = sl.big_k();
  j["c"] = summary.c;
  j["n"] = summary.n;
  j["counts"] = summary.counts;
  Json cells = Json::object();
  for (std::size_t i = 0; i < sl.big_k(); ++i) {
    const bool observed = i < sl.observed_patterns().size();
    cells[std::to_string(i)] = observed ? describe(sl.observed_patterns()[i], symbols) : std::string("(slack)");
  }
  j["cells"] = std::move(cells);
  return j;
}

Json params_json(const InductiveParams& params) {
  Json j;
  j["lambda"] = params.lambda.to_string();
  j["alpha"] = params.alpha;
  j["K"] = params.big_k;
  j["single_lambda_prior"] = params.single_lambda_prior;
  return j;
}

Json posterior_json(const InductiveModel& model) {
  Json j;
  j["params"] = params_json(model.params());
  Json widths = Json::array();
  Json post = Json::array();
  for (std::size_t w = 1; w <= model.big_k(); ++w) {
    widths.push_back(w);
    post.push_back(to_json(model.posterior_by_width(w)));
  }
  j["widths"] = std::move(widths);
  j["posterior_by_width"] = std::move(post);
  j["c"] = model.summary().c;
  j["n"] = model.summary().n;
  return j;
}

std::string params_hash(const Json& params) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : params.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

void write_entropy_csv(std::ostream& out, const std::vector<EntropyRow>& rows) {
  out << "source_id,H_cont_normalized,H_cont_min_scaled,H_cont_max_scaled\n";
  for (const auto& r : rows)
    out << r.source_id << ',' << to_scientific(r.normalized, 6) << ',' << to_scientific(r.min_scaled, 6) << ','
        << to_scientific(r.max_scaled, 6) << '\n';
}

void write_rd_csv(std::ostream& out, const RDSweep& sweep) {
  std::vector<bool> on_frontier(sweep.points.size(), false);
  for (auto i : sweep.frontier) on_frontier[i] = true;
  out << "beta,rate_bits,cont_info_normalized,relative_informativeness,on_frontier\n";
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const auto& p = sweep.points[i];
    out << format_double(p.beta) << ',' << format_double(p.rate_bits) << ',' << format_double(p.cont_info) << ','
        << format_double(sweep.relative(i)) << ',' << (on_frontier[i] ? 1 : 0) << '\n';
  }
}

}  // namespace semcomm
