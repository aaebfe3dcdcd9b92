#include "semcomm/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

#include "semcomm/lossy.hpp"
#include "semcomm/sublanguage.hpp"

namespace semcomm {

namespace fs = std::filesystem;

int log_level() {
  const char* v = std::getenv("SEMCOMM_LOG");
  if (!v || !*v) return 1;
  const std::string s(v);
  if (s == "0" || s == "quiet") return 0;
  if (s == "2" || s == "debug") return 2;
  return 1;
}

void log_line(int level, const std::string& message) {
  if (level <= log_level()) std::cerr << "[semcomm] " << message << '\n';
}

std::vector<double> default_beta_grid() {
  std::vector<double> grid{0.0};
  for (int x = -4; x <= 60; ++x) grid.push_back(std::pow(10.0, x / 2.0));
  return grid;
}

void RunConfig::validate() const {
  if (!(d_star >= 0.0) || !std::isfinite(d_star)) throw UsageError("--dstar must be a finite non-negative number");
  for (double b : beta_grid)
    if (!(b >= 0.0) || !std::isfinite(b)) throw UsageError("--betas entries must be finite and non-negative");
  if (!std::is_sorted(beta_grid.begin(), beta_grid.end())) throw UsageError("--betas must be ascending");
  if (max_iters < 1) throw UsageError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw UsageError("tol must be positive");
  if (lossy_kinds < 2 || lossy_kinds > 20) throw UsageError("lossy kinds must lie in 2..20");
  if (lossy_slack >= lossy_kinds) throw UsageError("lossy slack must be below the lossy kind count");
  if (candidate_budget == 0) throw UsageError("candidate budget must be positive");
  if (!std::isfinite(codec_lambda)) throw UsageError("codec lambda must be finite");
}

Json RunConfig::to_json() const {
  Json j;
  j["lambda"] = lambda.to_string();
  j["alpha"] = alpha;
  j["single_lambda_prior"] = single_lambda_prior;
  j["slack"] = slack;
  j["partition_kind"] = partition_kind == PartitionKind::constituents ? "constituents" : "state_descriptions";
  j["d_star"] = d_star;
  j["beta_grid"] = beta_grid.empty() ? default_beta_grid() : beta_grid;
  j["max_iters"] = max_iters;
  j["tol"] = tol;
  j["lossy_kinds"] = lossy_kinds;
  j["lossy_slack"] = lossy_slack;
  j["candidate_budget"] = candidate_budget;
  j["codec_lambda"] = codec_lambda > 0.0 ? Json(codec_lambda) : Json("alphabet_size");
  j["seed"] = seed;
  return j;
}

InductiveParams RunConfig::inductive(std::size_t big_k) const {
  InductiveParams p;
  p.lambda = lambda;
  p.alpha = alpha;
  p.big_k = big_k;
  p.single_lambda_prior = single_lambda_prior;
  return p;
}

LossyConfig RunConfig::lossy() const {
  LossyConfig c;
  c.d_star = d_star;
  c.beta_grid = beta_grid.empty() ? default_beta_grid() : beta_grid;
  c.max_iters = max_iters;
  c.tol = tol;
  return c;
}

namespace {

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit((unsigned char)a[i]) && std::isdigit((unsigned char)b[j])) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit((unsigned char)a[i2])) ++i2;
      while (j2 < b.size() && std::isdigit((unsigned char)b[j2])) ++j2;
      std::string na = a.substr(i, i2 - i), nb = b.substr(j, j2 - j);
      na.erase(0, std::min(na.find_first_not_of('0'), na.size()));
      nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size()));
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

std::string stem_of(const std::string& source_id) { return fs::path(source_id).stem().string(); }

double inf_entropy_of_model(const InductiveModel& model) {
  double h = 0.0;
  for (std::size_t w = model.min_width(); w <= model.big_k(); ++w) {
    const ExtremeReal& pw = model.posterior_by_width(w);
    if (pw.is_zero()) continue;
    h += model.class_mass(w).to_double() * (-pw.ln_mag() / std::numbers::ln2);
  }
  return h;
}

int fail(std::ostream& err, const std::exception& e, int code = 1) {
  err << "semcomm: " << e.what() << '\n';
  return code;
}

}  // namespace

std::vector<fs::path> collect_evidence_files(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        const auto ext = entry.path().extension().string();
        if (entry.is_regular_file() && (ext == ".fol" || ext == ".json")) found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end(),
                [](const fs::path& a, const fs::path& b) { return natural_less(a.filename().string(), b.filename().string()); });
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(in)) {
      files.push_back(in);
    } else {
      throw UsageError("no such file or directory: " + in.string());
    }
  }
  if (files.empty()) throw UsageError("no evidence files found (expected *.fol or *.json)");
  return files;
}

std::pair<std::string, std::string> baseline_text(const fs::path& evidence_path, const EvidenceSet& evidence,
                                                  const std::optional<fs::path>& explicit_text) {
  if (explicit_text) return {read_file(*explicit_text), "text:" + explicit_text->filename().string()};
  fs::path sibling = evidence_path;
  sibling.replace_extension(".txt");
  if (fs::is_regular_file(sibling)) return {read_file(sibling), "text:" + sibling.filename().string()};
  return {evidence.normalized_text(), "evidence"};
}

CompressionResult compress_evidence(const EvidenceSet& evidence, const std::string& text,
                                    const std::string& baseline_source, const RunConfig& cfg) {
  CompressionResult r;
  r.codec = lossless_encode(evidence, CodecParams{cfg.codec_lambda}).stats;
  const auto base = shannon_baseline(text);
  r.shannon_bits = base.payload_bits;
  r.shannon_ideal_bits = base.ideal_bits;
  r.gzip_bits = gzip_bits(text);
  r.baseline_source = baseline_source;
  return r;
}

SourceReport analyze_source(const fs::path& path, const RunConfig& cfg) {
  auto loaded = load_evidence(path);
  const EvidenceSet& ev = loaded.evidence;
  SubLanguageConfig slc;
  slc.slack = cfg.slack;
  auto [sl, summary] = build_sublanguage(ev, slc);
  InductiveModel model(summary, cfg.inductive(sl.big_k()), sl.tag());

  SourceReport r;
  r.source_id = ev.source_id();
  r.loader = loaded.loader;
  r.statements = ev.size();
  r.duplicates = ev.duplicate_count();
  r.signature = UniverseSignature{ev.predicates_observed().size(), ev.entities_observed().size()};
  r.big_k = sl.big_k();
  r.c = summary.c;
  r.n = summary.n;
  if (cfg.partition_kind == PartitionKind::constituents) {
    r.cont = cont_entropy(model, r.signature);
    r.inf_entropy_bits = inf_entropy_of_model(model);
  } else {
    r.cont = cont_entropy_state_descriptions(r.signature);
    r.inf_entropy_bits = double(r.signature.volume_exponent());
  }
  auto [text, source] = baseline_text(path, ev, std::nullopt);
  r.compression = compress_evidence(ev, text, source, cfg);
  r.params_hash = params_hash(cfg.to_json());
  log_line(2, r.source_id + ": K=" + std::to_string(r.big_k) + " c=" + std::to_string(r.c) +
                  " n=" + std::to_string(r.n) + " H_cont=" + to_scientific(r.cont.normalized, 4));
  return r;
}

void scale_reports(std::vector<SourceReport>& reports) {
  std::vector<ExtremeReal> values;
  for (const auto& r : reports) values.push_back(r.cont.normalized);
  if (std::any_of(values.begin(), values.end(), [](const ExtremeReal& v) { return v.sign() <= 0; })) {
    log_line(1, "a source has zero content entropy; scaled columns left empty");
    return;
  }
  const auto scaled = scale_entropies(values);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    reports[i].min_scaled = scaled.min_scaled[i];
    reports[i].max_scaled = scaled.max_scaled[i];
  }
}

Json SourceReport::to_json() const {
  Json j;
  j["source_id"] = source_id;
  j["loader"] = loader;
  j["statements"] = statements;
  j["duplicates"] = duplicates;
  j["p"] = signature.n_pred;
  j["e"] = signature.n_ent;
  j["volume_exponent"] = signature.volume_exponent();
  j["K"] = big_k;
  j["c"] = c;
  j["n"] = n;
  j["H_cont_normalized"] = semcomm::to_json(cont.normalized);
  j["H_cont_raw"] = semcomm::to_json(cont.raw);
  j["H_cont_min_scaled"] = semcomm::to_json(min_scaled);
  j["H_cont_max_scaled"] = semcomm::to_json(max_scaled);
  j["H_inf_bits"] = inf_entropy_bits;
  Json comp;
  comp["semantic_bits"] = compression.codec.payload_bits;
  comp["header_bits"] = compression.codec.header_bits;
  comp["container_bits"] = compression.codec.total_bits();
  comp["ideal_bits"] = compression.codec.ideal_bits;
  comp["shannon_bits"] = compression.shannon_bits;
  comp["gzip_bits"] = compression.gzip_bits;
  comp["ratio"] = compression.ratio();
  comp["baseline_source"] = compression.baseline_source;
  j["compression"] = std::move(comp);
  j["params_hash"] = params_hash;
  return j;
}

int cmd_analyze(const std::vector<fs::path>& inputs, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  try {
    cfg.validate();
    files = collect_evidence_files(inputs);
  } catch (const UsageError& e) {
    return fail(err, e, 2);
  }

  std::vector<std::future<SourceReport>> jobs;
  for (const auto& f : files) jobs.push_back(std::async(std::launch::async, analyze_source, f, std::cref(cfg)));
  std::vector<SourceReport> reports;
  int status = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      reports.push_back(jobs[i].get());
    } catch (const std::exception& e) {
      err << "semcomm: " << files[i].string() << ": " << e.what() << '\n';
      status = 1;
    }
  }
  if (status != 0) return status;

  try {
    scale_reports(reports);
    std::vector<EntropyRow> rows;
    for (const auto& r : reports) rows.push_back({r.source_id, r.cont.normalized, r.min_scaled, r.max_scaled});
    std::ostringstream csv;
    write_entropy_csv(csv, rows);
    write_file(cfg.output_dir / "entropy_table.csv", csv.str());

    Json summary;
    summary["params"] = cfg.to_json();
    summary["params_hash"] = params_hash(cfg.to_json());
    auto by_entropy = [](const SourceReport& a, const SourceReport& b) { return a.cont.normalized < b.cont.normalized; };
    summary["most_informative"] = std::max_element(reports.begin(), reports.end(), by_entropy)->source_id;
    summary["least_informative"] = std::min_element(reports.begin(), reports.end(), by_entropy)->source_id;
    Json sources = Json::array();
    for (const auto& r : reports) {
      write_file(cfg.output_dir / "reports" / (stem_of(r.source_id) + ".json"), r.to_json().dump(2) + "\n");
      sources.push_back(r.to_json());
    }
    summary["sources"] = std::move(sources);
    write_file(cfg.output_dir / "analysis.json", summary.dump(2) + "\n");

    out << csv.str();
    out << "most informative: " << summary["most_informative"].get<std::string>()
        << "\nleast informative: " << summary["least_informative"].get<std::string>() << '\n';
  } catch (const std::exception& e) {
    return fail(err, e);
  }
  return 0;
}

int cmd_compress(const fs::path& input, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const UsageError& e) {
    return fail(err, e, 2);
  }
  try {
    auto loaded = load_evidence(input);
    const auto& ev = loaded.evidence;
    auto enc = lossless_encode(ev, CodecParams{cfg.codec_lambda});
    const std::string stem = stem_of(ev.source_id());
    write_file(cfg.output_dir / (stem + ".semc"), std::string(enc.bytes.begin(), enc.bytes.end()));
    auto [text, source] = baseline_text(input, ev, cfg.text_path);
    CompressionResult r = compress_evidence(ev, text, source, cfg);

    Json j;
    j["source_id"] = ev.source_id();
    j["loader"] = loaded.loader;
    j["semantic_bits"] = r.codec.payload_bits;
    j["header_bits"] = r.codec.header_bits;
    j["container_bits"] = r.codec.total_bits();
    j["ideal_bits"] = r.codec.ideal_bits;
    j["shannon_bits"] = r.shannon_bits;
    j["gzip_bits"] = r.gzip_bits;
    j["ratio"] = r.ratio();
    j["baseline_source"] = r.baseline_source;
    j["params_hash"] = params_hash(cfg.to_json());
    write_file(cfg.output_dir / (stem + ".compress.json"), j.dump(2) + "\n");
    out << j.dump(2) << '\n';
  } catch (const std::exception& e) {
    return fail(err, e);
  }
  return 0;
}

int cmd_decompress(const fs::path& input, const std::optional<fs::path>& output, const RunConfig& cfg,
                   std::ostream& out, std::ostream& err) {
  try {
    const std::string raw = read_file(input);
    std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
    EvidenceSet ev = lossless_decode(bytes, input.filename().string());
    const fs::path dest = output ? *output : cfg.output_dir / (input.stem().string() + ".fol");
    write_file(dest, ev.normalized_text());
    out << "decoded " << ev.size() << " statements to " << dest.string() << '\n';
  } catch (const std::exception& e) {
    return fail(err, e);
  }
  return 0;
}

int cmd_lossy(const fs::path& input, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const UsageError& e) {
    return fail(err, e, 2);
  }
  try {
    auto loaded = load_evidence(input);
    const auto& ev = loaded.evidence;
    SubLanguageConfig slc;
    slc.slack = std::max(cfg.slack, cfg.lossy_slack);
    auto [sl, summary] = build_sublanguage(ev, slc);
    const auto group = merge_cells(sl.big_k(), sl.observed_patterns().size(), cfg.lossy_kinds);
    EvidenceSummary coarse = merge_summary(summary, group);
    InductiveModel model(coarse, cfg.inductive(coarse.counts.size()));
    StoryLossyProblem problem = story_lossy_problem(model, cfg.candidate_budget);
    const LossyConfig lc = cfg.lossy();
    RDSweep sweep = rd_sweep(problem.source.probs(), problem.gain, lc);

    const std::string stem = stem_of(ev.source_id());
    std::ostringstream csv;
    write_rd_csv(csv, sweep);
    write_file(cfg.output_dir / (stem + "_rd.csv"), csv.str());

    Json j;
    j["source_id"] = ev.source_id();
    j["K_coarse"] = coarse.counts.size();
    j["sources"] = problem.source.size();
    j["reconstructions"] = problem.reconstructions.size();
    j["source_cont_entropy"] = sweep.source_cont_entropy;
    j["max_cont_info"] = max_cont_info(problem.source.probs(), problem.gain);
    j["frontier_points"] = sweep.frontier.size();
    j["params_hash"] = params_hash(cfg.to_json());
    if (cfg.d_star > 0.0) {
      try {
        RDPoint pt = lossy_optimize(problem.source.probs(), problem.gain, lc);
        j["optimum"] = {{"d_star", cfg.d_star},
                        {"rate_bits", pt.rate_bits},
                        {"cont_info", pt.cont_info},
                        {"beta", format_double(pt.beta)}};
      } catch (const InfeasibleError& e) {
        err << "semcomm: " << e.what() << " (max achievable " << format_double(e.max_achievable) << ")\n";
        return 1;
      }
    }
    write_file(cfg.output_dir / (stem + "_lossy.json"), j.dump(2) + "\n");
    out << csv.str();
  } catch (const std::exception& e) {
    return fail(err, e);
  }
  return 0;
}

int cmd_pac(std::size_t big_k, std::uint64_t alpha, std::optional<double> epsilon,
            std::optional<double> epsilon_prime, std::ostream& out, std::ostream& err) {
  if (epsilon.has_value() == epsilon_prime.has_value())
    return fail(err, UsageError("give exactly one of --epsilon and --epsilon-prime"), 2);
  if (big_k == 0) return fail(err, UsageError("K must be at least 1"), 2);
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0))
    return fail(err, UsageError("epsilon must lie in (0, 1)"), 2);
  if (epsilon_prime && !(*epsilon_prime > 0.0 && std::isfinite(*epsilon_prime)))
    return fail(err, UsageError("epsilon' must be positive"), 2);
  try {
    const double target = epsilon ? *epsilon / (1.0 - *epsilon) : *epsilon_prime;
    const std::uint64_t n0 = pac_sample_bound_odds(big_k, alpha, target);
    out << "K=" << big_k << " alpha=" << alpha << " epsilon'=" << format_double(target) << '\n';
    out << "n_0=" << n0 << '\n';
    out << "n,pac_error\n";
    const std::uint64_t span = n0 - alpha;
    const std::uint64_t step = std::max<std::uint64_t>(1, span / 200);
    for (std::uint64_t n = alpha + 1; n <= n0; n += step) out << n << ',' << format_double(pac_error(big_k, n, alpha)) << '\n';
    if ((n0 - alpha - 1) % step != 0) out << n0 << ',' << format_double(pac_error(big_k, n0, alpha)) << '\n';
  } catch (const std::exception& e) {
    return fail(err, e);
  }
  return 0;
}

int cmd_converge(const std::optional<fs::path>& input, const SyntheticSpec& synthetic, const RunConfig& cfg,
                 std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const UsageError& e) {
    return fail(err, e, 2);
  }
  try {
    std::vector<std::size_t> kinds;
    std::size_t big_k = 0;
    std::string id;
    if (input) {
      auto loaded = load_evidence(*input);
      SubLanguageConfig slc;
      slc.slack = cfg.slack;
      auto [sl, summary] = build_sublanguage(loaded.evidence, slc);
      kinds = kind_stream(loaded.evidence, sl);
      big_k = sl.big_k();
      id = stem_of(loaded.evidence.source_id());
    } else {
      if (synthetic.c == 0 || synthetic.c > synthetic.big_k) throw UsageError("need 1 <= c <= K");
      kinds = synthetic_stream(synthetic.c, synthetic.n, cfg.seed);
      big_k = synthetic.big_k;
      id = "synthetic_K" + std::to_string(big_k) + "_c" + std::to_string(synthetic.c);
    }
    const auto report = check_convergence(kinds, big_k, cfg.inductive(big_k));
    std::ostringstream csv;
    csv << "n,c,p_minimal,error,pac_bound\n";
    for (const auto& row : report.rows)
      csv << row.n << ',' << row.c << ',' << format_double(row.minimal_posterior) << ','
          << to_scientific(row.minimal_error, 6) << ',' << format_double(row.pac_bound) << '\n';
    write_file(cfg.output_dir / (id + "_converge.csv"), csv.str());
    if (!report.rows.empty()) {
      const auto& last = report.rows.back();
      out << id << ": n=" << last.n << " c=" << last.c << " p_minimal=" << format_double(last.minimal_posterior)
          << " error=" << to_scientific(last.minimal_error, 4) << '\n';
    }
    out << "crossing_n(0.99)=" << report.crossing_n << " eventually_monotone=" << report.eventually_monotone
        << " final_within_pac=" << report.final_within_pac << '\n';
  } catch (const UsageError& e) {
    return fail(err, e, 2);
  } catch (const std::exception& e) {
    return fail(err, e);
  }
  return 0;
}

}  // namespace semcomm
