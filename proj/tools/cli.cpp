#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "convdist/bootstrap.hpp"
#include "convdist/error.hpp"
#include "convdist/ingest.hpp"
#include "convdist/measure.hpp"
#include "convdist/mock_encoder.hpp"
#include "convdist/stats.hpp"
#include "convdist/structed.hpp"
#include "convdist/synth.hpp"
#include "convdist/triplets.hpp"
#include "convdist/tuning.hpp"
#include "json.hpp"

namespace convdist::cli {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string store;
  std::string doc_vectors;
  std::string output;
  std::string format = "records";

  std::optional<double> alpha;
  std::string preset;
  std::string normalize = "none";
  bool relax_actor = false;
  double ins_weight = 1.0;
  double del_weight = 1.0;
  std::vector<std::string> speaker_roles;

  int jobs = 1;
  std::uint64_t seed = 1;

  // distance
  std::string measure;
  std::string pairs = "all";
  bool bench = false;
  std::size_t bench_cold = 50;

  // align
  std::string id1, id2;

  // flow
  std::vector<std::string> ids;

  // eval / ablate
  std::vector<std::string> measures;
  std::string against = "structed";
  std::size_t samples = 100;
  std::size_t size = 200;

  // tune-alpha
  double lo = 1.0, hi = 5.0, step = 0.1;

  // sample-triplets / score-labels
  std::string measure1 = "conved";
  std::string measure2 = "avgsem";
  std::size_t n = 100;
  std::size_t max_attempts = 0;
  bool annotator = false;
  std::string triplets;
  std::string labels;
  double min_agreement = 0.8;

  // ingest
  std::string source_kind;
  std::string source_path;

  // synth / mock-embed
  SynthConfig synth;
  std::string speakers = "alternating";
  std::string store_out;
  std::string encoding = "text";
  std::size_t dim = 256;
};

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

StoreEncoding parse_encoding(const std::string& s) {
  if (s == "text") return StoreEncoding::Text;
  if (s == "binary") return StoreEncoding::Binary;
  throw UsageError("--encoding must be text or binary");
}

// Loaded inputs; measures keep views into the stores, so this outlives them.
struct Context {
  explicit Context(const Options& o) : o(o) {}

  const Corpus& corpus() {
    if (!corpus_) {
      if (o.corpus.empty()) throw UsageError("--corpus is required");
      corpus_ = load_corpus(o.corpus);
    }
    return *corpus_;
  }
  const EmbeddingStore& store() {
    if (!store_) {
      if (o.store.empty()) throw UsageError("--store is required for this measure");
      store_ = load_store(o.store);
    }
    return *store_;
  }
  const DocVectorStore& docs() {
    if (!docs_) {
      if (o.doc_vectors.empty()) throw UsageError("--doc-vectors is required for the d2v measure");
      docs_ = load_store(o.doc_vectors);
    }
    return *docs_;
  }

  ConvEDConfig conved_config() const {
    ConvEDConfig cfg;
    if (o.alpha && !o.preset.empty()) throw UsageError("give either --alpha or --preset, not both");
    if (o.alpha) {
      cfg.alpha = *o.alpha;
    } else if (!o.preset.empty()) {
      auto a = alpha_preset(o.preset);
      if (!a) throw UsageError("unknown preset '" + o.preset + "' (expected sgd or msdialog)");
      cfg.alpha = *a;
    } else {
      throw UsageError("convED needs --alpha or --preset");
    }
    cfg.ins_weight = o.ins_weight;
    cfg.del_weight = o.del_weight;
    cfg.enforce_actor = !o.relax_actor;
    try {
      cfg.normalize = parse_normalization(o.normalize);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    for (const auto& spec : o.speaker_roles) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        throw UsageError("--speaker-role expects LABEL=ROLE, got '" + spec + "'");
      }
      cfg.speaker_roles[spec.substr(0, eq)] = spec.substr(eq + 1);
    }
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }

  MeasurePtr measure(const std::string& name) {
    if (name == "conved") return make_conved(corpus(), store(), conved_config());
    if (name == "structed") return make_structed(corpus());
    if (name == "avgsem") return make_avgsem(corpus(), store());
    if (name == "d2v") return make_d2v(corpus(), docs());
    throw UsageError("unknown measure '" + name + "' (expected conved, structed, avgsem or d2v)");
  }

  std::string normalization_of(const std::string& name) const {
    return name == "conved" ? std::string(to_string(conved_config().normalize)) : "n/a";
  }

  const Options& o;

 private:
  std::optional<Corpus> corpus_;
  std::optional<EmbeddingStore> store_;
  std::optional<DocVectorStore> docs_;
};

std::vector<PairIndex> read_pairs(const std::string& path, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pairs file '" + path + "'");
  std::vector<PairIndex> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) {
      throw ParseError(line_no, "expected two conversation ids per line");
    }
    auto ia = corpus.find(a), ib = corpus.find(b);
    if (!ia) throw ParseError(line_no, "unknown conversation '" + a + "'");
    if (!ib) throw ParseError(line_no, "unknown conversation '" + b + "'");
    pairs.push_back({static_cast<std::uint32_t>(*ia), static_cast<std::uint32_t>(*ib)});
  }
  return pairs;
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw UsageError("unsupported --format '" + format + "'");
}

// ---- subcommands ----------------------------------------------------------

void cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  IngestResult r;
  if (o.source_kind == "sgd") r = ingest_sgd(o.source_path);
  else if (o.source_kind == "msdialog") r = ingest_msdialog(o.source_path);
  else throw UsageError("ingest source must be sgd or msdialog");
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
  for (const auto& v : validate(r.corpus)) {
    err << "warning: " << v.conversation_id;
    if (v.utterance_index) err << '#' << *v.utterance_index;
    err << ": " << v.message << '\n';
  }
  write_corpus(out, r.corpus);
  err << "ingested " << r.corpus.size() << " conversations\n";
}

void cmd_synth(Options o, std::ostream& out, std::ostream& err) {
  if (o.store_out.empty()) throw UsageError("--store-out is required");
  if (o.speakers == "alternating") o.synth.speakers = SpeakerMode::Alternating;
  else if (o.speakers == "cross") o.synth.speakers = SpeakerMode::CrossSpeaker;
  else if (o.speakers == "single") o.synth.speakers = SpeakerMode::SingleSpeaker;
  else throw UsageError("--speakers must be alternating, cross or single");
  o.synth.seed = o.seed;
  try {
    o.synth.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SynthCorpus s = synth_corpus(o.synth);
  save_store(o.store_out, s.store, parse_encoding(o.encoding));
  write_corpus(out, s.corpus);
  err << "generated " << s.corpus.size() << " conversations, " << s.store.size() << " embeddings\n";
}

void cmd_mock_embed(const Options& o, Context& ctx, std::ostream& out, std::ostream& err) {
  if (o.dim == 0) throw UsageError("--dim must be positive");
  const EmbeddingStore store = encode_corpus(ctx.corpus(), MockEncoder(o.dim));
  write_store(out, store, parse_encoding(o.encoding));
  err << "encoded " << store.size() << " unique utterances\n";
}

void cmd_embed_check(Context& ctx, std::ostream& out, std::ostream& err) {
  check_format(ctx.o.format, {"records", "table"});
  const Coverage cov = check_coverage(ctx.corpus(), ctx.store());
  if (ctx.o.format == "records") {
    ordered_json j;
    j["unique_keys"] = cov.unique_keys;
    j["covered"] = cov.covered;
    j["ratio"] = cov.ratio();
    j["dim"] = ctx.store().dim();
    j["encoder_name"] = ctx.store().encoder_name();
    j["missing"] = cov.missing;
    out << j.dump() << '\n';
  } else {
    out << "unique keys  " << cov.unique_keys << "\ncovered      " << cov.covered << "\ncoverage     "
        << fixed(100.0 * cov.ratio(), 2) << "%\n";
    for (const auto& m : cov.missing) out << "missing      " << m << '\n';
  }
  if (!cov.missing.empty()) {
    throw DataError("store misses " + std::to_string(cov.missing.size()) + " utterance key(s)");
  }
  err << "coverage complete\n";
}

void cmd_distance(Context& ctx, std::ostream& out, std::ostream& err) {
  const Options& o = ctx.o;
  check_format(o.format, {"records", "table"});
  if (o.measure.empty()) throw UsageError("--measure is required");
  const Corpus& corpus = ctx.corpus();
  const MeasurePtr m = ctx.measure(o.measure);
  const std::vector<PairIndex> pairs =
      o.pairs == "all" ? upper_triangle_pairs(corpus.size()) : read_pairs(o.pairs, corpus);
  const std::vector<double> d = evaluate_pairs(*m, pairs, o.jobs);
  const std::string norm = ctx.normalization_of(o.measure);

  if (o.format == "table") {
    std::size_t w = 4;
    for (const auto& c : corpus.conversations) w = std::max(w, c.id.size());
    out << pad("id1", w) << "  " << pad("id2", w) << "  " << o.measure << '\n';
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      out << pad(corpus.conversations[pairs[k].i].id, w) << "  " << pad(corpus.conversations[pairs[k].j].id, w)
          << "  " << fixed(d[k]) << '\n';
    }
  } else {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      ordered_json j;
      j["measure"] = o.measure;
      j["id1"] = corpus.conversations[pairs[k].i].id;
      j["id2"] = corpus.conversations[pairs[k].j].id;
      j["distance"] = d[k];
      if (o.measure == "conved") {
        j["alpha"] = ctx.conved_config().alpha;
        j["normalization"] = norm;
      }
      out << j.dump() << '\n';
    }
  }

  if (o.bench) {
    if (o.measure != "conved") throw UsageError("--bench is only available for --measure conved");
    const BenchResult b = bench_conved(corpus, ctx.store(), ctx.conved_config(), pairs, o.bench_cold);
    err << "bench: warm " << fixed(b.warm_ms_per_pair, 4) << " ms/pair over " << b.warm_pairs << " pairs; cold "
        << fixed(b.cold_ms_per_pair, 4) << " ms/pair over " << b.cold_pairs
        << " pairs (mock-encoded per pair); speedup " << fixed(b.speedup(), 1) << "x\n";
  }
}

std::vector<std::string> diagram_labels(const Conversation& c) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const std::string& s = c.utterances[k].speaker;
    labels.push_back((s.empty() ? std::string("?") : s.substr(0, 1)) + std::to_string(k + 1));
  }
  return labels;
}

void cmd_align(Context& ctx, std::ostream& out) {
  const Options& o = ctx.o;
  check_format(o.format, {"table", "diagram", "records"});
  const Corpus& corpus = ctx.corpus();
  const Conversation& c1 = corpus.at(o.id1);
  const Conversation& c2 = corpus.at(o.id2);
  const ConvEDConfig cfg = ctx.conved_config();
  const AlignmentResult r = conv_ed(c1, c2, ctx.store(), cfg);

  if (o.format == "records") {
    ordered_json j;
    j["id1"] = c1.id;
    j["id2"] = c2.id;
    j["alpha"] = cfg.alpha;
    j["normalization"] = std::string(to_string(cfg.normalize));
    j["distance"] = r.distance;
    ordered_json steps = ordered_json::array();
    for (const EditStep& s : r.script) {
      ordered_json step;
      step["op"] = s.kind == StepKind::Substitute ? "substitute" : (s.kind == StepKind::Delete ? "delete" : "insert");
      if (s.kind != StepKind::Insert) step["source"] = s.source + 1;
      if (s.kind != StepKind::Delete) step["target"] = s.target + 1;
      step["cost"] = s.cost;
      steps.push_back(step);
    }
    j["script"] = steps;
    out << j.dump() << '\n';
    return;
  }
  if (o.format == "diagram") {
    const auto a = diagram_labels(c1), b = diagram_labels(c2);
    out << render_gap_diagram(r.script, a, b);
  } else {
    out << render_alignment_table(c1, c2, r);
  }
  out << "distance " << fixed(r.distance) << " (alpha " << cfg.alpha << ", " << r.count(StepKind::Substitute)
      << " substitutions, " << r.count(StepKind::Delete) << " deletions, " << r.count(StepKind::Insert)
      << " insertions)\n";
}

void cmd_flow(Context& ctx, std::ostream& out) {
  const Options& o = ctx.o;
  check_format(o.format, {"records", "table"});
  const Corpus& corpus = ctx.corpus();
  std::vector<const Conversation*> chosen;
  if (o.ids.empty()) {
    for (const auto& c : corpus.conversations) chosen.push_back(&c);
  } else {
    for (const auto& id : o.ids) chosen.push_back(&corpus.at(id));
  }
  for (const Conversation* c : chosen) {
    const ActionFlow f = action_flow(*c);
    if (o.format == "records") {
      ordered_json j;
      j["id"] = c->id;
      j["flow"] = f.tokens;
      out << j.dump() << '\n';
    } else {
      out << c->id << ':';
      for (std::size_t k = 0; k < f.tokens.size(); ++k) out << (k ? " | " : " ") << f.tokens[k];
      out << '\n';
    }
  }
}

ordered_json welch_record(const std::string& a, const std::string& b, const WelchResult& w) {
  ordered_json j;
  j["test"] = "welch";
  j["a"] = a;
  j["b"] = b;
  j["t"] = w.t;
  j["df"] = w.df;
  j["p"] = w.p;
  return j;
}

void cmd_eval(Context& ctx, std::ostream& out) {
  const Options& o = ctx.o;
  check_format(o.format, {"records", "table"});
  if (o.measures.empty()) throw UsageError("at least one --measure is required");
  const Corpus& corpus = ctx.corpus();
  BootstrapPlan plan;
  try {
    plan = plan_bootstrap(corpus.size(), o.samples, o.size, o.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const MeasurePtr reference = ctx.measure(o.against);
  const BootstrapEvaluator eval(*reference, plan, o.jobs);

  std::vector<BootstrapReport> reports;
  for (const auto& name : o.measures) {
    BootstrapReport r = eval.correlate(*ctx.measure(name));
    r.normalization = ctx.normalization_of(name);
    reports.push_back(std::move(r));
  }
  std::vector<std::pair<std::string, WelchResult>> tests;
  for (std::size_t k = 1; k < reports.size(); ++k) {
    tests.emplace_back(reports[k].measure, welch_t_test(reports[0].per_sample_r, reports[k].per_sample_r));
  }

  if (o.format == "records") {
    for (const auto& r : reports) out << r.to_json() << '\n';
    for (const auto& [name, w] : tests) out << welch_record(reports[0].measure, name, w).dump() << '\n';
    return;
  }
  // One row per measure; "**" marks the first measure when it beats every
  // other one at p < .001.
  bool starred = !tests.empty();
  for (std::size_t k = 0; k < tests.size(); ++k) {
    starred = starred && tests[k].second.p < 0.001 && reports[0].mean_r > reports[k + 1].mean_r;
  }
  std::size_t w = 8;
  for (const auto& r : reports) w = std::max(w, r.measure.size());
  out << pad("measure", w) << "  mean r    samples  size  seed  normalization\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    out << pad(r.measure, w) << "  " << pad(fixed(r.mean_r, 3) + (k == 0 && starred ? "**" : ""), 8) << "  "
        << pad(std::to_string(r.n_samples), 7) << "  " << pad(std::to_string(r.sample_size), 4) << "  "
        << pad(std::to_string(r.seed), 4) << "  " << r.normalization << '\n';
  }
  out << "reference: " << reports[0].reference << '\n';
  for (const auto& [name, wr] : tests) {
    out << "welch " << reports[0].measure << " vs " << name << ": t " << fixed(wr.t, 3) << ", df " << fixed(wr.df, 1)
        << ", p " << wr.p << '\n';
  }
  if (starred) out << "** p < .001 against every other measure (Welch t-test)\n";
}

void cmd_ablate(Context& ctx, std::ostream& out) {
  const Options& o = ctx.o;
  check_format(o.format, {"records", "table"});
  if (o.relax_actor) throw UsageError("ablate runs both settings; drop --relax-actor");
  AblationResult r;
  try {
    r = ablate_actor(ctx.corpus(), ctx.store(), ctx.conved_config(), o.samples, o.size, o.seed, o.jobs);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.format == "records") {
    out << r.enforced.to_json() << '\n' << r.relaxed.to_json() << '\n';
    ordered_json j;
    j["enforced_mean_r"] = r.enforced.mean_r;
    j["relaxed_mean_r"] = r.relaxed.mean_r;
    j["difference"] = r.relaxed.mean_r - r.enforced.mean_r;
    j["identical"] = r.enforced.per_sample_r == r.relaxed.per_sample_r;
    out << j.dump() << '\n';
    return;
  }
  out << "actor constraint  mean r\n"
      << "enforced          " << fixed(r.enforced.mean_r) << '\n'
      << "relaxed           " << fixed(r.relaxed.mean_r) << '\n'
      << "difference        " << fixed(r.relaxed.mean_r - r.enforced.mean_r) << '\n'
      << "samples " << r.enforced.n_samples << " x " << r.enforced.sample_size << ", seed " << r.enforced.seed
      << ", reference " << r.enforced.reference << '\n';
}

void cmd_tune(Context& ctx, std::ostream& out) {
  const Options& o = ctx.o;
  check_format(o.format, {"records", "table"});
  if (o.alpha || !o.preset.empty()) throw UsageError("tune-alpha searches alpha; drop --alpha/--preset");
  std::vector<double> grid;
  try {
    grid = alpha_grid(o.lo, o.hi, o.step);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Options with_alpha = o;
  with_alpha.alpha = grid.front();
  Context tmp(with_alpha);
  ConvEDConfig base = tmp.conved_config();
  TuneResult r;
  try {
    r = tune_alpha(ctx.corpus(), ctx.store(), grid, base, o.jobs);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.format == "records") {
    for (const auto& cell : r.grid) {
      ordered_json j;
      j["alpha"] = cell.alpha;
      if (cell.r) j["r"] = *cell.r;
      else j["r"] = nullptr;
      if (!cell.note.empty()) j["note"] = cell.note;
      out << j.dump() << '\n';
    }
    ordered_json j;
    j["best_alpha"] = r.best_alpha;
    j["best_r"] = r.best_r;
    j["pairs"] = r.pairs;
    j["normalization"] = std::string(to_string(base.normalize));
    out << j.dump() << '\n';
    return;
  }
  out << "alpha  r\n";
  for (const auto& cell : r.grid) {
    out << pad(fixed(cell.alpha, 2), 5) << "  " << (cell.r ? fixed(*cell.r) : "undefined (" + cell.note + ")")
        << (cell.alpha == r.best_alpha ? "  <- best" : "") << '\n';
  }
  out << "best alpha " << fixed(r.best_alpha, 2) << " (r " << fixed(r.best_r) << " over " << r.pairs << " pairs)\n";
}

void cmd_sample_triplets(Context& ctx, std::ostream& out, std::ostream& err) {
  const Options& o = ctx.o;
  if (o.n == 0) throw UsageError("--n must be positive");
  const MeasurePtr m1 = ctx.measure(o.measure1);
  const MeasurePtr m2 = ctx.measure(o.measure2);
  TripletSample s;
  try {
    s = sample_disagreement_triplets(*m1, *m2, o.n, o.seed, o.max_attempts, o.jobs);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_triplets(out, ctx.corpus(), s, m1->name(), m2->name(), o.annotator);
  if (!s.complete) err << "warning: " << s.warning << '\n';
  err << "drawn " << s.drawn << ", agreements " << s.agreements << ", disagreements " << s.disagreements << ", ties "
      << s.ties;
  if (auto ratio = s.agreement_ratio()) err << ", agreement ratio " << fixed(*ratio, 4);
  err << '\n';
}

void cmd_score_labels(Context& ctx, std::ostream& out) {
  const Options& o = ctx.o;
  check_format(o.format, {"records", "table"});
  if (o.measure.empty()) throw UsageError("--measure is required");
  if (!(o.min_agreement >= 0.0 && o.min_agreement <= 1.0)) throw UsageError("--min-agreement must lie in [0, 1]");
  std::ifstream tin(o.triplets), lin(o.labels);
  if (!tin) throw DataError("cannot open triplets file '" + o.triplets + "'");
  if (!lin) throw DataError("cannot open labels file '" + o.labels + "'");
  const auto triplets = read_triplets(tin);
  const auto labels = read_labels(lin);
  const MeasurePtr m = ctx.measure(o.measure);
  const AgreementResult r = agreement_ratio(triplets, labels, *m, o.min_agreement);
  if (o.format == "records") {
    ordered_json j;
    j["measure"] = m->name();
    j["labels"] = r.labels;
    j["retained"] = r.retained;
    j["matches"] = r.matches;
    j["ratio"] = r.ratio;
    j["min_agreement"] = o.min_agreement;
    out << j.dump() << '\n';
  } else {
    out << m->name() << ": " << r.matches << " of " << r.retained << " retained triplets agree ("
        << fixed(100.0 * r.ratio, 1) << "%), " << r.labels << " labels read\n";
  }
}

// ---- option wiring --------------------------------------------------------

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("-o,--output", o.output, "Write results to this file instead of standard output");
}

void add_corpus(CLI::App* sub, Options& o) {
  sub->add_option("--corpus", o.corpus, "Canonical corpus (JSON lines)")->required();
}

void add_store(CLI::App* sub, Options& o) {
  sub->add_option("--store", o.store, "Utterance embedding store (needed by conved and avgsem)");
}

void add_format(CLI::App* sub, Options& o, const std::string& help) {
  sub->add_option("--format", o.format, help)->capture_default_str();
}

void add_jobs(CLI::App* sub, Options& o) {
  sub->add_option("--jobs", o.jobs, "Parallel pair-evaluation workers; 0 uses all cores")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

void add_seed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_conved(CLI::App* sub, Options& o, bool with_alpha = true, bool with_relax = true) {
  if (with_alpha) {
    sub->add_option("--alpha", o.alpha, "Substitution weight alpha (required for conved unless --preset is given)");
    sub->add_option("--preset", o.preset, "Named alpha: sgd (2.2) or msdialog (2.7)");
  }
  sub->add_option("--normalize", o.normalize, "convED normalization: none or max_length")->capture_default_str();
  if (with_relax) sub->add_flag("--relax-actor", o.relax_actor, "Allow substitutions across different actors");
  sub->add_option("--ins-weight", o.ins_weight, "Insertion cost")->capture_default_str();
  sub->add_option("--del-weight", o.del_weight, "Deletion cost")->capture_default_str();
  sub->add_option("--speaker-role", o.speaker_roles, "Map a speaker label to a role, LABEL=ROLE (repeatable)");
}

void add_doc_vectors(CLI::App* sub, Options& o) {
  sub->add_option("--doc-vectors", o.doc_vectors, "Document vector store keyed by conversation id (d2v)");
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open '" + path + "' for writing");
  f << data;
  if (!f) throw DataError("write to '" + path + "' failed");
}

}  // namespace

BenchResult bench_conved(const Corpus& corpus, const EmbeddingStore& store, const ConvEDConfig& cfg,
                         std::span<const PairIndex> pairs, std::size_t cold_limit) {
  using clock = std::chrono::steady_clock;
  BenchResult b;
  if (pairs.empty()) return b;

  // Repeat the warm pass until at least 50 ms have elapsed so tiny inputs still time sensibly.
  double sink = 0.0;
  const auto w0 = clock::now();
  double elapsed = 0.0;
  do {
    for (const PairIndex& p : pairs) {
      sink += conv_ed(corpus.conversations[p.i], corpus.conversations[p.j], store, cfg).distance;
    }
    b.warm_pairs += pairs.size();
    elapsed = std::chrono::duration<double, std::milli>(clock::now() - w0).count();
  } while (elapsed < 50.0);
  b.warm_ms_per_pair = elapsed / static_cast<double>(b.warm_pairs);

  const MockEncoder encoder(store.dim());
  const std::size_t cold = std::min(pairs.size(), std::max<std::size_t>(cold_limit, 1));
  const auto c0 = clock::now();
  for (std::size_t k = 0; k < cold; ++k) {
    const Conversation& c1 = corpus.conversations[pairs[k].i];
    const Conversation& c2 = corpus.conversations[pairs[k].j];
    EmbeddingStore fresh(store.dim(), std::string(MockEncoder::kName));
    for (const Conversation* c : {&c1, &c2}) {
      for (const auto& u : c->utterances) {
        const std::string key = utterance_key(u.text);
        if (!fresh.contains(key)) fresh.insert(key, encoder.encode(u.text));
      }
    }
    sink += conv_ed(c1, c2, fresh, cfg).distance;
  }
  b.cold_pairs = cold;
  b.cold_ms_per_pair = std::chrono::duration<double, std::milli>(clock::now() - c0).count() / static_cast<double>(cold);
  if (sink < 0.0) b.cold_pairs = 0;  // keeps the loops observable
  return b;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Conversation similarity: convED, structED and baselines, with evaluation tooling", "convdist"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto* ingest = app.add_subcommand("ingest", "Convert SGD or MSDialog releases into the canonical corpus");
  ingest->add_option("source", o.source_kind, "sgd or msdialog")->required()->check(CLI::IsMember({"sgd", "msdialog"}));
  ingest->add_option("path", o.source_path, "SGD split directory or MSDialog JSON file")->required();
  add_output(ingest, o);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic annotated corpus and its embedding store");
  synth->add_option("--conversations", o.synth.conversations, "Number of dialogs")->capture_default_str();
  synth->add_option("--skeletons", o.synth.skeletons, "Number of act-flow skeletons")->capture_default_str();
  synth->add_option("--paraphrases", o.synth.paraphrases, "Paraphrases per semantic cluster (1-8)")
      ->capture_default_str();
  synth->add_option("--noise", o.synth.noise, "Per-step edit probability")->capture_default_str();
  synth->add_option("--min-len", o.synth.min_len, "Shortest skeleton")->capture_default_str();
  synth->add_option("--max-len", o.synth.max_len, "Longest skeleton")->capture_default_str();
  synth->add_option("--dim", o.synth.dim, "Embedding dimension")->capture_default_str();
  synth->add_option("--speakers", o.speakers, "alternating, cross or single")->capture_default_str();
  synth->add_option("--store-out", o.store_out, "Where to write the embedding store")->required();
  synth->add_option("--encoding", o.encoding, "Store encoding: text or binary")->capture_default_str();
  add_seed(synth, o);
  add_output(synth, o);

  auto* mock = app.add_subcommand("mock-embed", "Encode a corpus with the deterministic mock encoder");
  add_corpus(mock, o);
  mock->add_option("--dim", o.dim, "Embedding dimension")->capture_default_str();
  mock->add_option("--encoding", o.encoding, "Store encoding: text or binary")->capture_default_str();
  add_output(mock, o);

  auto* check = app.add_subcommand("embed-check", "Verify that a store covers every utterance of a corpus");
  add_corpus(check, o);
  check->add_option("--store", o.store, "Utterance embedding store")->required();
  add_format(check, o, "records or table");
  add_output(check, o);

  auto* distance = app.add_subcommand("distance", "Pairwise distances under one measure");
  add_corpus(distance, o);
  distance->add_option("--measure", o.measure, "conved, structed, avgsem or d2v")->required();
  add_store(distance, o);
  add_doc_vectors(distance, o);
  add_conved(distance, o);
  distance->add_option("--pairs", o.pairs, "'all' for every unordered pair, or a file of 'id1 id2' lines")
      ->capture_default_str();
  distance->add_flag("--bench", o.bench, "Report warm-store and mock-encoded per-pair times on stderr (conved)");
  distance->add_option("--bench-cold", o.bench_cold, "Pairs timed end to end by --bench")->capture_default_str();
  add_jobs(distance, o);
  add_format(distance, o, "records or table");
  add_output(distance, o);

  auto* align = app.add_subcommand("align", "convED alignment of two conversations");
  add_corpus(align, o);
  align->add_option("id1", o.id1, "First conversation id")->required();
  align->add_option("id2", o.id2, "Second conversation id")->required();
  align->add_option("--store", o.store, "Utterance embedding store")->required();
  add_conved(align, o);
  align->add_option("--format", o.format, "table, diagram or records (default table)");
  add_output(align, o);

  auto* flow = app.add_subcommand("flow", "Action flows used by structED");
  add_corpus(flow, o);
  flow->add_option("ids", o.ids, "Conversation ids (default: all)");
  add_format(flow, o, "records or table");
  add_output(flow, o);

  auto* eval = app.add_subcommand("eval", "Bootstrap correlation of measures against a reference");
  add_corpus(eval, o);
  eval->add_option("--measure", o.measures, "Measure to evaluate (repeatable); the first is tested against the rest")
      ->required();
  eval->add_option("--against", o.against, "Reference measure")->capture_default_str();
  eval->add_option("--samples", o.samples, "Bootstrap subsets")->capture_default_str();
  eval->add_option("--size", o.size, "Conversations per subset")->capture_default_str();
  add_store(eval, o);
  add_doc_vectors(eval, o);
  add_conved(eval, o);
  add_seed(eval, o);
  add_jobs(eval, o);
  add_format(eval, o, "records or table");
  add_output(eval, o);

  auto* ablate = app.add_subcommand("ablate", "convED bootstrap with and without the actor constraint");
  add_corpus(ablate, o);
  ablate->add_option("--store", o.store, "Utterance embedding store")->required();
  add_conved(ablate, o, true, false);
  ablate->add_option("--samples", o.samples, "Bootstrap subsets")->capture_default_str();
  ablate->add_option("--size", o.size, "Conversations per subset")->capture_default_str();
  add_seed(ablate, o);
  add_jobs(ablate, o);
  add_format(ablate, o, "records or table");
  add_output(ablate, o);

  auto* tune = app.add_subcommand("tune-alpha", "Grid search for alpha on a held-out corpus against structED");
  tune->add_option("--corpus", o.corpus, "Held-out corpus (JSON lines)")->required();
  tune->add_option("--store", o.store, "Utterance embedding store")->required();
  tune->add_option("--lo", o.lo, "Smallest alpha")->capture_default_str();
  tune->add_option("--hi", o.hi, "Largest alpha")->capture_default_str();
  tune->add_option("--step", o.step, "Grid step")->capture_default_str();
  add_conved(tune, o, false);
  add_jobs(tune, o);
  add_format(tune, o, "records or table");
  add_output(tune, o);

  auto* sample = app.add_subcommand("sample-triplets", "Draw triplets on which two measures disagree");
  add_corpus(sample, o);
  sample->add_option("--measure1", o.measure1, "First measure")->capture_default_str();
  sample->add_option("--measure2", o.measure2, "Second measure")->capture_default_str();
  sample->add_option("--n", o.n, "Disagreement triplets wanted")->capture_default_str();
  sample->add_option("--max-attempts", o.max_attempts, "Triplets to draw at most; 0 means max(10000, 200 n)")
      ->capture_default_str();
  sample->add_flag("--annotator", o.annotator, "Omit measure verdicts from the export");
  add_store(sample, o);
  add_doc_vectors(sample, o);
  add_conved(sample, o);
  add_seed(sample, o);
  add_jobs(sample, o);
  add_output(sample, o);

  auto* score = app.add_subcommand("score-labels", "Agreement of a measure with human triplet labels");
  add_corpus(score, o);
  score->add_option("--triplets", o.triplets, "Triplet export (JSON lines)")->required();
  score->add_option("--labels", o.labels, "Labels (JSON lines: triplet_id, chosen, agreement)")->required();
  score->add_option("--measure", o.measure, "conved, structed, avgsem or d2v")->required();
  score->add_option("--min-agreement", o.min_agreement, "Drop labels below this annotator agreement")
      ->capture_default_str();
  add_store(score, o);
  add_doc_vectors(score, o);
  add_conved(score, o);
  add_format(score, o, "records or table");
  add_output(score, o);

  std::vector<const char*> argv{"convdist"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (align->parsed() && o.format == "records" && align->count("--format") == 0) o.format = "table";

  try {
    std::ostringstream buf;
    Context ctx(o);
    if (ingest->parsed()) cmd_ingest(o, buf, err);
    else if (synth->parsed()) cmd_synth(o, buf, err);
    else if (mock->parsed()) cmd_mock_embed(o, ctx, buf, err);
    else if (check->parsed()) {
      // Coverage is reported even when it fails, so write before rethrowing.
      try {
        cmd_embed_check(ctx, buf, err);
      } catch (const DataError&) {
        if (o.output.empty()) out << buf.str();
        else write_file(o.output, buf.str());
        throw;
      }
    }
    else if (distance->parsed()) cmd_distance(ctx, buf, err);
    else if (align->parsed()) cmd_align(ctx, buf);
    else if (flow->parsed()) cmd_flow(ctx, buf);
    else if (eval->parsed()) cmd_eval(ctx, buf);
    else if (ablate->parsed()) cmd_ablate(ctx, buf);
    else if (tune->parsed()) cmd_tune(ctx, buf);
    else if (sample->parsed()) cmd_sample_triplets(ctx, buf, err);
    else if (score->parsed()) cmd_score_labels(ctx, buf);
    if (o.output.empty()) out << buf.str();
    else write_file(o.output, buf.str());
    return kExitOk;
  } catch (const UsageError& e) {
    err << "convdist: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "convdist: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "convdist: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace convdist::cli
