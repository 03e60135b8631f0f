#include "convdist/triplets.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "convdist/pairwise.hpp"
#include "convdist/rng.hpp"
#include "json.hpp"

namespace convdist {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

int sign_of(double d1, double d2) { return d1 < d2 ? -1 : (d1 > d2 ? 1 : 0); }

constexpr std::size_t kBatch = 512;

}  // namespace

int verdict(const Measure& m, std::size_t anchor, std::size_t cand1, std::size_t cand2) {
  return sign_of(m.distance(anchor, cand1), m.distance(anchor, cand2));
}

std::optional<double> TripletSample::agreement_ratio() const {
  const std::size_t decided = agreements + disagreements;
  if (decided == 0) return std::nullopt;
  return static_cast<double>(agreements) / static_cast<double>(decided);
}

TripletSample sample_disagreement_triplets(const Measure& m1, const Measure& m2, std::size_t n, std::uint64_t seed,
                                           std::size_t max_attempts, int jobs) {
  if (m1.size() != m2.size()) throw std::invalid_argument("triplet sampling: measures bound to different corpora");
  const std::size_t size = m1.size();
  if (size < 3) throw std::invalid_argument("triplet sampling needs at least 3 conversations");
  if (max_attempts == 0) max_attempts = std::max<std::size_t>(10000, 200 * n);

  TripletSample out;
  Rng rng(seed);
  std::vector<Triplet> batch;
  std::vector<PairIndex> pairs;
  while (out.triplets.size() < n && out.drawn < max_attempts) {
    const std::size_t count = std::min(kBatch, max_attempts - out.drawn);
    batch.clear();
    pairs.clear();
    for (std::size_t k = 0; k < count; ++k) {
      const auto a = static_cast<std::uint32_t>(rng.below(size));
      std::uint32_t c1, c2;
      do c1 = static_cast<std::uint32_t>(rng.below(size)); while (c1 == a);
      do c2 = static_cast<std::uint32_t>(rng.below(size)); while (c2 == a || c2 == c1);
      batch.push_back({a, c1, c2, 0, 0});
      pairs.push_back({a, c1});
      pairs.push_back({a, c2});
    }
    const std::vector<double> d1 = evaluate_pairs(m1, pairs, jobs);
    const std::vector<double> d2 = evaluate_pairs(m2, pairs, jobs);
    for (std::size_t k = 0; k < batch.size() && out.triplets.size() < n; ++k) {
      Triplet t = batch[k];
      t.verdict1 = sign_of(d1[2 * k], d1[2 * k + 1]);
      t.verdict2 = sign_of(d2[2 * k], d2[2 * k + 1]);
      ++out.drawn;
      if (t.verdict1 == 0 || t.verdict2 == 0) {
        ++out.ties;
      } else if (t.verdict1 == t.verdict2) {
        ++out.agreements;
      } else {
        ++out.disagreements;
        out.triplets.push_back(t);
      }
    }
  }
  if (out.triplets.size() < n) {
    out.complete = false;
    out.warning = "found " + std::to_string(out.triplets.size()) + " of " + std::to_string(n) +
                  " disagreement triplets within " + std::to_string(max_attempts) + " attempts";
  }
  return out;
}

std::string triplet_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%06zu", index + 1);
  return buf;
}

void write_triplets(std::ostream& out, const Corpus& corpus, const TripletSample& sample, const std::string& name1,
                    const std::string& name2, bool annotator_view) {
  auto texts = [&](std::uint32_t idx) {
    json lines = json::array();
    for (const auto& u : corpus.conversations.at(idx).utterances) lines.push_back(u.speaker + ": " + u.text);
    return lines;
  };
  for (std::size_t k = 0; k < sample.triplets.size(); ++k) {
    const Triplet& t = sample.triplets[k];
    ordered_json j;
    j["triplet_id"] = triplet_id(k);
    j["anchor"] = corpus.conversations.at(t.anchor).id;
    j["cand1"] = corpus.conversations.at(t.cand1).id;
    j["cand2"] = corpus.conversations.at(t.cand2).id;
    j["texts"] = {{"anchor", texts(t.anchor)}, {"cand1", texts(t.cand1)}, {"cand2", texts(t.cand2)}};
    if (!annotator_view) j["verdicts"] = {{name1, t.verdict1}, {name2, t.verdict2}};
    out << j.dump() << '\n';
  }
}

std::vector<TripletRef> read_triplets(std::istream& in) {
  std::vector<TripletRef> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      out.push_back({j.at("triplet_id").get<std::string>(), j.at("anchor").get<std::string>(),
                     j.at("cand1").get<std::string>(), j.at("cand2").get<std::string>()});
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed triplet record: ") + e.what());
    }
  }
  return out;
}

std::vector<Label> read_labels(std::istream& in) {
  std::vector<Label> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Label label;
    try {
      const json j = json::parse(line);
      label.triplet_id = j.at("triplet_id").get<std::string>();
      const json& chosen = j.at("chosen");
      if (chosen == 1 || chosen == "1") label.chosen = Choice::First;
      else if (chosen == 2 || chosen == "2") label.chosen = Choice::Second;
      else if (chosen == "undecided") label.chosen = Choice::Undecided;
      else throw ParseError(line_no, "chosen must be 1, 2 or \"undecided\"");
      label.agreement = j.at("agreement").get<double>();
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed label record: ") + e.what());
    }
    if (!(label.agreement >= 0.0 && label.agreement <= 1.0)) throw ParseError(line_no, "agreement must lie in [0, 1]");
    out.push_back(std::move(label));
  }
  return out;
}

void write_labels(std::ostream& out, std::span<const Label> labels) {
  for (const Label& l : labels) {
    ordered_json j;
    j["triplet_id"] = l.triplet_id;
    if (l.chosen == Choice::Undecided) j["chosen"] = "undecided";
    else j["chosen"] = l.chosen == Choice::First ? 1 : 2;
    j["agreement"] = l.agreement;
    out << j.dump() << '\n';
  }
}

AgreementResult agreement_ratio(std::span<const TripletRef> triplets, std::span<const Label> labels, const Measure& m,
                                double min_agreement) {
  std::map<std::string, const TripletRef*> by_id;
  for (const auto& t : triplets) by_id[t.triplet_id] = &t;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m.size(); ++i) index[m.id(i)] = i;
  auto resolve = [&](const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw DataError("labelled triplet names unknown conversation '" + id + "'");
    return it->second;
  };

  AgreementResult r;
  r.labels = labels.size();
  for (const Label& l : labels) {
    auto it = by_id.find(l.triplet_id);
    if (it == by_id.end()) throw DataError("label for unknown triplet '" + l.triplet_id + "'");
    if (l.chosen == Choice::Undecided || l.agreement < min_agreement) continue;
    ++r.retained;
    const TripletRef& t = *it->second;
    const int v = verdict(m, resolve(t.anchor), resolve(t.cand1), resolve(t.cand2));
    if ((v < 0 && l.chosen == Choice::First) || (v > 0 && l.chosen == Choice::Second)) ++r.matches;
  }
  if (r.retained == 0) throw DataError("no labelled triplets left after filtering");
  r.ratio = static_cast<double>(r.matches) / static_cast<double>(r.retained);
  return r;
}

}  // namespace convdist
