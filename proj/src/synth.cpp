#include "convdist/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "convdist/rng.hpp"

namespace convdist {

void SynthConfig::validate() const {
  if (conversations == 0) throw std::invalid_argument("synth: conversations must be positive");
  if (skeletons == 0) throw std::invalid_argument("synth: skeletons must be positive");
  if (paraphrases == 0 || paraphrases > 8) throw std::invalid_argument("synth: paraphrases must be in [1, 8]");
  if (!(noise >= 0.0 && noise <= 1.0)) throw std::invalid_argument("synth: noise must be in [0, 1]");
  if (min_len == 0 || max_len < min_len) throw std::invalid_argument("synth: need 1 <= min_len <= max_len");
  if (dim < 8) throw std::invalid_argument("synth: dim must be at least 8");
  if (!(intra_bound > 0.0 && intra_bound < 0.5)) throw std::invalid_argument("synth: intra_bound must be in (0, 0.5)");
}

namespace {

struct Atom {
  const char* act;
  const char* slot;  // nullptr when the act has no slot
};

constexpr std::array<Atom, 13> kCustomerAtoms{{{"INFORM_INTENT", "intent"},
                                               {"INFORM", "category"},
                                               {"INFORM", "city"},
                                               {"INFORM", "date"},
                                               {"INFORM", "number_of_tickets"},
                                               {"REQUEST", "address"},
                                               {"REQUEST", "time"},
                                               {"REQUEST_ALTS", nullptr},
                                               {"SELECT", nullptr},
                                               {"AFFIRM", nullptr},
                                               {"NEGATE", nullptr},
                                               {"THANK_YOU", nullptr},
                                               {"GOODBYE", nullptr}}};

constexpr std::array<Atom, 13> kAgentAtoms{{{"REQUEST", "city"},
                                            {"REQUEST", "category"},
                                            {"REQUEST", "date"},
                                            {"OFFER", "event_name"},
                                            {"OFFER", "venue"},
                                            {"OFFER", "time"},
                                            {"INFORM", "address"},
                                            {"CONFIRM", "date"},
                                            {"CONFIRM", "number_of_tickets"},
                                            {"NOTIFY_SUCCESS", nullptr},
                                            {"REQ_MORE", nullptr},
                                            {"OFFER_INTENT", "intent"},
                                            {"GOODBYE", nullptr}}};

constexpr std::array<const char*, 8> kOpeners{"", "Okay, ", "Sure, ", "Well, ", "So, ", "Alright, ", "Hmm, ", "Right, "};

struct Cluster {
  int region;  // 0 customer, 1 agent; cross/single modes use region 0 for all
  std::vector<Atom> atoms;
  std::vector<std::string> texts;
  std::vector<std::vector<float>> vectors;
};

std::string lower_words(std::string s) {
  for (char& c : s) c = c == '_' ? ' ' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string phrase(const std::vector<Atom>& atoms, const char* subject) {
  std::string out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (k) out += " and ";
    out += lower_words(atoms[k].act);
    if (atoms[k].slot) out += std::string(" the ") + lower_words(atoms[k].slot);
  }
  return subject ? std::string(subject) + " " + out : out;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
}

class Generator {
 public:
  explicit Generator(const SynthConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  SynthCorpus run() {
    build_clusters();
    std::vector<std::vector<std::size_t>> skeletons(cfg_.skeletons);
    for (std::size_t k = 0; k < skeletons.size(); ++k) {
      skeletons[k] = cfg_.reorder_pairs && k % 2 == 1 ? reorder(skeletons[k - 1]) : make_skeleton();
    }

    SynthCorpus out{Corpus{}, EmbeddingStore(cfg_.dim, "synthetic-clusters"), {}};
    for (const Cluster& cl : clusters_) {
      for (std::size_t p = 0; p < cl.texts.size(); ++p) out.store.insert(utterance_key(cl.texts[p]), cl.vectors[p]);
    }
    for (std::size_t n = 0; n < cfg_.conversations; ++n) {
      const std::size_t k = rng_.below(skeletons.size());
      out.skeleton_of.push_back(k);
      out.corpus.conversations.push_back(make_dialog(n, k, perturb(skeletons[k])));
    }
    return out;
  }

 private:
  bool alternating() const { return cfg_.speakers == SpeakerMode::Alternating; }

  // Regions: in Alternating mode customers use the first half of the
  // coordinates and agents the second half, so cross-speaker cosine is 0.
  std::pair<std::size_t, std::size_t> support(int region) const {
    if (!alternating()) return {0, cfg_.dim};
    const std::size_t half = cfg_.dim / 2;
    return region == 0 ? std::make_pair(std::size_t{0}, half) : std::make_pair(half, cfg_.dim);
  }

  std::vector<double> gaussian(int region) {
    std::vector<double> v(cfg_.dim, 0.0);
    auto [lo, hi] = support(region);
    for (std::size_t k = lo; k < hi; ++k) v[k] = rng_.normal();
    return v;
  }

  void add_cluster(int region, std::vector<Atom> atoms) {
    const char* subject = nullptr;
    if (alternating()) subject = region == 0 ? "I" : "we";
    const std::string core = phrase(atoms, subject);
    if (!cores_.insert(core).second) return;
    Cluster cl{region, std::move(atoms), {}, {}};
    const auto [lo, hi] = support(region);
    const double kdim = static_cast<double>(hi - lo);

    std::vector<double> centroid;
    for (int attempt = 0;; ++attempt) {
      centroid = gaussian(region);
      normalize(centroid);
      bool separated = true;
      for (const auto& other : centroids_) {
        if (dot(centroid, other) > 0.5) separated = false;
      }
      if (separated || attempt > 200) break;
    }
    centroids_.push_back(centroid);

    // Paraphrases stay within half the angle allowed between two of them.
    const double max_angle = 0.5 * std::acos(1.0 - cfg_.intra_bound) * 0.999;
    const double sigma = std::tan(0.5 * max_angle) / std::sqrt(kdim);
    for (std::size_t p = 0; p < cfg_.paraphrases; ++p) {
      std::vector<double> v;
      do {
        v = gaussian(region);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = centroid[k] + sigma * v[k];
        normalize(v);
      } while (std::acos(std::clamp(dot(v, centroid), -1.0, 1.0)) > max_angle);
      cl.texts.push_back(capitalize(std::string(kOpeners[p]) + core) + ".");
      cl.vectors.emplace_back(v.begin(), v.end());
    }
    clusters_.push_back(std::move(cl));
  }

  void build_regions(int region, std::span<const Atom> atoms) {
    for (const Atom& a : atoms) add_cluster(region, {a});
    // A handful of two-act turns per region, e.g. OFFER_time together with OFFER_venue.
    for (std::size_t k = 0; k < atoms.size() / 2; ++k) {
      std::size_t x = rng_.below(atoms.size());
      std::size_t y;
      do y = rng_.below(atoms.size()); while (y == x);
      if (y < x) std::swap(x, y);
      add_cluster(region, {atoms[x], atoms[y]});
    }
  }

  void build_clusters() {
    if (alternating()) {
      build_regions(0, kCustomerAtoms);
      build_regions(1, kAgentAtoms);
    } else {
      std::vector<Atom> shared(kCustomerAtoms.begin(), kCustomerAtoms.end());
      shared.insert(shared.end(), kAgentAtoms.begin(), kAgentAtoms.end());
      build_regions(0, shared);
    }
    for (std::size_t c = 0; c < clusters_.size(); ++c) by_region_[clusters_[c].region].push_back(c);
  }

  std::string speaker_for(std::size_t step, int region) {
    switch (cfg_.speakers) {
      case SpeakerMode::Alternating: return region == 0 ? "Customer" : "Agent";
      case SpeakerMode::CrossSpeaker: return rng_.bernoulli(0.5) ? "Customer" : "Agent";
      case SpeakerMode::SingleSpeaker: break;
    }
    (void)step;
    return "Customer";
  }

  std::size_t random_cluster(int region) {
    const auto& pool = by_region_[alternating() ? region : 0];
    return pool[rng_.below(pool.size())];
  }

  // Step = cluster index. Alternating mode starts with the customer.
  std::vector<std::size_t> make_skeleton() {
    const std::size_t len = cfg_.min_len + rng_.below(cfg_.max_len - cfg_.min_len + 1);
    std::vector<std::size_t> steps;
    for (std::size_t s = 0; s < len; ++s) steps.push_back(random_cluster(static_cast<int>(s % 2)));
    return steps;
  }

  // Same turns, different order: each speaker's steps are shuffled among that
  // speaker's positions, so the alternation survives.
  std::vector<std::size_t> reorder(std::vector<std::size_t> steps) {
    for (std::size_t parity = 0; parity < 2; ++parity) {
      std::vector<std::size_t> pos;
      for (std::size_t s = parity; s < steps.size(); s += 2) pos.push_back(s);
      for (std::size_t k = pos.size(); k > 1; --k) std::swap(steps[pos[k - 1]], steps[pos[rng_.below(k)]]);
    }
    return steps;
  }

  std::vector<std::size_t> perturb(const std::vector<std::size_t>& skeleton) {
    std::vector<std::size_t> out;
    for (std::size_t step : skeleton) {
      if (!rng_.bernoulli(cfg_.noise)) {
        out.push_back(step);
        continue;
      }
      const int region = clusters_[step].region;
      switch (rng_.below(3)) {
        case 0:  // drop
          break;
        case 1:  // keep and insert a random turn after it
          out.push_back(step);
          out.push_back(random_cluster(static_cast<int>(rng_.below(2))));
          break;
        default:  // replace by another turn of the same speaker
          out.push_back(random_cluster(region));
          break;
      }
    }
    if (out.empty()) out.push_back(skeleton.front());
    return out;
  }

  Conversation make_dialog(std::size_t n, std::size_t skeleton, const std::vector<std::size_t>& steps) {
    Conversation c;
    char id[32];
    std::snprintf(id, sizeof id, "synth-%04zu", n + 1);
    c.id = id;
    c.metadata = {{"source", "synth"}, {"skeleton", std::to_string(skeleton)}};
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const Cluster& cl = clusters_[steps[s]];
      Utterance u;
      u.speaker = speaker_for(s, cl.region);
      u.text = cl.texts[rng_.below(cl.texts.size())];
      for (const Atom& a : cl.atoms) {
        u.acts.push_back({a.act, a.slot ? std::optional<std::string>(a.slot) : std::nullopt});
      }
      if (u.acts.size() > 1 && rng_.bernoulli(0.5)) std::reverse(u.acts.begin(), u.acts.end());
      c.utterances.push_back(std::move(u));
    }
    return c;
  }

  const SynthConfig& cfg_;
  Rng rng_;
  std::vector<Cluster> clusters_;
  std::vector<std::vector<double>> centroids_;
  std::array<std::vector<std::size_t>, 2> by_region_;
  std::set<std::string> cores_;
};

}  // namespace

SynthCorpus synth_corpus(const SynthConfig& cfg) {
  cfg.validate();
  return Generator(cfg).run();
}

}  // namespace convdist
