#include "convdist/conved.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace convdist {

std::string_view to_string(Normalization n) {
  return n == Normalization::None ? "none" : "max_length";
}

Normalization parse_normalization(std::string_view s) {
  if (s == "none") return Normalization::None;
  if (s == "max_length") return Normalization::MaxLength;
  throw std::invalid_argument("unknown normalization '" + std::string(s) + "' (expected none or max_length)");
}

void ConvEDConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a positive finite number");
  auto weight_ok = [](double w) { return std::isfinite(w) && w >= 0.0; };
  if (!weight_ok(ins_weight) || !weight_ok(del_weight)) {
    throw std::invalid_argument("insertion/deletion weights must be finite and non-negative");
  }
}

std::string ConvEDConfig::role_of(const std::string& speaker) const {
  auto it = speaker_roles.find(speaker);
  return it == speaker_roles.end() ? speaker : it->second;
}

std::optional<double> alpha_preset(std::string_view name) {
  if (name == "sgd") return kSgdAlpha;
  if (name == "msdialog") return kMsDialogAlpha;
  return std::nullopt;
}

EmbeddedConversation embed(const Conversation& c, const EmbeddingStore& store, const ConvEDConfig& cfg) {
  EmbeddedConversation e;
  e.id = c.id;
  e.roles.reserve(c.size());
  e.vectors.reserve(c.size());
  for (const Utterance& u : c.utterances) {
    e.roles.push_back(cfg.role_of(u.speaker));
    e.vectors.push_back(store.lookup(u, c.id));
  }
  return e;
}

SubstitutionCost substitution_cost(const Utterance& u1, const Utterance& u2, const EmbeddingStore& store,
                                   const ConvEDConfig& cfg) {
  if (cfg.enforce_actor && cfg.role_of(u1.speaker) != cfg.role_of(u2.speaker)) return SubstitutionCost::forbidden();
  return SubstitutionCost::of(cfg.alpha * cosine_distance(store.lookup(u1), store.lookup(u2)));
}

namespace {

struct UtteranceCosts {
  const EmbeddedConversation& a;
  const EmbeddedConversation& b;
  const ConvEDConfig& cfg;

  double del(std::size_t) const { return cfg.del_weight; }
  double ins(std::size_t) const { return cfg.ins_weight; }
  SubstitutionCost sub(std::size_t i, std::size_t j) const {
    if (cfg.enforce_actor && a.roles[i] != b.roles[j]) return SubstitutionCost::forbidden();
    return SubstitutionCost::of(cfg.alpha * cosine_distance(a.vectors[i], b.vectors[j]));
  }
};

}  // namespace

AlignmentResult conv_ed(const EmbeddedConversation& c1, const EmbeddedConversation& c2, const ConvEDConfig& cfg) {
  cfg.validate();
  if (c1.size() == 0 || c2.size() == 0) throw DataError("convED of an empty conversation");
  AlignmentResult r = align(c1.size(), c2.size(), UtteranceCosts{c1, c2, cfg});
  if (cfg.normalize == Normalization::MaxLength) r.distance /= static_cast<double>(std::max(c1.size(), c2.size()));
  return r;
}

AlignmentResult conv_ed(const Conversation& c1, const Conversation& c2, const EmbeddingStore& store,
                        const ConvEDConfig& cfg) {
  if (c1.size() == 0 || c2.size() == 0) throw DataError("convED of an empty conversation");
  return conv_ed(embed(c1, store, cfg), embed(c2, store, cfg), cfg);
}

std::string render_alignment_table(const Conversation& c1, const Conversation& c2, const AlignmentResult& result) {
  auto cell = [](const Utterance& u) { return u.speaker + ": " + u.text; };
  std::size_t width = c1.id.size();
  for (const auto& s : result.script) {
    if (s.kind != StepKind::Insert) width = std::max(width, cell(c1.utterances.at(s.source)).size());
  }
  std::string out;
  auto row = [&](const std::string& num, const std::string& left, const std::string& right) {
    std::string line = num;
    line.append(4 - std::min<std::size_t>(4, num.size()), ' ');
    line += "| " + left;
    line.append(width - std::min(width, left.size()), ' ');
    line += " | " + right;
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + "\n";
  };
  row("#", c1.id, c2.id);
  out += std::string(4, '-') + "+" + std::string(width + 2, '-') + "+" + std::string(width + 2, '-') + "\n";
  for (std::size_t k = 0; k < result.script.size(); ++k) {
    const EditStep& s = result.script[k];
    row(std::to_string(k + 1), s.kind == StepKind::Insert ? "" : cell(c1.utterances.at(s.source)),
        s.kind == StepKind::Delete ? "" : cell(c2.utterances.at(s.target)));
  }
  return out;
}

}  // namespace convdist
