#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convdist/dialog.hpp"
#include "convdist/edit_distance.hpp"
#include "convdist/embedding_store.hpp"

namespace convdist {

enum class Normalization { None, MaxLength };

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view s);

struct ConvEDConfig {
  double alpha = 0.0;  // required; see alpha_preset()
  double ins_weight = 1.0;
  double del_weight = 1.0;
  bool enforce_actor = true;
  Normalization normalize = Normalization::None;
  /// Optional speaker label -> role remapping applied before the actor check.
  /// Labels without an entry keep their own name.
  std::map<std::string, std::string> speaker_roles;

  /// Throws std::invalid_argument unless alpha > 0 and the weights are finite and non-negative.
  void validate() const;
  std::string role_of(const std::string& speaker) const;
};

inline constexpr double kSgdAlpha = 2.2;
inline constexpr double kMsDialogAlpha = 2.7;

/// "sgd" -> 2.2, "msdialog" -> 2.7.
std::optional<double> alpha_preset(std::string_view name);

/// A conversation resolved against a store: one role label and one vector per utterance.
struct EmbeddedConversation {
  std::string id;
  std::vector<std::string> roles;
  std::vector<std::span<const float>> vectors;

  std::size_t size() const noexcept { return vectors.size(); }
};

/// Looks up every utterance; throws MissingEmbedding naming the conversation.
EmbeddedConversation embed(const Conversation& c, const EmbeddingStore& store, const ConvEDConfig& cfg);

/// Forbidden when the actor constraint is on and the roles differ, else alpha * cosine distance.
SubstitutionCost substitution_cost(const Utterance& u1, const Utterance& u2, const EmbeddingStore& store,
                                   const ConvEDConfig& cfg);

/// Alignment of the two utterance sequences. With Normalization::MaxLength the
/// distance is divided by max(m, n) while step costs stay raw.
AlignmentResult conv_ed(const EmbeddedConversation& c1, const EmbeddedConversation& c2, const ConvEDConfig& cfg);
AlignmentResult conv_ed(const Conversation& c1, const Conversation& c2, const EmbeddingStore& store,
                        const ConvEDConfig& cfg);

/// Side-by-side table with one row per step; inserted/deleted utterances leave
/// the other column empty.
std::string render_alignment_table(const Conversation& c1, const Conversation& c2, const AlignmentResult& result);

}  // namespace convdist
