#include "convdist/structed.hpp"

#include <algorithm>

namespace convdist {

std::string flow_token(const Utterance& u) {
  std::vector<std::string> parts;
  parts.reserve(u.acts.size());
  for (const ActAnnotation& a : u.acts) parts.push_back(a.slot ? a.act + "_" + *a.slot : a.act);
  std::sort(parts.begin(), parts.end());
  std::string token;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) token += ',';
    token += parts[k];
  }
  return token;
}

ActionFlow action_flow(const Conversation& c) {
  ActionFlow flow;
  flow.tokens.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Utterance& u = c.utterances[i];
    if (u.acts.empty()) {
      throw UnannotatedUtterance("conversation '" + c.id + "' utterance " + std::to_string(i) +
                                 " has no act annotations");
    }
    flow.tokens.push_back(flow_token(u));
  }
  return flow;
}

AlignmentResult align_flows(const ActionFlow& f1, const ActionFlow& f2) {
  static const CostModel<std::string> kCosts = uniform_costs<std::string>(1.0, 2.0);
  return edit_distance(std::span<const std::string>(f1.tokens), std::span<const std::string>(f2.tokens), kCosts);
}

double struct_ed(const ActionFlow& f1, const ActionFlow& f2) {
  const std::size_t longest = std::max(f1.tokens.size(), f2.tokens.size());
  if (longest == 0) throw DataError("structED of two empty action flows is undefined");
  return align_flows(f1, f2).distance / static_cast<double>(longest);
}

double struct_ed(const Conversation& c1, const Conversation& c2) {
  return struct_ed(action_flow(c1), action_flow(c2));
}

}  // namespace convdist
