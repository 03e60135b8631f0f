#pragma once

#include <string>
#include <vector>

#include "convdist/dialog.hpp"
#include "convdist/edit_distance.hpp"

namespace convdist {

/// One token per utterance: its act_slot pairs (bare act when there is no
/// slot), sorted bytewise and joined with ",".
struct ActionFlow {
  std::vector<std::string> tokens;

  bool operator==(const ActionFlow&) const = default;
};

std::string flow_token(const Utterance& u);

/// Throws UnannotatedUtterance naming the first utterance without acts.
ActionFlow action_flow(const Conversation& c);

/// Edit distance over flow tokens with ins = del = 1 and mismatch substitution 2,
/// divided by the longer flow length. Result lies in [0, 2].
double struct_ed(const ActionFlow& f1, const ActionFlow& f2);
double struct_ed(const Conversation& c1, const Conversation& c2);

AlignmentResult align_flows(const ActionFlow& f1, const ActionFlow& f2);

}  // namespace convdist
