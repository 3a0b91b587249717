#pragma once

#include <string>

#include "mbdp/model.hpp"
#include "mbdp/policy.hpp"

namespace mbdp {

// Canonical text form of a joint policy: a JSON array with one entry per agent,
//   {"agent": i, "tree": {"action": "send", "children": {"full": <tree>, ...}}}
// Leaves have no "children". Children are listed in the agent's observation
// order. A subtree that already appeared earlier in the same agent's tree is
// written as {"ref": k}, k being its position in the preorder of the nodes
// written out in full; this keeps shared subtrees linear in size.
std::string serialize_policy(const JointPolicy& joint, const DecPomdp& model);

// Inverse of serialize_policy. Malformed text raises ParseError with the line
// and column; well-formed text that does not fit the model (unknown names,
// missing branches, bad references, unequal depths) raises DataError.
JointPolicy deserialize_policy(const std::string& text, const DecPomdp& model);

}  // namespace mbdp
