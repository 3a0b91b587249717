#pragma once

#include <string>

#include "mbdp/model.hpp"

namespace mbdp {

// Line-oriented problem description; `#` starts a comment.
//
//   agents: 2
//   states: s0 s1 ...          (or: states: <count>, named 0..count-1)
//   actions: <agent> name ...
//   observations: <agent> name ...
//   horizon: T
//   start: p_0 p_1 ...         (optional, default uniform)
//   T: a_1 .. a_n : s : s' : probability
//   O: a_1 .. a_n : s' : o_1 .. o_n : probability
//   R: a_1 .. a_n : s : s' : value
//
// Entries not listed are zero. Headers must precede the entries that use
// them. Names may also be given as indices. A repeated entry or header is an
// error. The parsed model must pass validate().
DecPomdp parse_problem(const std::string& text, const std::string& name = "problem");
DecPomdp parse_problem_file(const std::string& path);

// Writes every nonzero entry in the format above; parse_problem() reads it
// back to an identical model.
std::string write_problem(const DecPomdp& model);

}  // namespace mbdp
