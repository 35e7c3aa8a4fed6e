#ifndef MULL_WELLFORMED_HPP
#define MULL_WELLFORMED_HPP

#include <string>
#include <vector>

#include "mull/mcut.hpp"
#include "mull/proof.hpp"

namespace mull {

enum class RuleErrorKind { SchemeMismatch, SideConditionFailed, BackEdgeMismatch, NotClosed };

struct RuleError {
  RuleErrorKind kind;
  NodeId node;
  std::string message;
};

const char* rule_error_name(RuleErrorKind k);

// Checks every reachable node: premise sequents match the rule scheme,
// exponential side conditions hold in the instance, mcut nodes satisfy the
// iota/pp conditions, back-edge targets carry the expected sequent, and all
// formulas are closed. Empty result means well-formed.
std::vector<RuleError> check_wellformed(const Proof& p, const InstanceSpec& inst);

}  // namespace mull

#endif
