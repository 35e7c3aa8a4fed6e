#ifndef MULL_MCUT_HPP
#define MULL_MCUT_HPP

#include <optional>
#include <string>
#include <vector>

#include "mull/proof.hpp"

namespace mull {

// Standalone multicut interface: premises, the conclusion ancestor map iota,
// and the dual pairing pp over the remaining positions.
struct Mcut {
  std::vector<Sequent> premises;
  std::vector<PremPos> iota;                      // one entry per conclusion position
  std::vector<std::pair<PremPos, PremPos>> pp;    // unordered pairs
};

enum class McutErrorKind {
  NotInjective, NotTotalOffIota, NotSymmetric, MultiplyPaired, NotDual, NotTree,
};

struct McutError {
  McutErrorKind kind;
  std::vector<PremPos> where;
  std::string message;
};

const char* mcut_error_name(McutErrorKind k);

// Checks the multicut side conditions in a fixed order and reports the first
// failure: iota injective; pp defined exactly off iota's range and total
// there; symmetric; each position paired at most once; paired formulas dual;
// the induced premise graph acyclic and connected.
std::optional<McutError> validate_mcut(const Mcut& m);

// Premises reachable from the given position's premise through pp links,
// the position's own premise excluded; empty for unpaired positions.
std::vector<std::uint32_t> restrict_context(const Mcut& m, PremPos pos);
std::vector<std::uint32_t> restrict_context(const Mcut& m, const std::vector<PremPos>& xs);

// Premises reachable from `from` in the pp graph without entering `removed`.
// This is the tree-splitting restriction the rewrite steps use.
std::vector<std::uint32_t> reach_without(const Mcut& m, std::uint32_t from, std::uint32_t removed);

struct BangContextShape {
  bool all_promotions = false;
  std::vector<RuleKind> kinds;          // per premise other than `around`; Mcut for itself
  std::vector<bool> nonempty_context;   // per premise: promotion with >= 1 context formula
  bool has_f = false;
  bool any_g_nonempty = false;
  bool all_u = true;
};

// Classifies the premises around one premise of an mcut node in a proof:
// are they all concluded by promotions, and of which kinds.
BangContextShape detect_bang_context(const Proof& p, NodeId mcut_node, std::uint32_t around);

// Mcut view of an mcut proof node.
Mcut mcut_of_node(const Proof& p, NodeId n);

}  // namespace mull

#endif
