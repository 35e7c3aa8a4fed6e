#ifndef MULL_VALIDITY_HPP
#define MULL_VALIDITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mull/proof.hpp"

namespace mull {

// A branch counterexample: follow `prefix` from the root, then repeat `cycle`.
struct Lasso {
  std::vector<NodeId> prefix;
  std::vector<NodeId> cycle;  // first node is the loop entry
};

struct ValidityResult {
  bool valid = false;
  std::optional<Lasso> lasso;  // set when invalid
};

// Decides thread validity for a regular pre-proof: every infinite branch must
// carry a thread whose minimal recurring formula is a nu-formula and which is
// principal infinitely often. The valid-thread acceptor is complemented with
// transition profiles (the Ramsey construction): an infinite branch escapes it
// exactly when some idempotent cycle profile has no accepting self-loop, and
// such a profile yields the lasso counterexample directly.
ValidityResult check_validity(const Proof& p);

enum class OracleVerdict { Valid, Invalid, Inconclusive };

struct OracleResult {
  OracleVerdict verdict;
  std::optional<Lasso> lasso;
};

// Independent cross-check: enumerates every lasso with |prefix|+|cycle| up to
// the bound and decides each one by simulating all threads around its cycle.
// Valid is only reported when the bound covers the worst-case counterexample
// size for the proof's automata, or when the proof has no infinite branch.
OracleResult validity_oracle(const Proof& p, std::uint64_t bound);

// Direct decision for one lasso: is some thread around the cycle valid?
bool lasso_has_valid_thread(const Proof& p, const Lasso& l);

// True when the lasso is an actual branch of the proof.
bool lasso_is_branch(const Proof& p, const Lasso& l);

// Textual dump of the thread acceptor (states, transitions, acceptance).
std::string emit_thread_automaton(const Proof& p);

}  // namespace mull

#endif
