#ifndef MULL_REDUCTION_HPP
#define MULL_REDUCTION_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mull/mcut.hpp"
#include "mull/proof.hpp"
#include "mull/signature.hpp"

namespace mull {

enum class StepShape : std::uint8_t {
  MergeCut, Ax,
  CommTensor, CommPar, CommPlus, CommWith, CommBot, CommTop, CommOne, CommMu, CommNu,
  PrincTensorPar, PrincPlusWith, PrincMuNu, PrincOneBot,
  CommBangG, Comm1BangF, Comm2BangF,
  Comm1BangU, Comm2BangU, Comm3BangU, Comm4BangU,
  CommMpx, CommContr,
  PrincContr, PrincMpx,
};

const char* step_shape_name(StepShape s);
constexpr int kStepShapeCount = 26;

// An applicable reduction at one multicut node. `premise` is the premise the
// step focuses on (the rule being commuted or the left principal premise);
// `partner` is the pp-connected premise for the principal steps.
struct Redex {
  NodeId at = 0;
  StepShape shape = StepShape::MergeCut;
  std::uint32_t premise = 0;
  std::uint32_t partner = 0;
  bool operator==(const Redex&) const = default;
};

struct NotApplicable : std::runtime_error {
  explicit NotApplicable(const std::string& what) : std::runtime_error(what) {}
};

// A failed side condition on a rule created by a step. With the instance
// axioms satisfied this cannot happen; seeing it means a kernel bug.
struct InternalInvariantBroken : std::runtime_error {
  explicit InternalInvariantBroken(const std::string& what) : std::runtime_error(what) {}
};

// Every applicable step of every reachable multicut node, deterministically
// ordered. The seven promotion commutations are mutually exclusive per focus.
std::vector<Redex> enumerate_redexes(const Proof& p, const InstanceSpec& inst);

// Applies one step, rewriting the multicut node in place and allocating the
// fresh surrounding nodes; all other nodes are shared untouched. The
// conclusion sequent of the rewritten node is preserved.
Proof apply_step(const Proof& p, const Redex& r, const InstanceSpec& inst);

// In-place variant used by the normalizer.
void apply_step_inplace(Proof& p, const Redex& r, const InstanceSpec& inst);

// Replays a derived-rule plan on a proof: builds the chain of primitive
// mpx/contr nodes realizing `plan` for the why-not formula at `position` of
// `below`'s conclusion, consuming `arity` adjacent copies. Returns the root
// of the chain. Used by the principal steps and testable on its own.
NodeId materialize_plan(Proof& p, const DerivPlan& plan, const Sequent& conclusion,
                        std::uint32_t position, NodeId premise);

struct OmpxResult {
  std::vector<std::uint32_t> stripped;  // premise indices losing their promotion
  std::vector<std::uint32_t> kept;      // premise indices kept intact
  std::vector<std::uint32_t> in_mpx;    // stripped f/u premises (contexts lose banners)
};

// The context rewriting of the principal multiplexing step: walks the
// pp-tree from `root`, stripping promotions until just past the first
// Girard promotion on each path.
OmpxResult compute_ompx(const Proof& p, NodeId mcut_node, std::uint32_t root);

struct TraceStep {
  std::uint64_t index;
  Redex redex;
  std::uint32_t depth;  // cut-free prefix depth after the step
};

struct Trace {
  std::vector<TraceStep> steps;
  std::uint64_t unrollings = 0;  // steps that consumed a shared premise node
  // per family: (key, created-at step, last-reduced step)
  struct FamilyLog {
    std::string key;
    std::uint64_t created;
    std::uint64_t reduced;
  };
  std::vector<FamilyLog> families;
};

enum class NormalizeStatus { CutFree, DepthReached, Budget };

struct NormalizeResult {
  Proof proof;
  Trace trace;
  NormalizeStatus status;
};

// Fair normalizer: cut nodes are folded into binary multicuts up front, then
// the oldest applicable redex family is reduced until no cut remains, the
// cut-free prefix reaches depth_goal, or the step budget runs out.
NormalizeResult fair_normalize(const Proof& p, const InstanceSpec& inst,
                               std::uint64_t max_steps, std::uint32_t depth_goal = UINT32_MAX);

// Depth of the cut-free prefix: distance from the root to the nearest
// cut/mcut node (UINT32_MAX when none remains).
std::uint32_t productive_depth(const Proof& p);

// Rewrites every cut node into the equivalent binary multicut.
Proof fold_cuts(const Proof& p);

}  // namespace mull

#endif
