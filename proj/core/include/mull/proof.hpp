#ifndef MULL_PROOF_HPP
#define MULL_PROOF_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mull/formula.hpp"
#include "mull/instance.hpp"

namespace mull {

using NodeId = std::uint32_t;

struct Sequent {
  std::vector<FormulaId> formulas;

  bool operator==(const Sequent&) const = default;
  std::size_t size() const { return formulas.size(); }
  FormulaId operator[](std::size_t i) const { return formulas.at(i); }
  std::string show() const;
};

enum class RuleKind : std::uint8_t {
  Ax, Cut, Tensor, Par, Plus1, Plus2, With, One, Bot, Top, Mu, Nu,
  Mpx, Contr, BangG, BangF, BangU, Mcut,
};

const char* rule_kind_name(RuleKind k);
std::optional<RuleKind> rule_kind_from_name(const std::string& s);

// A premise slot position inside an mcut: (premise index, formula position).
struct PremPos {
  std::uint32_t prem = 0;
  std::uint32_t pos = 0;
  bool operator==(const PremPos&) const = default;
  auto operator<=>(const PremPos&) const = default;
};

struct McutData {
  // iota[t] = the premise occurrence the t-th conclusion formula comes from
  std::vector<PremPos> iota;
  // unordered dual pairings on the positions not covered by iota
  std::vector<std::pair<PremPos, PremPos>> pp;
};

// The last inference of a node. Exchange is positional: `principal` names the
// conclusion position the rule acts on, contexts keep their order, and
// tensor/cut record which premise each context formula goes to.
struct RuleInstance {
  RuleKind kind = RuleKind::Ax;
  std::uint32_t principal = 0;
  unsigned index = 0;                  // mpx/contr arity
  std::vector<std::uint8_t> split;     // tensor/cut: per non-principal conclusion position
  std::shared_ptr<McutData> mcut;
};

struct PremiseRef {
  NodeId id = 0;
  bool back = false;   // surface annotation from the proof file format
};

struct Node {
  Sequent seq;
  RuleInstance rule;
  std::vector<PremiseRef> premises;
};

struct Proof {
  std::vector<Node> nodes;
  NodeId root = 0;

  Node& at(NodeId n) { return nodes.at(n); }
  const Node& at(NodeId n) const { return nodes.at(n); }
  NodeId add(Node n) {
    nodes.push_back(std::move(n));
    return static_cast<NodeId>(nodes.size() - 1);
  }
  std::vector<NodeId> reachable() const;          // preorder from root
  std::vector<std::uint32_t> in_degrees() const;  // over reachable nodes
  void compact();                                 // drop unreachable nodes, renumber
  bool has_rule(RuleKind k) const;                // among reachable nodes
};

// For each conclusion position of `n`, the positions it ancestors to in the
// chosen premise. Leaves yield an empty outer vector.
std::vector<std::vector<std::uint32_t>> ancestry(const Proof& p, NodeId n, std::uint32_t premise_idx);

// Expected premise sequents induced by a node's conclusion and rule. Cut
// reads its cut formula off the actual first premise; mcut premises are
// unconstrained here (the iota/pp conditions are checked separately). Throws
// std::logic_error on malformed rule data; callers run scheme checks first.
std::vector<Sequent> expected_premises(const Proof& p, NodeId n);

// Graph equality modulo node renumbering (paired traversal from the roots).
bool proof_equal(const Proof& a, const Proof& b);

// Structural helpers used across the kernel.
bool is_promotion(RuleKind k);
inline bool is_cutlike(RuleKind k) { return k == RuleKind::Cut || k == RuleKind::Mcut; }

// eta-expansion: a proof of |- F^perp, F. Finite for fixed-point-free F,
// circular otherwise. Exponentials use whichever promotion the instance's
// expansion axiom provides; throws NotDerivable if none applies.
Proof expand_identity(FormulaId f, const InstanceSpec& inst);

}  // namespace mull

#endif
