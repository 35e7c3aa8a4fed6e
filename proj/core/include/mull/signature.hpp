#ifndef MULL_SIGNATURE_HPP
#define MULL_SIGNATURE_HPP

#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace mull {

// Names of the ?-introduction rules: multiplexings mpx_i (i >= 0) and
// contractions c_i (i >= 2). mpx_0 is weakening, mpx_1 is dereliction.
enum class RuleNameKind : unsigned char { Mpx, Contr };

struct RuleName {
  RuleNameKind kind;
  unsigned index;

  static RuleName mpx(unsigned i) { return {RuleNameKind::Mpx, i}; }
  static RuleName contr(unsigned i) { return {RuleNameKind::Contr, i}; }
  bool operator==(const RuleName&) const = default;
  std::string show() const {
    return (kind == RuleNameKind::Mpx ? "mpx_" : "c_") + std::to_string(index);
  }
};

// A signature is the finite set of rule names it enables.
struct Signature {
  std::set<unsigned> mpx;
  std::set<unsigned> contr;  // indices >= 2

  bool has(RuleName r) const {
    return r.kind == RuleNameKind::Mpx ? mpx.count(r.index) != 0 : contr.count(r.index) != 0;
  }
  bool operator==(const Signature&) const = default;
};

// Whether the queried rule is in the derivability closure. Queries on c_0
// resolve to mpx_0 and c_1 is always derivable (the empty derivation).
bool closure_contains(const Signature& sig, RuleName rule);

// How a derived rule decomposes into enabled primitive rules. Read
// premises-first: a Merge for c_{i+j-1} first collapses i copies with the
// left plan, then j with the right plan.
struct DerivPlan {
  enum class Kind {
    Empty,     // c_1
    Prim,      // a rule the signature enables directly
    MergeC,    // c_{i+j-1} from c_i and c_j
    SumM,      // mpx_{i+j} from mpx_i, mpx_j and a final c_2
    MpxViaC,   // mpx_i as i derelictions followed by c_i
  };
  Kind kind;
  RuleName target;
  std::shared_ptr<DerivPlan> left, right;  // sub-plans where applicable

  // number of primitive rule instances the plan expands to
  unsigned rule_count() const;
};

struct NotDerivable : std::runtime_error {
  explicit NotDerivable(const std::string& what) : std::runtime_error(what) {}
};

// Requires closure_contains(sig, rule); throws NotDerivable otherwise.
DerivPlan synthesize_derived(const Signature& sig, RuleName rule);

}  // namespace mull

#endif
