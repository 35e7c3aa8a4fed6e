#include "mull/signature.hpp"

#include <map>
#include <vector>

namespace mull {

namespace {

// Saturation over indices <= bound. Every closure rule yields an index at
// least as large as each of its premises, so this is complete for queries
// up to the bound.
struct Saturation {
  unsigned bound;
  std::vector<char> mpx, con;  // con[i] meaningful for i >= 2
  // provenance for derived entries: 0 = base, otherwise the rule used
  enum class Via : unsigned char { Base, MergeC, SumM, MpxViaC };
  struct Prov { Via via; unsigned i, j; };
  std::map<std::pair<bool, unsigned>, Prov> prov;  // (is_mpx, idx) -> how

  explicit Saturation(const Signature& sig, unsigned b) : bound(b) {
    mpx.assign(bound + 1, 0);
    con.assign(bound + 1, 0);
    for (unsigned i : sig.mpx)
      if (i <= bound && !mpx[i]) { mpx[i] = 1; prov[{true, i}] = {Via::Base, 0, 0}; }
    for (unsigned i : sig.contr)
      if (i <= bound && !con[i]) { con[i] = 1; prov[{false, i}] = {Via::Base, 0, 0}; }
    bool c2 = sig.contr.count(2) != 0;
    bool m1 = sig.mpx.count(1) != 0;
    bool changed = true;
    while (changed) {
      changed = false;
      // c_i + c_j => c_{i+j-1}
      for (unsigned i = 2; i <= bound; ++i) {
        if (!con[i]) continue;
        for (unsigned j = 2; i + j - 1 <= bound; ++j) {
          if (!con[j] || con[i + j - 1]) continue;
          con[i + j - 1] = 1;
          prov[{false, i + j - 1}] = {Via::MergeC, i, j};
          changed = true;
        }
      }
      // c_2 in sig, mpx_i + mpx_j (i,j != 0) => mpx_{i+j}
      if (c2) {
        for (unsigned i = 1; i <= bound; ++i) {
          if (!mpx[i]) continue;
          for (unsigned j = 1; i + j <= bound; ++j) {
            if (!mpx[j] || mpx[i + j]) continue;
            mpx[i + j] = 1;
            prov[{true, i + j}] = {Via::SumM, i, j};
            changed = true;
          }
        }
      }
      // mpx_1 in sig, closure c_i => mpx_i
      if (m1) {
        for (unsigned i = 2; i <= bound; ++i) {
          if (con[i] && !mpx[i]) {
            mpx[i] = 1;
            prov[{true, i}] = {Via::MpxViaC, i, 0};
            changed = true;
          }
        }
      }
    }
  }

  bool holds(RuleName r) const {
    if (r.kind == RuleNameKind::Contr) {
      if (r.index == 0) return mpx[0];
      if (r.index == 1) return true;
      return con[r.index] != 0;
    }
    return mpx[r.index] != 0;
  }
};

std::shared_ptr<DerivPlan> plan_for(const Saturation& sat, const Signature& sig, RuleName r);

std::shared_ptr<DerivPlan> plan_contr(const Saturation& sat, const Signature& sig, unsigned i) {
  auto p = std::make_shared<DerivPlan>();
  if (i == 1) { p->kind = DerivPlan::Kind::Empty; p->target = RuleName::contr(1); return p; }
  if (i == 0) return plan_for(sat, sig, RuleName::mpx(0));
  p->target = RuleName::contr(i);
  auto pr = sat.prov.at({false, i});
  switch (pr.via) {
    case Saturation::Via::Base:
      p->kind = DerivPlan::Kind::Prim;
      break;
    case Saturation::Via::MergeC:
      p->kind = DerivPlan::Kind::MergeC;
      p->left = plan_contr(sat, sig, pr.i);
      p->right = plan_contr(sat, sig, pr.j);
      break;
    default:
      throw NotDerivable("inconsistent provenance for " + RuleName::contr(i).show());
  }
  return p;
}

std::shared_ptr<DerivPlan> plan_mpx(const Saturation& sat, const Signature& sig, unsigned i) {
  auto p = std::make_shared<DerivPlan>();
  p->target = RuleName::mpx(i);
  auto pr = sat.prov.at({true, i});
  switch (pr.via) {
    case Saturation::Via::Base:
      p->kind = DerivPlan::Kind::Prim;
      break;
    case Saturation::Via::SumM:
      p->kind = DerivPlan::Kind::SumM;
      p->left = plan_mpx(sat, sig, pr.i);
      p->right = plan_mpx(sat, sig, pr.j);
      break;
    case Saturation::Via::MpxViaC:
      p->kind = DerivPlan::Kind::MpxViaC;
      p->left = plan_contr(sat, sig, pr.i);
      break;
    default:
      throw NotDerivable("inconsistent provenance for " + RuleName::mpx(i).show());
  }
  return p;
}

std::shared_ptr<DerivPlan> plan_for(const Saturation& sat, const Signature& sig, RuleName r) {
  if (r.kind == RuleNameKind::Contr) return plan_contr(sat, sig, r.index);
  return plan_mpx(sat, sig, r.index);
}

}  // namespace

bool closure_contains(const Signature& sig, RuleName rule) {
  if (rule.kind == RuleNameKind::Contr && rule.index == 1) return true;
  RuleName q = rule;
  if (q.kind == RuleNameKind::Contr && q.index == 0) q = RuleName::mpx(0);
  Saturation sat(sig, q.index);
  return sat.holds(q);
}

unsigned DerivPlan::rule_count() const {
  switch (kind) {
    case Kind::Empty: return 0;
    case Kind::Prim: return 1;
    case Kind::MergeC: return left->rule_count() + right->rule_count();
    case Kind::SumM: return left->rule_count() + right->rule_count() + 1;
    case Kind::MpxViaC: return target.index + left->rule_count();
  }
  return 0;
}

DerivPlan synthesize_derived(const Signature& sig, RuleName rule) {
  if (!closure_contains(sig, rule))
    throw NotDerivable(rule.show() + " is not in the derivability closure");
  RuleName q = rule;
  if (q.kind == RuleNameKind::Contr && q.index == 0) q = RuleName::mpx(0);
  if (q.kind == RuleNameKind::Contr && q.index == 1) {
    DerivPlan p;
    p.kind = DerivPlan::Kind::Empty;
    p.target = q;
    return p;
  }
  Saturation sat(sig, q.index);
  auto p = plan_for(sat, sig, q);
  // keep the caller-facing target name (c_0 queries report as given)
  DerivPlan out = *p;
  return out;
}

}  // namespace mull
