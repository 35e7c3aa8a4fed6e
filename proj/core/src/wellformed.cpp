#include "mull/wellformed.hpp"

namespace mull {

const char* rule_error_name(RuleErrorKind k) {
  switch (k) {
    case RuleErrorKind::SchemeMismatch: return "SchemeMismatch";
    case RuleErrorKind::SideConditionFailed: return "SideConditionFailed";
    case RuleErrorKind::BackEdgeMismatch: return "BackEdgeMismatch";
    case RuleErrorKind::NotClosed: return "NotClosed";
  }
  return "?";
}

namespace {

// side condition of one exponential rule against the instance
void check_side(const Proof& p, NodeId id, const InstanceSpec& inst,
                std::vector<RuleError>& errs) {
  FormulaStore& st = store();
  const Node& node = p.at(id);
  const RuleInstance& r = node.rule;
  auto sig_of = [&](FormulaId f) -> const std::string& { return st.sig_name(st.node(f).sig); };
  auto need_sig = [&](const std::string& s) {
    if (!inst.has_sig(s)) {
      errs.push_back({RuleErrorKind::SideConditionFailed, id,
                      "signature '" + s + "' not declared in the instance"});
      return false;
    }
    return true;
  };
  switch (r.kind) {
    case RuleKind::Mpx: {
      const std::string& s = sig_of(node.seq[r.principal]);
      if (need_sig(s) && !inst.sig(s).has(RuleName::mpx(r.index)))
        errs.push_back({RuleErrorKind::SideConditionFailed, id,
                        s + "(mpx_" + std::to_string(r.index) + ") does not hold"});
      break;
    }
    case RuleKind::Contr: {
      const std::string& s = sig_of(node.seq[r.principal]);
      if (r.index < 2) {
        errs.push_back({RuleErrorKind::SchemeMismatch, id, "contraction arity must be >= 2"});
        break;
      }
      if (need_sig(s) && !inst.sig(s).has(RuleName::contr(r.index)))
        errs.push_back({RuleErrorKind::SideConditionFailed, id,
                        s + "(c_" + std::to_string(r.index) + ") does not hold"});
      break;
    }
    case RuleKind::BangG:
    case RuleKind::BangF:
    case RuleKind::BangU: {
      Promo promo = r.kind == RuleKind::BangG ? Promo::G
                  : r.kind == RuleKind::BangF ? Promo::F : Promo::U;
      const std::string& s = sig_of(node.seq[r.principal]);
      if (!need_sig(s)) break;
      for (std::uint32_t q = 0; q < node.seq.size(); ++q) {
        if (q == r.principal) continue;
        const std::string& t = sig_of(node.seq[q]);
        if (!need_sig(t)) continue;
        if (!inst.leq(promo, s, t))
          errs.push_back({RuleErrorKind::SideConditionFailed, id,
                          s + " <=" + promo_name(promo) + " " + t + " does not hold"});
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace

std::vector<RuleError> check_wellformed(const Proof& p, const InstanceSpec& inst) {
  std::vector<RuleError> errs;
  FormulaStore& st = store();
  if (p.nodes.empty()) {
    errs.push_back({RuleErrorKind::SchemeMismatch, 0, "empty proof"});
    return errs;
  }
  for (NodeId id : p.reachable()) {
    const Node& node = p.at(id);
    for (FormulaId f : node.seq.formulas)
      if (!st.closed(f)) {
        errs.push_back({RuleErrorKind::NotClosed, id, st.show(f) + " has free variables"});
      }
    // premise ids must exist
    bool bad_ref = false;
    for (const auto& pr : node.premises)
      if (pr.id >= p.nodes.size()) {
        errs.push_back({RuleErrorKind::SchemeMismatch, id, "dangling premise reference"});
        bad_ref = true;
      }
    if (bad_ref) continue;

    std::vector<Sequent> want;
    try {
      want = expected_premises(p, id);
    } catch (const std::exception& e) {
      errs.push_back({RuleErrorKind::SchemeMismatch, id, e.what()});
      continue;
    }
    if (node.rule.kind == RuleKind::Ax) {
      if (node.seq.size() != 2 || st.negate(node.seq[0]) != node.seq[1]) {
        errs.push_back({RuleErrorKind::SchemeMismatch, id, "axiom conclusion must be a dual pair"});
        continue;
      }
    }
    if (node.rule.kind == RuleKind::One && (node.seq.size() != 1 || st.tag(node.seq[0]) != Tag::One)) {
      errs.push_back({RuleErrorKind::SchemeMismatch, id, "unit conclusion must be exactly |- 1"});
      continue;
    }
    if (node.rule.kind == RuleKind::Top && st.tag(node.seq[node.rule.principal]) != Tag::Top) {
      errs.push_back({RuleErrorKind::SchemeMismatch, id, "top principal must be top"});
      continue;
    }
    if (want.size() != node.premises.size()) {
      errs.push_back({RuleErrorKind::SchemeMismatch, id,
                      "expected " + std::to_string(want.size()) + " premises, have " +
                          std::to_string(node.premises.size())});
      continue;
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
      const auto& ref = node.premises[i];
      const Sequent& actual = p.at(ref.id).seq;
      if (actual != want[i]) {
        RuleErrorKind kind = ref.back ? RuleErrorKind::BackEdgeMismatch : RuleErrorKind::SchemeMismatch;
        errs.push_back({kind, id,
                        "premise " + std::to_string(i) + " is " + actual.show() +
                            ", expected " + want[i].show()});
      }
    }
    if (node.rule.kind == RuleKind::Mcut) {
      Mcut m = mcut_of_node(p, id);
      if (m.iota.size() != node.seq.size()) {
        errs.push_back({RuleErrorKind::SchemeMismatch, id, "mcut iota arity mismatch"});
        continue;
      }
      // conclusion formulas travel unchanged through iota
      for (std::uint32_t t = 0; t < node.seq.size(); ++t) {
        const PremPos& q = m.iota[t];
        if (q.prem >= m.premises.size() || q.pos >= m.premises[q.prem].size() ||
            m.premises[q.prem][q.pos] != node.seq[t]) {
          errs.push_back({RuleErrorKind::SchemeMismatch, id,
                          "conclusion formula " + std::to_string(t) + " has no matching ancestor"});
        }
      }
      if (auto err = validate_mcut(m))
        errs.push_back({RuleErrorKind::SchemeMismatch, id,
                        std::string(mcut_error_name(err->kind)) + ": " + err->message});
    }
    check_side(p, id, inst, errs);
  }
  return errs;
}

}  // namespace mull
