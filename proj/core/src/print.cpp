#include "mull/print.hpp"

#include <map>
#include <sstream>

namespace mull {

std::string print_formula(FormulaId f) { return store().show(f); }

std::string print_instance(const InstanceSpec& inst) {
  std::ostringstream out;
  auto set = [](const std::set<unsigned>& xs) {
    std::string s = "{";
    for (unsigned x : xs) s += std::to_string(x) + ",";
    if (!xs.empty()) s.pop_back();
    return s + "}";
  };
  for (const auto& [name, sig] : inst.sigs)
    out << "sig " << name << " mpx=" << set(sig.mpx) << " contr=" << set(sig.contr) << "\n";
  for (const auto& [a, b] : inst.leq_g) out << "leq g " << a << " " << b << "\n";
  for (const auto& [a, b] : inst.leq_f) out << "leq f " << a << " " << b << "\n";
  for (const auto& [a, b] : inst.leq_u) out << "leq u " << a << " " << b << "\n";
  return out.str();
}

std::string print_proof(const Proof& p) {
  std::ostringstream out;
  auto order = p.reachable();
  std::map<NodeId, std::string> names;
  for (std::size_t i = 0; i < order.size(); ++i)
    names[order[i]] = "n" + std::to_string(i);
  out << "(root " << names.at(p.root) << ")\n";
  for (NodeId id : order) {
    const Node& node = p.at(id);
    out << "(node " << names.at(id) << " (seq";
    for (FormulaId f : node.seq.formulas) out << " \"" << store().show(f) << "\"";
    out << ")\n  (rule " << rule_kind_name(node.rule.kind);
    switch (node.rule.kind) {
      case RuleKind::Ax:
      case RuleKind::Cut:
      case RuleKind::One:
      case RuleKind::Mcut:
        break;
      default:
        out << " :principal " << node.rule.principal;
    }
    if (node.rule.kind == RuleKind::Mpx || node.rule.kind == RuleKind::Contr)
      out << " :i " << node.rule.index;
    if (!node.rule.split.empty()) {
      out << " :split (";
      for (std::size_t i = 0; i < node.rule.split.size(); ++i)
        out << (i ? " " : "") << int(node.rule.split[i]);
      out << ")";
    }
    if (node.rule.kind == RuleKind::Mcut && node.rule.mcut) {
      out << " :iota (";
      for (std::size_t i = 0; i < node.rule.mcut->iota.size(); ++i) {
        const auto& q = node.rule.mcut->iota[i];
        out << (i ? " " : "") << "(" << q.prem << " " << q.pos << ")";
      }
      out << ") :pp (";
      for (std::size_t i = 0; i < node.rule.mcut->pp.size(); ++i) {
        const auto& [a, b] = node.rule.mcut->pp[i];
        out << (i ? " " : "") << "((" << a.prem << " " << a.pos << ") (" << b.prem << " " << b.pos << "))";
      }
      out << ")";
    }
    if (!node.premises.empty()) {
      out << " :premises (";
      for (std::size_t i = 0; i < node.premises.size(); ++i) {
        const auto& pr = node.premises[i];
        out << (i ? " " : "") << (pr.back ? "back:" : "") << names.at(pr.id);
      }
      out << ")";
    }
    out << "))\n";
  }
  return out.str();
}

}  // namespace mull
