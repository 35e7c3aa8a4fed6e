#ifndef MULL_INSTANCE_HPP
#define MULL_INSTANCE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mull/signature.hpp"

namespace mull {

enum class Promo : unsigned char { G, F, U };

inline const char* promo_name(Promo p) {
  switch (p) { case Promo::G: return "g"; case Promo::F: return "f"; default: return "u"; }
}

// One super-exponential system: signatures by name plus the three promotion
// relations, kept exactly as declared (no implicit reflexivity/transitivity).
struct InstanceSpec {
  std::map<std::string, Signature> sigs;
  std::set<std::pair<std::string, std::string>> leq_g, leq_f, leq_u;

  bool has_sig(const std::string& s) const { return sigs.count(s) != 0; }
  const Signature& sig(const std::string& s) const { return sigs.at(s); }
  bool leq(Promo p, const std::string& a, const std::string& b) const {
    const auto& rel = p == Promo::G ? leq_g : p == Promo::F ? leq_f : leq_u;
    return rel.count({a, b}) != 0;
  }
  std::vector<std::string> sig_names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : sigs) out.push_back(k);
    return out;
  }
};

struct AxiomViolation {
  std::string axiom;                  // Ax^g_m, Ax^fu_m, Ax_c, Ax_trans, Ax<=^gs, Ax<=^fu, Ax<=^fg, Ax<=^us, expansion
  std::vector<std::string> witness;   // the signatures involved, in axiom order
  std::optional<unsigned> index;      // the i for the indexed axioms
  std::string detail;
};

struct AxiomReport {
  bool satisfied = true;
  std::vector<AxiomViolation> violations;
};

// Decides the eight cut-elimination axioms by finite enumeration (indices
// range over the premise signature's declared sets). With_expansion adds the
// per-signature expansion axiom check.
AxiomReport check_axioms(const InstanceSpec& inst, bool with_expansion = false);

struct UnknownInstance : std::runtime_error {
  explicit UnknownInstance(const std::string& name)
      : std::runtime_error("unknown builtin instance: " + name) {}
};

// "ell", "mu-ell", "mu-ll-box:<k>" (k >= 1 actions), "ll".
InstanceSpec builtin_instance(const std::string& name);

}  // namespace mull

#endif
