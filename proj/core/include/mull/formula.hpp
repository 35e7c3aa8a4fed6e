#ifndef MULL_FORMULA_HPP
#define MULL_FORMULA_HPP

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mull {

// Formulas are hash-consed: a FormulaId is an index into the global store,
// and structural equality is id equality. Binders are nameless (de Bruijn),
// so alpha-equivalent formulas share one id.
using FormulaId = std::uint32_t;
using AtomId = std::uint32_t;
using SigId = std::uint32_t;   // interned signature name, resolved per instance

enum class Tag : std::uint8_t {
  Atom, NegAtom, Var,
  Mu, Nu,
  Par, Tensor, Plus, With,
  Bot, One, Zero, Top,
  Whynot, Bang,
};

struct FormulaNode {
  Tag tag;
  std::uint32_t a = 0;  // Atom/NegAtom: atom id; Var: de Bruijn index; binary/unary: left child
  std::uint32_t b = 0;  // binary: right child
  SigId sig = 0;        // Whynot/Bang only
  std::uint32_t size = 1;
  std::int32_t max_free = -1;  // largest free de Bruijn index, -1 if closed
};

class FormulaStore {
public:
  FormulaId atom(const std::string& name);
  FormulaId natom(const std::string& name);
  FormulaId var(std::uint32_t index);
  FormulaId mu(FormulaId body);
  FormulaId nu(FormulaId body);
  FormulaId par(FormulaId l, FormulaId r);
  FormulaId tensor(FormulaId l, FormulaId r);
  FormulaId plus(FormulaId l, FormulaId r);
  FormulaId with(FormulaId l, FormulaId r);
  FormulaId bot();
  FormulaId one();
  FormulaId zero();
  FormulaId top();
  FormulaId whynot(SigId s, FormulaId body);
  FormulaId bang(SigId s, FormulaId body);

  const FormulaNode& node(FormulaId f) const { return nodes_.at(f); }
  Tag tag(FormulaId f) const { return nodes_.at(f).tag; }
  bool closed(FormulaId f) const { return nodes_.at(f).max_free < 0; }
  std::uint32_t size(FormulaId f) const { return nodes_.at(f).size; }

  SigId sig_id(const std::string& name);
  const std::string& sig_name(SigId s) const { return sig_names_.at(s); }
  bool has_sig(const std::string& name) const { return sig_ids_.count(name) != 0; }
  const std::string& atom_name(AtomId a) const { return atom_names_.at(a); }

  // Dual formula. An involution; variables are self-dual.
  FormulaId negate(FormulaId f);

  // One unfolding of a mu/nu formula: body with the formula itself
  // substituted for the bound variable. Throws NotAFixedPoint otherwise.
  FormulaId unfold(FormulaId f);

  bool is_fixpoint(FormulaId f) const {
    Tag t = tag(f);
    return t == Tag::Mu || t == Tag::Nu;
  }

  // Total syntactic order, independent of interning order.
  int compare(FormulaId f, FormulaId g) const;

  std::string show(FormulaId f) const;

  std::size_t count() const { return nodes_.size(); }

private:
  FormulaId intern(FormulaNode n);
  FormulaId substitute(FormulaId body, FormulaId value, std::uint32_t depth);
  std::string show_rec(FormulaId f, std::vector<std::string>& binders, bool parens) const;

  std::deque<FormulaNode> nodes_;
  std::unordered_map<std::uint64_t, std::vector<FormulaId>> index_;
  std::unordered_map<std::string, AtomId> atom_ids_;
  std::deque<std::string> atom_names_;
  std::unordered_map<std::string, SigId> sig_ids_;
  std::deque<std::string> sig_names_;
  std::unordered_map<FormulaId, FormulaId> negate_cache_;
};

struct NotAFixedPoint : std::runtime_error {
  explicit NotAFixedPoint(const std::string& what) : std::runtime_error(what) {}
};

// The store every component of a run works against.
FormulaStore& store();

}  // namespace mull

#endif
