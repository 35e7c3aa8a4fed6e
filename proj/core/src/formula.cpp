#include "mull/formula.hpp"

namespace mull {

FormulaStore& store() {
  static FormulaStore s;
  return s;
}

static std::uint64_t node_key(const FormulaNode& n) {
  std::uint64_t h = static_cast<std::uint64_t>(n.tag);
  h = h * 1000003u + n.a;
  h = h * 1000003u + n.b;
  h = h * 1000003u + n.sig;
  return h;
}

static bool node_eq(const FormulaNode& x, const FormulaNode& y) {
  return x.tag == y.tag && x.a == y.a && x.b == y.b && x.sig == y.sig;
}

FormulaId FormulaStore::intern(FormulaNode n) {
  auto& bucket = index_[node_key(n)];
  for (FormulaId id : bucket)
    if (node_eq(nodes_[id], n)) return id;
  FormulaId id = static_cast<FormulaId>(nodes_.size());
  nodes_.push_back(n);
  bucket.push_back(id);
  return id;
}

static std::int32_t shift_free(std::int32_t mf, int delta) {
  return mf < 0 ? -1 : mf + delta;
}

FormulaId FormulaStore::atom(const std::string& name) {
  auto it = atom_ids_.find(name);
  AtomId a;
  if (it != atom_ids_.end()) {
    a = it->second;
  } else {
    a = static_cast<AtomId>(atom_names_.size());
    atom_names_.push_back(name);
    atom_ids_.emplace(name, a);
  }
  return intern({Tag::Atom, a, 0, 0, 1, -1});
}

FormulaId FormulaStore::natom(const std::string& name) {
  FormulaId pos = atom(name);
  return intern({Tag::NegAtom, nodes_[pos].a, 0, 0, 1, -1});
}

FormulaId FormulaStore::var(std::uint32_t index) {
  return intern({Tag::Var, index, 0, 0, 1, static_cast<std::int32_t>(index)});
}

FormulaId FormulaStore::mu(FormulaId body) {
  const auto& b = nodes_.at(body);
  return intern({Tag::Mu, body, 0, 0, b.size + 1, shift_free(b.max_free, -1) < 0 ? -1 : b.max_free - 1});
}

FormulaId FormulaStore::nu(FormulaId body) {
  const auto& b = nodes_.at(body);
  return intern({Tag::Nu, body, 0, 0, b.size + 1, shift_free(b.max_free, -1) < 0 ? -1 : b.max_free - 1});
}

static std::int32_t max_free2(const FormulaNode& l, const FormulaNode& r) {
  return l.max_free > r.max_free ? l.max_free : r.max_free;
}

FormulaId FormulaStore::par(FormulaId l, FormulaId r) {
  return intern({Tag::Par, l, r, 0, nodes_.at(l).size + nodes_.at(r).size + 1,
                 max_free2(nodes_.at(l), nodes_.at(r))});
}
FormulaId FormulaStore::tensor(FormulaId l, FormulaId r) {
  return intern({Tag::Tensor, l, r, 0, nodes_.at(l).size + nodes_.at(r).size + 1,
                 max_free2(nodes_.at(l), nodes_.at(r))});
}
FormulaId FormulaStore::plus(FormulaId l, FormulaId r) {
  return intern({Tag::Plus, l, r, 0, nodes_.at(l).size + nodes_.at(r).size + 1,
                 max_free2(nodes_.at(l), nodes_.at(r))});
}
FormulaId FormulaStore::with(FormulaId l, FormulaId r) {
  return intern({Tag::With, l, r, 0, nodes_.at(l).size + nodes_.at(r).size + 1,
                 max_free2(nodes_.at(l), nodes_.at(r))});
}

FormulaId FormulaStore::bot()  { return intern({Tag::Bot, 0, 0, 0, 1, -1}); }
FormulaId FormulaStore::one()  { return intern({Tag::One, 0, 0, 0, 1, -1}); }
FormulaId FormulaStore::zero() { return intern({Tag::Zero, 0, 0, 0, 1, -1}); }
FormulaId FormulaStore::top()  { return intern({Tag::Top, 0, 0, 0, 1, -1}); }

FormulaId FormulaStore::whynot(SigId s, FormulaId body) {
  return intern({Tag::Whynot, body, 0, s, nodes_.at(body).size + 1, nodes_.at(body).max_free});
}
FormulaId FormulaStore::bang(SigId s, FormulaId body) {
  return intern({Tag::Bang, body, 0, s, nodes_.at(body).size + 1, nodes_.at(body).max_free});
}

SigId FormulaStore::sig_id(const std::string& name) {
  auto it = sig_ids_.find(name);
  if (it != sig_ids_.end()) return it->second;
  SigId s = static_cast<SigId>(sig_names_.size());
  sig_names_.push_back(name);
  sig_ids_.emplace(name, s);
  return s;
}

FormulaId FormulaStore::negate(FormulaId f) {
  auto it = negate_cache_.find(f);
  if (it != negate_cache_.end()) return it->second;
  const FormulaNode n = nodes_.at(f);
  FormulaId r;
  switch (n.tag) {
    case Tag::Atom:    r = intern({Tag::NegAtom, n.a, 0, 0, 1, -1}); break;
    case Tag::NegAtom: r = intern({Tag::Atom, n.a, 0, 0, 1, -1}); break;
    case Tag::Var:     r = f; break;
    case Tag::Mu:      r = nu(negate(n.a)); break;
    case Tag::Nu:      r = mu(negate(n.a)); break;
    case Tag::Par:     r = tensor(negate(n.a), negate(n.b)); break;
    case Tag::Tensor:  r = par(negate(n.a), negate(n.b)); break;
    case Tag::Plus:    r = with(negate(n.a), negate(n.b)); break;
    case Tag::With:    r = plus(negate(n.a), negate(n.b)); break;
    case Tag::Bot:     r = one(); break;
    case Tag::One:     r = bot(); break;
    case Tag::Zero:    r = top(); break;
    case Tag::Top:     r = zero(); break;
    case Tag::Whynot:  r = bang(n.sig, negate(n.a)); break;
    case Tag::Bang:    r = whynot(n.sig, negate(n.a)); break;
    default: throw std::logic_error("negate: bad tag");
  }
  negate_cache_.emplace(f, r);
  negate_cache_.emplace(r, f);
  return r;
}

FormulaId FormulaStore::substitute(FormulaId body, FormulaId value, std::uint32_t depth) {
  const FormulaNode n = nodes_.at(body);
  if (n.max_free < static_cast<std::int32_t>(depth)) return body;  // nothing to do below depth
  switch (n.tag) {
    case Tag::Var:
      if (n.a == depth) return value;  // value is closed, no shifting needed
      if (n.a > depth) return var(n.a - 1);
      return body;
    case Tag::Mu: return mu(substitute(n.a, value, depth + 1));
    case Tag::Nu: return nu(substitute(n.a, value, depth + 1));
    case Tag::Par: return par(substitute(n.a, value, depth), substitute(n.b, value, depth));
    case Tag::Tensor: return tensor(substitute(n.a, value, depth), substitute(n.b, value, depth));
    case Tag::Plus: return plus(substitute(n.a, value, depth), substitute(n.b, value, depth));
    case Tag::With: return with(substitute(n.a, value, depth), substitute(n.b, value, depth));
    case Tag::Whynot: return whynot(n.sig, substitute(n.a, value, depth));
    case Tag::Bang: return bang(n.sig, substitute(n.a, value, depth));
    default: return body;
  }
}

FormulaId FormulaStore::unfold(FormulaId f) {
  const FormulaNode& n = nodes_.at(f);
  if (n.tag != Tag::Mu && n.tag != Tag::Nu)
    throw NotAFixedPoint("unfold: " + show(f));
  return substitute(n.a, f, 0);
}

int FormulaStore::compare(FormulaId f, FormulaId g) const {
  if (f == g) return 0;
  const FormulaNode& x = nodes_.at(f);
  const FormulaNode& y = nodes_.at(g);
  if (x.tag != y.tag) return x.tag < y.tag ? -1 : 1;
  switch (x.tag) {
    case Tag::Atom:
    case Tag::NegAtom: {
      int c = atom_names_[x.a].compare(atom_names_[y.a]);
      return c < 0 ? -1 : 1;
    }
    case Tag::Var:
      return x.a < y.a ? -1 : 1;
    case Tag::Bot: case Tag::One: case Tag::Zero: case Tag::Top:
      return 0;
    case Tag::Mu: case Tag::Nu:
      return compare(x.a, y.a);
    case Tag::Whynot: case Tag::Bang: {
      if (x.sig != y.sig) {
        int c = sig_names_[x.sig].compare(sig_names_[y.sig]);
        if (c != 0) return c < 0 ? -1 : 1;
      }
      return compare(x.a, y.a);
    }
    default: {
      int c = compare(x.a, y.a);
      if (c != 0) return c;
      return compare(x.b, y.b);
    }
  }
}

std::string FormulaStore::show_rec(FormulaId f, std::vector<std::string>& binders, bool parens) const {
  const FormulaNode& n = nodes_.at(f);
  auto bin = [&](const char* op) {
    std::string s = show_rec(n.a, binders, true) + " " + op + " " + show_rec(n.b, binders, true);
    return parens ? "(" + s + ")" : s;
  };
  switch (n.tag) {
    case Tag::Atom: return atom_names_[n.a];
    case Tag::NegAtom: return "~" + atom_names_[n.a];
    case Tag::Var: {
      if (n.a < binders.size()) return binders[binders.size() - 1 - n.a];
      return "#" + std::to_string(n.a - binders.size());  // free index, not printable syntax
    }
    case Tag::Mu:
    case Tag::Nu: {
      // pick a fresh display name X, X1, X2, ...
      std::string name = "X";
      int k = 0;
      auto used = [&](const std::string& s) {
        for (const auto& b : binders) if (b == s) return true;
        return false;
      };
      while (used(name)) name = "X" + std::to_string(++k);
      binders.push_back(name);
      std::string body = show_rec(n.a, binders, false);
      binders.pop_back();
      std::string s = std::string(n.tag == Tag::Mu ? "mu " : "nu ") + name + ". " + body;
      return parens ? "(" + s + ")" : s;
    }
    case Tag::Par: return bin("|");
    case Tag::Tensor: return bin("*");
    case Tag::Plus: return bin("+");
    case Tag::With: return bin("&");
    case Tag::Bot: return "bot";
    case Tag::One: return "1";
    case Tag::Zero: return "0";
    case Tag::Top: return "top";
    case Tag::Whynot: return "?[" + sig_names_[n.sig] + "] " + show_rec(n.a, binders, true);
    case Tag::Bang: return "![" + sig_names_[n.sig] + "] " + show_rec(n.a, binders, true);
  }
  return "?";
}

std::string FormulaStore::show(FormulaId f) const {
  std::vector<std::string> binders;
  return show_rec(f, binders, false);
}

}  // namespace mull
