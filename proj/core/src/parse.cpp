#include "mull/parse.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

namespace mull {

std::optional<std::string> sugar_sig(const InstanceSpec& inst) {
  if (inst.sigs.size() == 1) return inst.sigs.begin()->first;
  return std::nullopt;
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  int line = 1, col = 1;

  bool eof() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  char get() {
    char c = s[i++];
    if (c == '\n') { ++line; col = 1; } else ++col;
    return c;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, col, what); }
  void skip_ws(bool comments = true) {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { get(); continue; }
      if (comments && (c == '#' || c == ';')) {
        while (!eof() && peek() != '\n') get();
        continue;
      }
      break;
    }
  }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string read_ident(Cursor& cur) {
  if (cur.eof() || !ident_start(cur.peek())) cur.fail("expected identifier");
  std::string out;
  while (!cur.eof() && ident_char(cur.peek())) out += cur.get();
  return out;
}

// ---------------- formulas ----------------

struct FormulaParser {
  Cursor cur;
  std::optional<std::string> default_sig;
  std::vector<std::string> binders;

  FormulaId parse() {
    FormulaId f = formula();
    cur.skip_ws();
    if (!cur.eof()) cur.fail("trailing input after formula");
    return f;
  }

  FormulaId formula() {
    cur.skip_ws();
    if (!cur.eof() && ident_start(cur.peek())) {
      std::size_t save_i = cur.i;
      int save_l = cur.line, save_c = cur.col;
      std::string id = read_ident(cur);
      if (id == "mu" || id == "nu") {
        cur.skip_ws();
        std::string x = read_ident(cur);
        cur.skip_ws();
        if (cur.eof() || cur.get() != '.') cur.fail("expected '.' after binder");
        binders.push_back(x);
        FormulaId body = formula();
        binders.pop_back();
        return id == "mu" ? store().mu(body) : store().nu(body);
      }
      cur.i = save_i; cur.line = save_l; cur.col = save_c;
    }
    FormulaId acc = unary();
    while (true) {
      cur.skip_ws();
      if (cur.eof()) break;
      char c = cur.peek();
      if (c != '*' && c != '|' && c != '+' && c != '&') break;
      cur.get();
      FormulaId rhs = unary();
      switch (c) {
        case '*': acc = store().tensor(acc, rhs); break;
        case '|': acc = store().par(acc, rhs); break;
        case '+': acc = store().plus(acc, rhs); break;
        case '&': acc = store().with(acc, rhs); break;
      }
    }
    return acc;
  }

  SigId exp_sig() {
    cur.skip_ws();
    if (!cur.eof() && cur.peek() == '[') {
      cur.get();
      cur.skip_ws();
      std::string name = read_ident(cur);
      cur.skip_ws();
      if (cur.eof() || cur.get() != ']') cur.fail("expected ']'");
      return store().sig_id(name);
    }
    if (!default_sig) cur.fail("?/! needs [sig] (no single-signature default)");
    return store().sig_id(*default_sig);
  }

  FormulaId unary() {
    cur.skip_ws();
    if (cur.eof()) cur.fail("expected formula");
    char c = cur.peek();
    if (c == '~') {
      cur.get();
      cur.skip_ws();
      return store().natom(read_ident(cur));
    }
    if (c == '?') { cur.get(); SigId s = exp_sig(); return store().whynot(s, unary()); }
    if (c == '!') { cur.get(); SigId s = exp_sig(); return store().bang(s, unary()); }
    if (c == '(') {
      cur.get();
      FormulaId f = formula();
      cur.skip_ws();
      if (cur.eof() || cur.get() != ')') cur.fail("expected ')'");
      return f;
    }
    if (c == '1') { cur.get(); return store().one(); }
    if (c == '0') { cur.get(); return store().zero(); }
    if (ident_start(c)) {
      std::string id = read_ident(cur);
      if (id == "bot") return store().bot();
      if (id == "top") return store().top();
      if (id == "mu" || id == "nu") {
        cur.skip_ws();
        std::string x = read_ident(cur);
        cur.skip_ws();
        if (cur.eof() || cur.get() != '.') cur.fail("expected '.' after binder");
        binders.push_back(x);
        FormulaId body = formula();
        binders.pop_back();
        return id == "mu" ? store().mu(body) : store().nu(body);
      }
      for (std::size_t k = 0; k < binders.size(); ++k)
        if (binders[binders.size() - 1 - k] == id)
          return store().var(static_cast<std::uint32_t>(k));
      return store().atom(id);
    }
    cur.fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

FormulaId parse_formula(const std::string& text, const std::optional<std::string>& default_sig) {
  FormulaParser p{Cursor{text}, default_sig, {}};
  return p.parse();
}

// ---------------- instances ----------------

namespace {

std::set<unsigned> parse_index_set(Cursor& cur) {
  cur.skip_ws(false);
  if (cur.eof() || cur.get() != '{') cur.fail("expected '{'");
  std::set<unsigned> out;
  cur.skip_ws(false);
  if (!cur.eof() && cur.peek() == '}') { cur.get(); return out; }
  while (true) {
    cur.skip_ws(false);
    if (cur.eof() || !std::isdigit(static_cast<unsigned char>(cur.peek())))
      cur.fail("expected index");
    unsigned v = 0;
    while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek())))
      v = v * 10 + static_cast<unsigned>(cur.get() - '0');
    out.insert(v);
    cur.skip_ws(false);
    if (cur.eof()) cur.fail("unterminated set");
    char c = cur.get();
    if (c == '}') break;
    if (c != ',') cur.fail("expected ',' or '}'");
  }
  return out;
}

}  // namespace

InstanceSpec parse_instance(const std::string& text) {
  InstanceSpec inst;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "sig") {
      std::string name;
      if (!(ls >> name)) throw ParseError(lineno, 1, "sig needs a name");
      Signature sig;
      std::string item;
      while (ls >> item) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, 1, "expected key={...}");
        std::string key = item.substr(0, eq);
        std::string rest = item.substr(eq + 1);
        Cursor cur{rest};
        auto set = parse_index_set(cur);
        if (key == "mpx") sig.mpx = set;
        else if (key == "contr") {
          for (unsigned v : set)
            if (v < 2) throw ParseError(lineno, 1, "contraction indices must be >= 2");
          sig.contr = set;
        } else throw ParseError(lineno, 1, "unknown signature field '" + key + "'");
      }
      inst.sigs[name] = sig;
    } else if (head == "leq") {
      std::string rel, a, b;
      if (!(ls >> rel >> a >> b)) throw ParseError(lineno, 1, "leq needs: leq g|f|u a b");
      auto* target = rel == "g" ? &inst.leq_g : rel == "f" ? &inst.leq_f
                   : rel == "u" ? &inst.leq_u : nullptr;
      if (!target) throw ParseError(lineno, 1, "leq relation must be g, f or u");
      target->insert({a, b});
    } else {
      throw ParseError(lineno, 1, "unknown directive '" + head + "'");
    }
  }
  for (const auto* rel : {&inst.leq_g, &inst.leq_f, &inst.leq_u})
    for (const auto& [a, b] : *rel)
      if (!inst.has_sig(a) || !inst.has_sig(b))
        throw ParseError(0, 0, "leq mentions undeclared signature " + a + " or " + b);
  return inst;
}

// ---------------- proofs ----------------

namespace {

struct Sexp {
  // one of: list, symbol, string, int
  enum class Kind { List, Symbol, String, Int } kind;
  std::vector<Sexp> items;
  std::string text;
  long value = 0;
  int line = 0, col = 0;

  bool is(const char* sym) const { return kind == Kind::Symbol && text == sym; }
};

Sexp read_sexp(Cursor& cur) {
  cur.skip_ws();
  if (cur.eof()) cur.fail("unexpected end of input");
  Sexp s;
  s.line = cur.line;
  s.col = cur.col;
  char c = cur.peek();
  if (c == '(') {
    cur.get();
    s.kind = Sexp::Kind::List;
    while (true) {
      cur.skip_ws();
      if (cur.eof()) cur.fail("unterminated list");
      if (cur.peek() == ')') { cur.get(); break; }
      s.items.push_back(read_sexp(cur));
    }
    return s;
  }
  if (c == '"') {
    cur.get();
    s.kind = Sexp::Kind::String;
    while (true) {
      if (cur.eof()) cur.fail("unterminated string");
      char d = cur.get();
      if (d == '"') break;
      if (d == '\\') {
        if (cur.eof()) cur.fail("bad escape");
        s.text += cur.get();
      } else s.text += d;
    }
    return s;
  }
  if (std::isdigit(static_cast<unsigned char>(c)) ||
      (c == '-' && cur.i + 1 < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.i + 1])))) {
    s.kind = Sexp::Kind::Int;
    std::string num;
    if (cur.peek() == '-') num += cur.get();
    while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) num += cur.get();
    s.value = std::stol(num);
    s.text = num;
    return s;
  }
  s.kind = Sexp::Kind::Symbol;
  while (!cur.eof()) {
    char d = cur.peek();
    if (d == '(' || d == ')' || d == '"' || std::isspace(static_cast<unsigned char>(d))) break;
    s.text += cur.get();
  }
  if (s.text.empty()) cur.fail("unexpected character");
  return s;
}

[[noreturn]] void sfail(const Sexp& s, const std::string& what) {
  throw ParseError(s.line, s.col, what);
}

long as_int(const Sexp& s) {
  if (s.kind != Sexp::Kind::Int) sfail(s, "expected integer");
  return s.value;
}

PremPos as_prempos(const Sexp& s) {
  if (s.kind != Sexp::Kind::List || s.items.size() != 2) sfail(s, "expected (prem pos)");
  return {static_cast<std::uint32_t>(as_int(s.items[0])),
          static_cast<std::uint32_t>(as_int(s.items[1]))};
}

}  // namespace

Proof parse_proof(const std::string& text, const std::optional<std::string>& default_sig) {
  Cursor cur{text};
  std::vector<Sexp> forms;
  while (true) {
    cur.skip_ws();
    if (cur.eof()) break;
    forms.push_back(read_sexp(cur));
  }
  if (forms.empty()) throw ParseError(1, 1, "empty proof file");

  Proof proof;
  std::map<std::string, NodeId> names;
  std::optional<std::string> root_name;
  // first pass: allocate nodes
  for (const Sexp& f : forms) {
    if (f.kind != Sexp::Kind::List || f.items.empty()) sfail(f, "expected (node ...) form");
    if (f.items[0].is("root")) {
      if (f.items.size() != 2) sfail(f, "(root <id>)");
      root_name = f.items[1].text;
      continue;
    }
    if (!f.items[0].is("node") || f.items.size() < 3) sfail(f, "expected (node <id> (seq ...) (rule ...))");
    const std::string& name = f.items[1].text;
    if (names.count(name)) sfail(f, "duplicate node id " + name);
    names[name] = proof.add({});
  }
  // second pass: fill nodes
  for (const Sexp& f : forms) {
    if (f.items[0].is("root")) continue;
    NodeId id = names.at(f.items[1].text);
    Node& node = proof.nodes[id];
    const Sexp& seq = f.items[2];
    if (seq.kind != Sexp::Kind::List || seq.items.empty() || !seq.items[0].is("seq"))
      sfail(seq, "expected (seq ...)");
    for (std::size_t i = 1; i < seq.items.size(); ++i) {
      const Sexp& fs = seq.items[i];
      if (fs.kind != Sexp::Kind::String) sfail(fs, "formulas are quoted strings");
      try {
        node.seq.formulas.push_back(parse_formula(fs.text, default_sig));
      } catch (const ParseError& e) {
        sfail(fs, std::string("in formula: ") + e.what());
      }
    }
    if (f.items.size() < 4) sfail(f, "missing (rule ...)");
    const Sexp& rule = f.items[3];
    if (rule.kind != Sexp::Kind::List || rule.items.size() < 2 || !rule.items[0].is("rule"))
      sfail(rule, "expected (rule <kind> ...)");
    auto kind = rule_kind_from_name(rule.items[1].text);
    if (!kind) sfail(rule.items[1], "unknown rule kind " + rule.items[1].text);
    node.rule.kind = *kind;
    if (node.rule.kind == RuleKind::Mcut) node.rule.mcut = std::make_shared<McutData>();
    for (std::size_t i = 2; i < rule.items.size(); ++i) {
      const Sexp& key = rule.items[i];
      if (key.kind != Sexp::Kind::Symbol || key.text.empty() || key.text[0] != ':')
        sfail(key, "expected :keyword");
      if (++i >= rule.items.size()) sfail(key, "missing value after " + key.text);
      const Sexp& val = rule.items[i];
      if (key.text == ":principal") {
        node.rule.principal = static_cast<std::uint32_t>(as_int(val));
      } else if (key.text == ":i") {
        node.rule.index = static_cast<unsigned>(as_int(val));
      } else if (key.text == ":split") {
        if (val.kind != Sexp::Kind::List) sfail(val, "expected (0 1 ...)");
        for (const Sexp& b : val.items)
          node.rule.split.push_back(static_cast<std::uint8_t>(as_int(b)));
      } else if (key.text == ":iota") {
        if (val.kind != Sexp::Kind::List) sfail(val, "expected ((prem pos) ...)");
        for (const Sexp& e : val.items) node.rule.mcut->iota.push_back(as_prempos(e));
      } else if (key.text == ":pp") {
        if (val.kind != Sexp::Kind::List) sfail(val, "expected (((p q) (r s)) ...)");
        for (const Sexp& e : val.items) {
          if (e.kind != Sexp::Kind::List || e.items.size() != 2) sfail(e, "expected ((p q) (r s))");
          node.rule.mcut->pp.push_back({as_prempos(e.items[0]), as_prempos(e.items[1])});
        }
      } else if (key.text == ":premises") {
        if (val.kind != Sexp::Kind::List) sfail(val, "expected (<id> ...)");
        for (const Sexp& e : val.items) {
          if (e.kind != Sexp::Kind::Symbol && e.kind != Sexp::Kind::Int)
            sfail(e, "premise must be an id or back:<id>");
          std::string t = e.text;
          bool back = false;
          if (t.rfind("back:", 0) == 0) { back = true; t = t.substr(5); }
          auto it = names.find(t);
          if (it == names.end()) sfail(e, "unknown node id " + t);
          node.premises.push_back({it->second, back});
        }
      } else {
        sfail(key, "unknown keyword " + key.text);
      }
    }
  }
  if (root_name) {
    auto it = names.find(*root_name);
    if (it == names.end()) throw ParseError(1, 1, "unknown root id " + *root_name);
    proof.root = it->second;
  } else {
    proof.root = 0;
  }
  return proof;
}

}  // namespace mull
