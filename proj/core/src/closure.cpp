#include "mull/closure.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

namespace mull {

std::size_t ClosureTable::default_cap() {
  if (const char* env = std::getenv("MULL_MAX_CLOSURE")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

ClosureTable ClosureTable::build(const std::vector<FormulaId>& roots, std::size_t cap) {
  FormulaStore& st = store();
  std::unordered_set<FormulaId> seen;
  std::vector<FormulaId> work(roots.begin(), roots.end());
  std::vector<FormulaId> all;

  while (!work.empty()) {
    FormulaId f = work.back();
    work.pop_back();
    if (!seen.insert(f).second) continue;
    all.push_back(f);
    if (all.size() > cap) throw ClosureOverflow(cap);
    const FormulaNode& n = st.node(f);
    switch (n.tag) {
      case Tag::Mu:
      case Tag::Nu:
        work.push_back(st.unfold(f));
        break;
      case Tag::Par: case Tag::Tensor: case Tag::Plus: case Tag::With:
        work.push_back(n.a);
        work.push_back(n.b);
        break;
      case Tag::Whynot: case Tag::Bang:
        work.push_back(n.a);
        break;
      default:
        break;
    }
  }

  // Size-major order: a proper subterm is strictly smaller, so subterms sort
  // first. Fixed points sort below their unfoldings for the same reason.
  std::sort(all.begin(), all.end(), [&](FormulaId x, FormulaId y) {
    if (st.size(x) != st.size(y)) return st.size(x) < st.size(y);
    return st.compare(x, y) < 0;
  });

  ClosureTable t;
  t.formulas_ = std::move(all);
  for (std::size_t i = 0; i < t.formulas_.size(); ++i) t.priority_[t.formulas_[i]] = i;
  return t;
}

}  // namespace mull
