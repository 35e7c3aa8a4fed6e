#ifndef MULL_CLOSURE_HPP
#define MULL_CLOSURE_HPP

#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mull/formula.hpp"

namespace mull {

struct ClosureOverflow : std::runtime_error {
  explicit ClosureOverflow(std::size_t n)
      : std::runtime_error("formula closure exceeded cap (" + std::to_string(n) + " formulas)") {}
};

// Closure of a root set under immediate subformulas and fixed-point
// unfolding, with an injective priority consistent with the subterm order
// (a proper subterm always gets a smaller priority). Ties between
// incomparable formulas are broken by the total syntactic order.
class ClosureTable {
public:
  static std::size_t default_cap();  // 10^6 unless MULL_MAX_CLOSURE is set

  static ClosureTable build(const std::vector<FormulaId>& roots,
                            std::size_t cap = default_cap());

  const std::vector<FormulaId>& formulas() const { return formulas_; }
  bool contains(FormulaId f) const { return priority_.count(f) != 0; }
  std::size_t priority(FormulaId f) const { return priority_.at(f); }
  FormulaId formula_at(std::size_t prio) const { return formulas_.at(prio); }
  std::size_t size() const { return formulas_.size(); }

private:
  std::vector<FormulaId> formulas_;               // index == priority
  std::unordered_map<FormulaId, std::size_t> priority_;
};

}  // namespace mull

#endif
