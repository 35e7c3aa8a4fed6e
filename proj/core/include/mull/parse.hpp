#ifndef MULL_PARSE_HPP
#define MULL_PARSE_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "mull/instance.hpp"
#include "mull/proof.hpp"

namespace mull {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(int l, int c, const std::string& what)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + what),
        line(l), column(c) {}
};

// Formula text syntax:
//   a   ~a   X   mu X. F   nu X. F   F * G   F | G   F + G   F & G
//   1   bot   0   top   ?[sig] F   ![sig] F
// ? and ! without [sig] take the default signature when one is given.
// Binary operators share one precedence level and associate to the left;
// the printer parenthesizes nested binaries, so round-trips are exact.
FormulaId parse_formula(const std::string& text,
                        const std::optional<std::string>& default_sig = std::nullopt);

// Line-oriented instance files:
//   sig <name> mpx={0,1} contr={2}
//   leq g <a> <b>      (same for f and u)
// '#' starts a comment.
InstanceSpec parse_instance(const std::string& text);

// Proof files: one s-expression per node,
//   (node <id> (seq "F" ...) (rule <kind> [:principal <k>] [:i <n>]
//      [:split (<0|1> ...)] [:iota ((<prem> <pos>) ...)]
//      [:pp (((<prem> <pos>) (<prem> <pos>)) ...)] [:premises (<id>|back:<id> ...)]))
// plus an optional (root <id>); the first node otherwise.
Proof parse_proof(const std::string& text,
                  const std::optional<std::string>& default_sig = std::nullopt);

// Default signature to use for ?F / !F sugar: defined when the instance has
// exactly one signature.
std::optional<std::string> sugar_sig(const InstanceSpec& inst);

}  // namespace mull

#endif
