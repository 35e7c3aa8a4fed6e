#ifndef MULL_PRINT_HPP
#define MULL_PRINT_HPP

#include <string>

#include "mull/instance.hpp"
#include "mull/proof.hpp"

namespace mull {

std::string print_formula(FormulaId f);
std::string print_instance(const InstanceSpec& inst);
std::string print_proof(const Proof& p);

}  // namespace mull

#endif
