#include "gradnorm/errors.hpp"

namespace gradnorm {

NumericFault::NumericFault(int k, const std::string& what)
    : Error("non-finite value at k=" + std::to_string(k) + ": " + what), k_(k) {}

}  // namespace gradnorm
