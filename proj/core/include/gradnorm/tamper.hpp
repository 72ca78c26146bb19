#pragma once

#include <string>
#include <vector>

#include "gradnorm/methods.hpp"

namespace gradnorm {

// Deliberate corruptions of a recorded trace, used to show that certificates
// reject traces the method could not have produced. Point tamperings move an
// iterate and re-evaluate its oracle and value so the recorded data stays
// self-consistent; record tamperings edit the stored oracle or value only.
//
// Names: ascent_step, restart, swap, corrupt_oracle, corrupt_value (smooth),
// terminal_ascent, terminal_restart, swap_terminal (OGM-G), and
// ascent_step, restart, swap, corrupt_oracle, stale_oracle (operator).

// The five tamperings each certificate is expected to reject.
std::vector<std::string> tamperings_for(Method m);

Trace tamper(const Trace& t, const SmoothProblem& p, const std::string& name);
Trace tamper(const Trace& t, const OperatorProblem& p, const std::string& name);

}  // namespace gradnorm
