#pragma once

// Command-line front end. Subcommands: curve, spectrum, tau, holder, mass, mc.
// Exit codes: 0 success, 2 invalid input, 3 convergence or resource failure.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "koch/dynamics.hpp"

namespace koch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCompute = 3;

/// Evaluates a lambda expression such as "0.25", "1/3", "sqrt3/6" or
/// "sqrt(2)/6". Throws DomainError on malformed input.
double parse_lambda(std::string_view text);

/// Parses "pre:<digits>,per:<digits>". Throws DomainError on malformed input.
SymbolicPoint parse_point(std::string_view text);
std::string format_point(const SymbolicPoint& p);

/// Runs the tool with `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace koch
