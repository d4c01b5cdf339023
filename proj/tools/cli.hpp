#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "typesemi/report.hpp"

namespace typesemi::cli {

struct Budgets {
  int n_max = 8;
  int coeff_cap = 32;
  std::size_t node_cap = 1000000;
  int depth = -1;  // -1: the operation's default
};

// One analysis request, rebuilt verbatim by `verify` from a report.
struct Invocation {
  std::string command;  // "monoid leq", "graph trace", ...
  std::string input;    // path, or "drunken"
  std::map<std::string, std::string> args;
  Budgets budgets;
};

// verdict + certificate for an invocation; throws InputError on bad input.
struct Analysis {
  std::string verdict;
  Json certificate;
  std::string digest;  // of the input bytes, "builtin:<name>" for built-in inputs
};
Analysis analyse(const Invocation& inv);

Json make_report(const Invocation& inv, const Analysis& a);
Invocation invocation_from_report(const Json& report);

struct Replay {
  bool accepted = false;
  std::string detail;
};
Replay verify_report(const Json& report);

// Exit codes: 0 verdict produced, 1 input error, 2 UNKNOWN (0 with --unknown-ok),
// 3 a replay or corpus check failed.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace typesemi::cli
