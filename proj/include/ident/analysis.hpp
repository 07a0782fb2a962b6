#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ident/problem.hpp"
#include "ident/relation.hpp"
#include "ident/universe.hpp"

namespace ident {

// Analysis commands, mirroring the three steps of an identification analysis:
// analyze = identifiability, region = identification regions at the observed
// point, refute = assumption verdicts. oracle recomputes regions by forced
// brute-force enumeration so the LP route can be cross-checked against it.
enum class Command { analyze, region, refute, oracle };

Command command_from_name(const std::string& name);  // throws ValidationError

enum class Method { automatic, enumerate, lp };

Method method_from_name(const std::string& name);  // throws ValidationError

struct RunOptions {
  std::optional<Rat> grid_step;  // overrides the document's grid_step
  std::uint64_t cap = kDefaultEnumerationCap;
  double eps = kDefaultEps;  // assumption-satisfaction tolerance
  Method method = Method::automatic;
};

struct RunResult {
  std::string json;         // single JSON object, newline-terminated
  int exit_code = 0;        // 0 analyzed; 2 observed point refuted
  std::string diagnostics;  // stderr notes: chosen method, counts, timings
};

// Executes one command over a parsed document. Reports are byte-stable for
// identical inputs (timings go to diagnostics, never into the JSON). Errors
// propagate as exceptions; the CLI maps them onto exit codes. A refuted
// observed point under `refute` is a finding, not an error: the verdicts are
// still reported, with exit_code 2.
RunResult run(const ProblemSpec& spec, Command command,
              const RunOptions& opts = {});

}  // namespace ident
