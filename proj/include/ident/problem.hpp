#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ident/rational.hpp"

namespace ident {

// Parsed form of a problem document. The document declares one universe, an
// observation list, at least one named estimand, optional assumptions, and an
// optional observed point:
//
//   universe grid {
//     variable Y { support: [0, 1] }
//     variable Z { support: [0, 1] }
//     grid_step: 0.01
//   }
//   observe { prob(Z = 1), expect(Y | Z = 1) }
//   estimand EY { expect(Y) }
//   assume bounded(Y, 0, 1)
//   given {
//     prob(Z = 1) = 0.75
//     expect(Y | Z = 1) = 0.6
//   }
//
// '#' starts a line comment. Structural equality of specs ignores source
// positions, so print() followed by parse() yields an equal spec.

struct SourcePos {
  int line = 1;
  int col = 1;
};

enum class ExprKind { expect, prob, dist, mean_diff };

// One functional expression: expect(V), expect(V | C = c), prob(V = v),
// prob(V = v | C = c), dist(V), dist(V | C = c), mean_diff(A, B).
struct Expr {
  ExprKind kind = ExprKind::expect;
  std::string var;
  std::string var2;                     // mean_diff only
  std::optional<Rat> value;             // prob target
  std::optional<std::string> cond_var;  // conditioning event
  std::optional<Rat> cond_value;
  SourcePos pos;
};

bool expr_equal(const Expr& a, const Expr& b);
std::string expr_to_string(const Expr& e);

struct VariableDecl {
  std::string name;
  std::vector<Rat> support;
  SourcePos pos;
};

enum class UniverseKind { grid, population };

struct UniverseDecl {
  UniverseKind kind = UniverseKind::grid;
  std::vector<VariableDecl> variables;
  std::optional<Rat> grid_step;      // grid universes
  std::optional<std::int64_t> units; // population universes
  SourcePos pos;
};

struct EstimandDecl {
  std::string name;
  Expr expr;
  SourcePos pos;
};

// Assumption argument: a declared variable name or a numeric literal.
struct AssumeArg {
  std::optional<std::string> ident;
  std::optional<Rat> number;
  SourcePos pos;
};

struct AssumeDecl {
  std::string name;  // builtin: bounded | randomized | independent | fixed
  std::vector<AssumeArg> args;
  SourcePos pos;
};

std::string assume_to_string(const AssumeDecl& a);

// One observed-point binding: a functional expression pinned to a scalar or,
// for dist(...), to a probability list over the variable's support.
struct GivenBinding {
  Expr expr;
  std::vector<Rat> values;
  bool is_list = false;
  SourcePos pos;
};

struct ProblemSpec {
  UniverseDecl universe;
  std::vector<Expr> observe;
  std::vector<EstimandDecl> estimands;
  std::vector<AssumeDecl> assumptions;
  std::vector<GivenBinding> given;
  bool has_given = false;
};

bool spec_equal(const ProblemSpec& a, const ProblemSpec& b);

// Parses a problem document. Deterministic; retains source positions.
// Throws SyntaxError, UnknownIdentifier, DuplicateDeclaration.
ProblemSpec parse(const std::string& text);

// Canonical text form; parse(print(s)) is structurally equal to s.
std::string print(const ProblemSpec& spec);

}  // namespace ident
