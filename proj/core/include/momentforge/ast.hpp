#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "momentforge/rational.hpp"

namespace momentforge {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

// ---------------------------------------------------------------------------
// Expressions. One tree type serves both polynomial and constant contexts;
// validation decides which identifiers are program variables and which are
// symbolic constants.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div, Pow };

  Kind kind;
  Rational number;       // Number
  std::string ident;     // Ident
  ExprPtr lhs, rhs;      // binary / unary (lhs only for Neg)
  unsigned exponent = 0; // Pow: integer literal exponent
  SourceLoc loc;
};

ExprPtr expr_number(const Rational& r, SourceLoc loc = {});
ExprPtr expr_ident(const std::string& name, SourceLoc loc = {});
ExprPtr expr_neg(ExprPtr e);
ExprPtr expr_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs);
ExprPtr expr_pow(ExprPtr base, unsigned exponent);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
void expr_collect_idents(const ExprPtr& e, std::set<std::string>& out);
// New tree with identifiers renamed per the map (missing names kept).
ExprPtr expr_rename(const ExprPtr& e, const std::map<std::string, std::string>& renames);
ExprPtr expr_substitute_number(const ExprPtr& e, const std::string& name, const Rational& value);

// ---------------------------------------------------------------------------
// Boolean expressions.
// ---------------------------------------------------------------------------

enum class CmpOp { Eq, Ne, Lt, Gt, Le, Ge };

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  enum class Kind { True, False, Cmp, Not, And, Or };

  Kind kind;
  CmpOp op = CmpOp::Eq;  // Cmp
  ExprPtr lhs, rhs;      // Cmp
  BoolPtr a, b;          // Not (a), And/Or (a, b)
};

BoolPtr bool_true();
BoolPtr bool_false();
BoolPtr bool_cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs);
BoolPtr bool_not(BoolPtr a);
BoolPtr bool_and(BoolPtr a, BoolPtr b);
BoolPtr bool_or(BoolPtr a, BoolPtr b);

bool bool_equal(const BoolPtr& a, const BoolPtr& b);
bool bool_is_true(const BoolPtr& b);
void bool_collect_idents(const BoolPtr& b, std::set<std::string>& out);
BoolPtr bool_rename(const BoolPtr& b, const std::map<std::string, std::string>& renames);
BoolPtr bool_substitute_number(const BoolPtr& b, const std::string& name, const Rational& value);

// ---------------------------------------------------------------------------
// Statements.
// ---------------------------------------------------------------------------

// v1 {p1} v2 {p2} ... ; a missing probability on the last option stands for
// 1 - sum of the others. A plain polynomial RHS is a single option with
// probability one.
struct CatOption {
  ExprPtr value;
  ExprPtr prob;  // null = omitted
};

struct Categorical {
  std::vector<CatOption> options;
  unsigned draw_id = 0;  // stable site id for coupled sampling
};

enum class DistKind { Bernoulli, Normal, Uniform, Laplace, Exponential };

const char* dist_kind_name(DistKind k);
std::optional<DistKind> dist_kind_from_name(const std::string& name);

struct DistCall {
  DistKind kind;
  std::vector<ExprPtr> params;
  // Exponential(c/p): rate c over polynomial p. params = {c, p} with
  // rate_over_poly set; plain Exponential(c) has params = {c}.
  bool rate_over_poly = false;
  unsigned draw_id = 0;
};

struct Rhs {
  std::variant<Categorical, DistCall> node;

  bool is_categorical() const { return std::holds_alternative<Categorical>(node); }
  const Categorical& categorical() const { return std::get<Categorical>(node); }
  Categorical& categorical() { return std::get<Categorical>(node); }
  bool is_dist() const { return std::holds_alternative<DistCall>(node); }
  const DistCall& dist() const { return std::get<DistCall>(node); }
  DistCall& dist() { return std::get<DistCall>(node); }
};

Rhs rhs_plain(ExprPtr value);

struct Statement;

// Simultaneous when |targets| > 1. `guard`/`default_var` belong to the
// normalized IR; surface programs leave them unset.
struct AssignStmt {
  std::vector<std::string> targets;
  std::vector<Rhs> values;
  BoolPtr guard;                // null = unconditional
  std::string default_var;     // empty = none
  SourceLoc loc;
};

struct IfBranch {
  BoolPtr cond;
  std::vector<Statement> body;
};

struct IfStmt {
  std::vector<IfBranch> branches;     // if / else if chain
  std::vector<Statement> else_body;   // may be empty
  SourceLoc loc;
};

struct Statement {
  std::variant<AssignStmt, IfStmt> node;

  bool is_assign() const { return std::holds_alternative<AssignStmt>(node); }
  const AssignStmt& assign() const { return std::get<AssignStmt>(node); }
  AssignStmt& assign() { return std::get<AssignStmt>(node); }
  bool is_if() const { return std::holds_alternative<IfStmt>(node); }
  const IfStmt& if_stmt() const { return std::get<IfStmt>(node); }
  IfStmt& if_stmt() { return std::get<IfStmt>(node); }
};

bool statement_equal(const Statement& a, const Statement& b);

// ---------------------------------------------------------------------------
// Programs.
// ---------------------------------------------------------------------------

struct Program {
  std::vector<Statement> init;
  BoolPtr guard;  // `true` for unguarded loops
  std::vector<Statement> body;

  // Identifiers assigned anywhere are variables; all others are symbolic
  // constants. Filled by validation.
  std::set<std::string> variables;
  std::set<std::string> symbols;

  bool structurally_equal(const Program& o) const;
  void reclassify();  // recompute variables/symbols from the statements
};

// Flat guarded-single-assignment form.
struct GuardedAssign {
  std::string target;
  Rhs rhs;
  BoolPtr guard;            // never null; bool_true() when unconditional
  std::string default_var;  // always a single variable
};

struct NormalizedProgram {
  std::vector<GuardedAssign> init;
  std::vector<GuardedAssign> body;
  std::set<std::string> original_vars;  // variables of the source program
  std::set<std::string> variables;      // including auxiliaries
  std::set<std::string> symbols;
  BoolPtr source_guard;  // recorded loop guard phi (null if the loop was unguarded)

  // View as a Program (for the simulator and shared analyses).
  Program as_program() const;
};

void collect_assigned_vars(const std::vector<Statement>& stmts, std::set<std::string>& out);

// Identifiers read by a statement (right-hand sides, guards, conditions; the
// default variable only when the guard is non-trivial).
void collect_reads(const Statement& s, std::set<std::string>& reads);

// Variables whose value before the init block can be observed: read in the
// init block before their first unconditional assignment, or read in the
// body before their first unconditional body assignment while the init block
// leaves them unset. These need a symbolic initial value.
std::set<std::string> pre_state_reads(const Program& p);

}  // namespace momentforge
