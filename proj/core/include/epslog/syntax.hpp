#ifndef EPSLOG_SYNTAX_HPP
#define EPSLOG_SYNTAX_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epslog/rational.hpp"

namespace epslog {

// ── Signature ───────────────────────────────────────────────────────────────

struct Signature {
  std::map<std::string, int> predicates;  // name -> arity (>= 1)
  std::set<std::string> constants;
  bool has_equality = false;

  // Equality-free, function-free, constants-free, every predicate unary.
  bool is_monadic_relational() const;

  // Throws std::invalid_argument on duplicate names or arity < 1.
  void check() const;
};

// ── Terms and formulas ──────────────────────────────────────────────────────

enum class TermKind { Variable, Constant };

struct Term {
  TermKind kind;
  std::string name;

  static Term var(std::string n) { return {TermKind::Variable, std::move(n)}; }
  static Term con(std::string n) { return {TermKind::Constant, std::move(n)}; }
  bool operator==(const Term&) const = default;
  auto operator<=>(const Term&) const = default;
};

enum class FormulaKind { Atom, Equal, Not, And, Or, Implies, Iff, Forall, Exists };

// Immutable by convention; all transformations build new trees.
struct Formula {
  FormulaKind kind = FormulaKind::Atom;
  std::string pred;            // Atom
  std::vector<Term> args;      // Atom; Equal uses args[0], args[1]
  std::string var;             // Forall / Exists
  std::vector<Formula> kids;   // Not: 1, And/Or: >= 1, Implies/Iff: 2, quantifiers: 1

  static Formula atom(std::string p, std::vector<Term> a);
  static Formula equal(Term l, Term r);
  static Formula lnot(Formula f);
  static Formula land(std::vector<Formula> fs);
  static Formula lor(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula forall(std::string v, Formula f);
  static Formula exists(std::string v, Formula f);

  bool operator==(const Formula&) const = default;
};

// ── q-sentences ─────────────────────────────────────────────────────────────

struct QuantifierKind {
  enum class Tag { Exists, Forall, WeakAtLeast, StrongGreater };
  Tag tag = Tag::Exists;
  Rat eps;  // only meaningful for WeakAtLeast / StrongGreater; must be in [0,1]

  static QuantifierKind exist() { return {Tag::Exists, Rat(0)}; }
  static QuantifierKind all() { return {Tag::Forall, Rat(0)}; }
  static QuantifierKind weak_at_least(Rat e);
  static QuantifierKind strong_greater(Rat e);
  bool operator==(const QuantifierKind&) const = default;
};

struct QSentence {
  std::vector<std::pair<QuantifierKind, std::string>> prefix;
  Formula matrix;  // quantifier-free

  // Checks the type invariants: quantifier-free matrix, free vars covered by
  // a duplicate-free prefix. Throws std::invalid_argument when violated.
  void check() const;
};

// ── Propositional image of a universal formula ──────────────────────────────

struct PropVar {
  std::string prime;               // prime formula name ("=" for equality)
  std::vector<std::string> index;  // term names, arity of the prime formula
  bool operator==(const PropVar&) const = default;
  auto operator<=>(const PropVar&) const = default;
  std::string to_string() const;
};

struct PropFormula {
  enum class Kind { Var, Not, And, Or, Implies, Iff };
  Kind kind = Kind::Var;
  int var = -1;  // index into Propositionalization::vars when kind == Var
  std::vector<PropFormula> kids;
};

struct Propositionalization {
  PropFormula formula;
  std::vector<PropVar> vars;
};

// ── Queries ─────────────────────────────────────────────────────────────────

std::set<std::string> free_vars(const Formula& f);
bool is_sentence(const Formula& f);
bool is_quantifier_free(const Formula& f);
bool is_prenex(const Formula& f);

// Arity and declaredness against a signature; `extra_free` names variables
// allowed to appear free. Throws std::invalid_argument with a description.
void check_well_formed(const Formula& f, const Signature& sig);

// ── Transformations ─────────────────────────────────────────────────────────

// `base` if unused, otherwise base_k with the smallest k avoiding `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// Negation normal form: Not only directly above Atom/Equal, Implies/Iff gone.
Formula to_nnf(const Formula& f);

// Prenex normal form. Runs to_nnf first, renames bound variables apart
// (suffix `_k`, smallest k avoiding capture), then extracts quantifiers
// across And/Or left to right.
Formula to_prenex(const Formula& f);

// εE-coercion: prenex first; ∀ becomes Q≥(1−ε), ∃ stays. Requires a sentence.
QSentence e_coerce(const Formula& f, const Rat& eps);

// εF-coercion: prenex first; ∃ becomes Q>(ε), ∀ stays. Requires a sentence.
QSentence f_coerce(const Formula& f, const Rat& eps);

// Relativization to a unary predicate: ∀x ψ ↦ ∀x(N(x) → ψ^N),
// ∃x ψ ↦ ∃x(N(x) ∧ ψ^N). Requires prenex input.
Formula relativize(const Formula& f, const std::string& unary_pred);

// φ = Q1 x1 … Qn xn ψ  ↦  ∀y ∀x_{i1} … ∀x_{ik} ψ[existential vars := y]
// where i1..ik enumerate the universal positions in order.
Formula validity_convert(const Formula& f);

// ∀y⃗ ψ with quantifier-free, equality-free ψ: every atom π(t⃗) becomes a
// propositional variable keyed by (π, term names).
Propositionalization propositionalize(const Formula& f);

// ── Printing ────────────────────────────────────────────────────────────────

// Canonical s-expression form; parse(print(f)) == f.
std::string print_formula(const Formula& f);
std::string print_qsentence(const QSentence& q);
std::string print_quantifier(const QuantifierKind& k);

}  // namespace epslog

#endif  // EPSLOG_SYNTAX_HPP
