#ifndef EPSLOG_DECIDE_HPP
#define EPSLOG_DECIDE_HPP

#include <optional>
#include <string>
#include <vector>

#include "epslog/linsystem.hpp"
#include "epslog/model.hpp"
#include "epslog/semantics.hpp"
#include "epslog/syntax.hpp"

namespace epslog {

enum class Verdict { Satisfiable, Unsatisfiable, Valid, Invalid, BudgetExhausted };
std::string verdict_name(Verdict v);

struct DecisionOutcome {
  Verdict verdict;
  std::optional<FiniteModel> witness;   // re-verifies under the matching evaluator
  std::optional<FiniteModel> counter;   // refutes the sentence when present
  std::optional<QTree> certificate_tree;
  std::optional<std::vector<std::pair<PropVar, bool>>> certificate_assignment;
};

// ── Propositional tautology check ───────────────────────────────────────────

inline constexpr int kTautVarGuard = 24;

struct TautResult {
  bool tautology;
  std::vector<std::pair<PropVar, bool>> falsifying;  // set iff !tautology
};

// Exhaustive truth table; throws std::invalid_argument beyond kTautVarGuard
// distinct variables.
TautResult taut_check(const Propositionalization& p);

// ── ε = 0 decision procedure ────────────────────────────────────────────────

enum class ZeroProblem { ZeroFValidFinite, ZeroFValidCountable, ZeroESatFinite, ZeroESatCountable };

// Pipeline: to_prenex → validity_convert → propositionalize → taut_check.
// The finite and countable variants share this single code path. Signature
// must be equality-free (function symbols do not exist in this AST).
// Invalid/satisfiable outcomes carry a synthesized model that is re-checked
// under eval_f / eval_e before being returned.
DecisionOutcome decide_zero(const Formula& f, ZeroProblem problem, const Signature& sig);

// ── Monadic relational decision procedure ───────────────────────────────────

enum class Mode { E, F };

// Decides satisfiability of a q-sentence over a monadic relational signature
// by searching simple models (universe = predicate cells) and tree skeletons,
// accumulating one measure row per weak/strong node, and testing exact LP
// feasibility. The unrestricted, countable, and finite answers coincide.
DecisionOutcome decide_monadic(const QSentence& q, const Signature& sig);

// Plain-sentence entry: coerces with the requested semantics first.
// F-mode requires eps < 1.
DecisionOutcome decide_monadic(const Formula& f, Mode mode, const Rat& eps,
                               const Signature& sig);

// ── Σ01 semi-decision by enumeration ────────────────────────────────────────

// Enumerates finite models of increasing total weight (and size) up to
// `budget`, evaluating the sentence under eval_e or eval_f at eps; returns
// the first witness in enumeration order or BudgetExhausted. Sound at every
// budget, complete only in the limit. `max_size` caps the universe
// (default: budget). `jobs` > 1 evaluates batches in parallel; the committed
// witness is still the lowest-index one.
DecisionOutcome semi_decide_finite_sat(const Formula& f, const Rat& eps, Mode mode,
                                       int budget, const Signature& sig,
                                       int max_size = -1, int jobs = 1);

}  // namespace epslog

#endif  // EPSLOG_DECIDE_HPP
