#ifndef EPSLOG_LINSYSTEM_HPP
#define EPSLOG_LINSYSTEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "epslog/rational.hpp"

namespace epslog {

enum class RowRel { Ge, Gt, Eq };  // coef·x >= rhs | > rhs | == rhs

struct LinRow {
  std::vector<Rat> coef;
  RowRel rel = RowRel::Ge;
  Rat rhs;
};

struct LinSystem {
  std::vector<std::string> vars;
  std::vector<LinRow> rows;

  explicit LinSystem(std::vector<std::string> names = {}) : vars(std::move(names)) {}
  void add_ge(std::vector<Rat> coef, Rat rhs);
  void add_gt(std::vector<Rat> coef, Rat rhs);
  void add_eq(std::vector<Rat> coef, Rat rhs);
  void add_le(std::vector<Rat> coef, Rat rhs);  // stored negated as >=
  void add_lt(std::vector<Rat> coef, Rat rhs);  // stored negated as >
  bool has_strict() const;
};

struct LpResult {
  bool feasible = false;
  std::vector<Rat> point;  // satisfies every row exactly when feasible
};

// Weak systems (>= and == rows only): exact Fourier–Motzkin elimination with
// a witness recovered by back-substitution. Throws std::invalid_argument if
// the system has strict rows.
LpResult feasible_weak(const LinSystem& s);

// Mixed systems. Equalities are removed by exact Gaussian elimination; a
// system with strict rows is decided through the dual criterion (Carver's
// theorem, with multipliers for the weak rows): nonzero y >= 0 with
// yA = 0, yb <= 0 exists iff the normalized weak dual program is feasible.
// When feasible, a witness point is built by shifting the strict rows by the
// largest margin 2^-k that keeps the weak closure feasible.
LpResult feasible(const LinSystem& s);

// Debug rendering, one `lhs relop rhs` line per row.
std::string print_system(const LinSystem& s);

}  // namespace epslog

#endif  // EPSLOG_LINSYSTEM_HPP
