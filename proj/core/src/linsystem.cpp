#include "epslog/linsystem.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace epslog {

void LinSystem::add_ge(std::vector<Rat> coef, Rat rhs) {
  rows.push_back({std::move(coef), RowRel::Ge, std::move(rhs)});
}
void LinSystem::add_gt(std::vector<Rat> coef, Rat rhs) {
  rows.push_back({std::move(coef), RowRel::Gt, std::move(rhs)});
}
void LinSystem::add_eq(std::vector<Rat> coef, Rat rhs) {
  rows.push_back({std::move(coef), RowRel::Eq, std::move(rhs)});
}
void LinSystem::add_le(std::vector<Rat> coef, Rat rhs) {
  for (auto& c : coef) c = -c;
  rows.push_back({std::move(coef), RowRel::Ge, -rhs});
}
void LinSystem::add_lt(std::vector<Rat> coef, Rat rhs) {
  for (auto& c : coef) c = -c;
  rows.push_back({std::move(coef), RowRel::Gt, -rhs});
}
bool LinSystem::has_strict() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const LinRow& r) { return r.rel == RowRel::Gt; });
}

namespace {

// Internal weak rows: coef·x >= rhs.
struct WRow {
  std::vector<Rat> coef;
  Rat rhs;
};

bool all_zero(const std::vector<Rat>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& r) { return r == 0; });
}

void normalize(WRow& r) {
  for (const Rat& c : r.coef) {
    if (c != 0) {
      Rat scale = abs(c);
      for (auto& x : r.coef) x /= scale;
      r.rhs /= scale;
      return;
    }
  }
}

struct Stage {
  int var;                  // variable eliminated at this stage
  std::vector<WRow> rows;   // the rows mentioning it, pre-elimination
};

// Fourier–Motzkin over >= rows. Returns false on a ground contradiction.
// Stages are appended in elimination order (last variable first).
bool fm_eliminate(std::vector<WRow> rows, int nvars, std::vector<Stage>& stages) {
  for (int j = nvars - 1; j >= 0; --j) {
    std::vector<WRow> lower, upper, rest;
    for (auto& r : rows) {
      if (r.coef[j] > 0)
        lower.push_back(std::move(r));
      else if (r.coef[j] < 0)
        upper.push_back(std::move(r));
      else
        rest.push_back(std::move(r));
    }
    Stage st{j, {}};
    st.rows.insert(st.rows.end(), lower.begin(), lower.end());
    st.rows.insert(st.rows.end(), upper.begin(), upper.end());
    stages.push_back(st);

    std::set<std::pair<std::vector<Rat>, Rat>> seen;
    std::vector<WRow> next = std::move(rest);
    for (const auto& lo : lower) {
      for (const auto& up : upper) {
        // p = lo.coef[j] > 0, q = -up.coef[j] > 0; q*lo + p*up cancels x_j.
        Rat p = lo.coef[j];
        Rat q = -up.coef[j];
        WRow combined;
        combined.coef.resize(nvars, Rat(0));
        for (int i = 0; i < nvars; ++i) combined.coef[i] = q * lo.coef[i] + p * up.coef[i];
        combined.rhs = q * lo.rhs + p * up.rhs;
        normalize(combined);
        if (all_zero(combined.coef)) {
          if (combined.rhs > 0) return false;
          continue;
        }
        if (seen.insert({combined.coef, combined.rhs}).second)
          next.push_back(std::move(combined));
      }
    }
    // Ground rows may also already be present among the untouched ones.
    std::vector<WRow> pruned;
    for (auto& r : next) {
      if (all_zero(r.coef)) {
        if (r.rhs > 0) return false;
      } else {
        pruned.push_back(std::move(r));
      }
    }
    rows = std::move(pruned);
  }
  for (const auto& r : rows)
    if (r.rhs > 0) return false;  // fully ground leftovers
  return true;
}

// Assigns variables in reverse elimination order, always at the tightest
// lower bound (or the least upper bound / zero when unbounded below).
std::vector<Rat> fm_back_substitute(const std::vector<Stage>& stages, int nvars) {
  std::vector<Rat> x(nvars, Rat(0));
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    int j = it->var;
    bool has_lo = false, has_hi = false;
    Rat lo(0), hi(0);
    for (const auto& r : it->rows) {
      Rat rest = r.rhs;
      for (int i = 0; i < nvars; ++i)
        if (i != j && r.coef[i] != 0) rest -= r.coef[i] * x[i];
      Rat bound = rest / r.coef[j];
      if (r.coef[j] > 0) {
        if (!has_lo || bound > lo) lo = bound;
        has_lo = true;
      } else {
        if (!has_hi || bound < hi) hi = bound;
        has_hi = true;
      }
    }
    if (has_lo)
      x[j] = lo;
    else if (has_hi)
      x[j] = hi;
    else
      x[j] = 0;
  }
  return x;
}

std::vector<WRow> to_weak_rows(const LinSystem& s, bool strict_as_weak,
                               const Rat& strict_shift) {
  std::vector<WRow> rows;
  for (const auto& r : s.rows) {
    switch (r.rel) {
      case RowRel::Ge:
        rows.push_back({r.coef, r.rhs});
        break;
      case RowRel::Eq: {
        rows.push_back({r.coef, r.rhs});
        WRow neg;
        neg.coef = r.coef;
        for (auto& c : neg.coef) c = -c;
        neg.rhs = -r.rhs;
        rows.push_back(std::move(neg));
        break;
      }
      case RowRel::Gt:
        if (!strict_as_weak) throw std::invalid_argument("feasible_weak saw a strict row");
        rows.push_back({r.coef, r.rhs + strict_shift});
        break;
    }
  }
  for (const auto& r : rows)
    if (r.coef.size() != s.vars.size())
      throw std::invalid_argument("row width differs from variable count");
  return rows;
}

bool satisfies(const LinSystem& s, const std::vector<Rat>& x) {
  for (const auto& r : s.rows) {
    Rat lhs(0);
    for (std::size_t i = 0; i < r.coef.size(); ++i) lhs += r.coef[i] * x[i];
    if (r.rel == RowRel::Ge && !(lhs >= r.rhs)) return false;
    if (r.rel == RowRel::Gt && !(lhs > r.rhs)) return false;
    if (r.rel == RowRel::Eq && !(lhs == r.rhs)) return false;
  }
  return true;
}

LpResult feasible_weak_rows(std::vector<WRow> rows, int nvars) {
  std::vector<Stage> stages;
  if (!fm_eliminate(std::move(rows), nvars, stages)) return {false, {}};
  return {true, fm_back_substitute(stages, nvars)};
}

}  // namespace

LpResult feasible_weak(const LinSystem& s) {
  if (s.has_strict()) throw std::invalid_argument("feasible_weak saw a strict row");
  int n = static_cast<int>(s.vars.size());
  LpResult res = feasible_weak_rows(to_weak_rows(s, false, Rat(0)), n);
  if (res.feasible && !satisfies(s, res.point))
    throw std::logic_error("feasible_weak produced a non-satisfying point");
  return res;
}

// ── Gaussian elimination of equality rows ───────────────────────────────────

namespace {

struct GaussResult {
  bool consistent = true;
  // Pivot substitutions in elimination order: x[pivot] = rhs - coef·x (coef
  // has zero at the pivot). Applied in reverse to extend a reduced point.
  struct Subst {
    int pivot;
    std::vector<Rat> coef;
    Rat rhs;
  };
  std::vector<Subst> substs;
  LinSystem reduced;  // only Ge/Gt rows, pivot columns zeroed
};

GaussResult gauss_eliminate(const LinSystem& s) {
  GaussResult out;
  out.reduced.vars = s.vars;
  int n = static_cast<int>(s.vars.size());
  std::vector<LinRow> eqs, rest;
  for (const auto& r : s.rows)
    (r.rel == RowRel::Eq ? eqs : rest).push_back(r);

  // x[pivot] = sub.rhs - sub.coef·x (sub.coef[pivot] == 0).
  auto substitute = [&](LinRow& r, const GaussResult::Subst& sub) {
    Rat factor = r.coef[sub.pivot];
    if (factor == 0) return;
    r.coef[sub.pivot] = 0;
    for (int i = 0; i < n; ++i) r.coef[i] -= factor * sub.coef[i];
    r.rhs -= factor * sub.rhs;
  };

  for (auto& eq : eqs) {
    for (const auto& sub : out.substs) substitute(eq, sub);
    int pivot = -1;
    for (int i = 0; i < n; ++i)
      if (eq.coef[i] != 0) {
        pivot = i;  // leftmost nonzero column
        break;
      }
    if (pivot < 0) {
      if (eq.rhs != 0) {
        out.consistent = false;
        return out;
      }
      continue;
    }
    Rat lead = eq.coef[pivot];
    GaussResult::Subst sub;
    sub.pivot = pivot;
    sub.coef.resize(n, Rat(0));
    for (int i = 0; i < n; ++i)
      if (i != pivot) sub.coef[i] = eq.coef[i] / lead;
    sub.rhs = eq.rhs / lead;
    out.substs.push_back(std::move(sub));
  }

  for (auto& r : rest) {
    for (const auto& sub : out.substs) substitute(r, sub);
    out.reduced.rows.push_back(std::move(r));
  }
  return out;
}

void apply_substs_back(const GaussResult& g, std::vector<Rat>& x) {
  for (auto it = g.substs.rbegin(); it != g.substs.rend(); ++it) {
    Rat v = it->rhs;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (it->coef[i] != 0) v -= it->coef[i] * x[i];
    x[it->pivot] = v;
  }
}

}  // namespace

LpResult feasible(const LinSystem& s) {
  int n = static_cast<int>(s.vars.size());
  for (const auto& r : s.rows)
    if (r.coef.size() != s.vars.size())
      throw std::invalid_argument("row width differs from variable count");

  if (!s.has_strict()) {
    LpResult res = feasible_weak(s);
    return res;
  }

  GaussResult g = gauss_eliminate(s);
  if (!g.consistent) return {false, {}};

  // Split reduced rows; handle ground rows immediately.
  LinSystem red(s.vars);
  for (const auto& r : g.reduced.rows) {
    if (all_zero(r.coef)) {
      if (r.rel == RowRel::Ge && r.rhs > 0) return {false, {}};
      if (r.rel == RowRel::Gt && r.rhs >= 0) return {false, {}};
      continue;
    }
    red.rows.push_back(r);
  }

  std::vector<const LinRow*> strict_rows, weak_rows;
  for (const auto& r : red.rows)
    (r.rel == RowRel::Gt ? strict_rows : weak_rows).push_back(&r);

  if (strict_rows.empty()) {
    LpResult inner = feasible_weak_rows(to_weak_rows(red, false, Rat(0)), n);
    if (!inner.feasible) return {false, {}};
    apply_substs_back(g, inner.point);
    if (!satisfies(s, inner.point))
      throw std::logic_error("feasible produced a non-satisfying point");
    return {true, inner.point};
  }

  // Weak closure: strict rows relaxed to >=.
  if (!feasible_weak_rows(to_weak_rows(red, true, Rat(0)), n).feasible) return {false, {}};

  // Dual criterion. Multipliers y (per strict row, sum 1) and z (per weak
  // row), all >= 0, with y·S + z·C = 0 and y·t + z·d >= 0, certify
  // infeasibility of the mixed system.
  {
    std::size_t p = strict_rows.size(), q = weak_rows.size();
    std::vector<std::string> dual_names(p + q, "m");
    LinSystem dual(dual_names);
    std::vector<Rat> unit(p + q, Rat(0));
    for (std::size_t i = 0; i < p + q; ++i) {
      unit.assign(p + q, Rat(0));
      unit[i] = 1;
      dual.add_ge(unit, Rat(0));
    }
    for (int v = 0; v < n; ++v) {
      std::vector<Rat> row(p + q, Rat(0));
      for (std::size_t i = 0; i < p; ++i) row[i] = strict_rows[i]->coef[v];
      for (std::size_t j = 0; j < q; ++j) row[p + j] = weak_rows[j]->coef[v];
      dual.add_eq(row, Rat(0));
    }
    std::vector<Rat> obj(p + q, Rat(0));
    for (std::size_t i = 0; i < p; ++i) obj[i] = strict_rows[i]->rhs;
    for (std::size_t j = 0; j < q; ++j) obj[p + j] = weak_rows[j]->rhs;
    dual.add_ge(obj, Rat(0));
    std::vector<Rat> ones(p + q, Rat(0));
    for (std::size_t i = 0; i < p; ++i) ones[i] = 1;
    dual.add_eq(ones, Rat(1));
    if (feasible_weak(dual).feasible) return {false, {}};
  }

  // Feasible: recover a point by shifting every strict row by the largest
  // power of 1/2 that keeps the weak closure feasible.
  for (Rat delta(1);; delta /= 2) {
    LpResult shifted = feasible_weak_rows(to_weak_rows(red, true, delta), n);
    if (shifted.feasible) {
      apply_substs_back(g, shifted.point);
      if (!satisfies(s, shifted.point))
        throw std::logic_error("feasible produced a non-satisfying point");
      return {true, shifted.point};
    }
  }
}

std::string print_system(const LinSystem& s) {
  std::ostringstream out;
  for (const auto& r : s.rows) {
    bool first = true;
    for (std::size_t i = 0; i < r.coef.size(); ++i) {
      if (r.coef[i] == 0) continue;
      if (!first) out << " + ";
      out << rat_to_string(r.coef[i]) << " " << s.vars[i];
      first = false;
    }
    if (first) out << "0";
    out << (r.rel == RowRel::Ge ? " >= " : r.rel == RowRel::Gt ? " > " : " = ");
    out << rat_to_string(r.rhs) << "\n";
  }
  return out.str();
}

}  // namespace epslog
