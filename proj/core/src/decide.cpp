#include "epslog/decide.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

namespace epslog {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Satisfiable: return "satisfiable";
    case Verdict::Unsatisfiable: return "unsatisfiable";
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::BudgetExhausted: return "budget_exhausted";
  }
  throw std::logic_error("unreachable");
}

// ── Tautology check ─────────────────────────────────────────────────────────

namespace {

bool eval_prop(const PropFormula& f, std::uint32_t bits) {
  switch (f.kind) {
    case PropFormula::Kind::Var:
      return (bits >> f.var) & 1u;
    case PropFormula::Kind::Not:
      return !eval_prop(f.kids[0], bits);
    case PropFormula::Kind::And:
      return std::all_of(f.kids.begin(), f.kids.end(),
                         [&](const PropFormula& k) { return eval_prop(k, bits); });
    case PropFormula::Kind::Or:
      return std::any_of(f.kids.begin(), f.kids.end(),
                         [&](const PropFormula& k) { return eval_prop(k, bits); });
    case PropFormula::Kind::Implies:
      return !eval_prop(f.kids[0], bits) || eval_prop(f.kids[1], bits);
    case PropFormula::Kind::Iff:
      return eval_prop(f.kids[0], bits) == eval_prop(f.kids[1], bits);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TautResult taut_check(const Propositionalization& p) {
  int n = static_cast<int>(p.vars.size());
  if (n > kTautVarGuard)
    throw std::invalid_argument("taut_check: " + std::to_string(n) +
                                " variables exceed the guard of " +
                                std::to_string(kTautVarGuard));
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    if (!eval_prop(p.formula, static_cast<std::uint32_t>(bits))) {
      TautResult r{false, {}};
      for (int i = 0; i < n; ++i) r.falsifying.emplace_back(p.vars[i], (bits >> i) & 1u);
      return r;
    }
  }
  return {true, {}};
}

// ── ε = 0 decision ──────────────────────────────────────────────────────────

namespace {

bool contains_equality(const Formula& f) {
  if (f.kind == FormulaKind::Equal) return true;
  return std::any_of(f.kids.begin(), f.kids.end(), contains_equality);
}

// Countermodel for a failed 0F-validity: the universe hosts one element per
// term name in the matrix instance, relations come from the falsifying
// assignment, and all mass sits on the fresh universal variable's element.
FiniteModel synthesize_countermodel(const Formula& converted, const Signature& sig,
                                    const Propositionalization& prop,
                                    const std::vector<std::pair<PropVar, bool>>& assignment) {
  FiniteModel m;
  m.sig = sig;
  // converted = forall y ... ; y's element carries measure 1.
  const std::string& y = converted.var;
  m.universe.push_back(y);
  auto intern = [&](const std::string& name) {
    int idx = m.index_of(name);
    if (idx >= 0) return idx;
    m.universe.push_back(name);
    return static_cast<int>(m.universe.size()) - 1;
  };
  for (const auto& v : prop.vars)
    for (const auto& t : v.index) intern(t);
  for (const auto& [pv, val] : assignment) {
    if (!val) continue;
    std::vector<int> tuple;
    for (const auto& t : pv.index) tuple.push_back(m.index_of(t));
    m.relations[pv.prime].insert(std::move(tuple));
  }
  for (const auto& c : sig.constants) m.constants[c] = intern(c);
  m.measure.assign(m.universe.size(), Rat(0));
  m.measure[0] = 1;
  return m;
}

}  // namespace

DecisionOutcome decide_zero(const Formula& f, ZeroProblem problem, const Signature& sig) {
  check_well_formed(f, sig);
  if (!is_sentence(f)) throw std::invalid_argument("decide_zero requires a sentence");
  if (contains_equality(f))
    throw std::invalid_argument("decide_zero rejects equality (see propositional reduction)");

  bool sat_problem = problem == ZeroProblem::ZeroESatFinite ||
                     problem == ZeroProblem::ZeroESatCountable;
  // 0E-satisfiability of f == not 0F-validity of ¬f.
  Formula target = sat_problem ? Formula::lnot(f) : f;

  Formula prenex = to_prenex(target);
  Formula converted = validity_convert(prenex);
  Propositionalization prop = propositionalize(converted);
  TautResult taut = taut_check(prop);

  DecisionOutcome out;
  if (taut.tautology) {
    out.verdict = sat_problem ? Verdict::Unsatisfiable : Verdict::Valid;
    return out;
  }

  out.certificate_assignment = taut.falsifying;
  FiniteModel counter = synthesize_countermodel(converted, sig, prop, taut.falsifying);
  if (sat_problem) {
    out.verdict = Verdict::Satisfiable;
    if (eval_e(counter, f, Rat(0))) out.witness = std::move(counter);
    return out;
  }
  out.verdict = Verdict::Invalid;
  if (!eval_f(counter, f, Rat(0))) out.counter = std::move(counter);
  return out;
}

// ── Monadic decision ────────────────────────────────────────────────────────

namespace {

struct MonadicSearch {
  const QSentence& q;
  std::vector<std::string> preds;      // sorted predicate names, bit l = preds[l]
  std::vector<int> cells;              // universe under test (cell bitmasks)
  std::vector<QuantifierKind> kinds;
  std::map<std::string, int> var_pos;  // prefix variable -> level index

  using Row = std::pair<QuantifierKind::Tag, std::pair<Rat, std::vector<int>>>;
  std::set<Row> rows;
  bool positive_measures = false;

  std::map<std::vector<int>, bool> ok_memo;  // key: (k, tuple) flattened with k first

  explicit MonadicSearch(const QSentence& sentence) : q(sentence) {
    for (const auto& [k, v] : q.prefix) kinds.push_back(k);
    int i = 0;
    for (const auto& [k, v] : q.prefix) var_pos[v] = i++;
  }

  int n() const { return static_cast<int>(kinds.size()); }
  int usize() const { return static_cast<int>(cells.size()); }

  bool matrix_true(const std::vector<int>& tuple) const {
    return eval_matrix(q.matrix, tuple);
  }

  bool eval_matrix(const Formula& f, const std::vector<int>& tuple) const {
    switch (f.kind) {
      case FormulaKind::Atom: {
        // Monadic: exactly one variable argument.
        int pos = var_pos.at(f.args[0].name);
        int cell = cells[tuple[pos]];
        int bit = pred_bit(f.pred);
        return (cell >> bit) & 1;
      }
      case FormulaKind::Not:
        return !eval_matrix(f.kids[0], tuple);
      case FormulaKind::And:
        return std::all_of(f.kids.begin(), f.kids.end(),
                           [&](const Formula& k) { return eval_matrix(k, tuple); });
      case FormulaKind::Or:
        return std::any_of(f.kids.begin(), f.kids.end(),
                           [&](const Formula& k) { return eval_matrix(k, tuple); });
      case FormulaKind::Implies:
        return !eval_matrix(f.kids[0], tuple) || eval_matrix(f.kids[1], tuple);
      case FormulaKind::Iff:
        return eval_matrix(f.kids[0], tuple) == eval_matrix(f.kids[1], tuple);
      default:
        throw std::logic_error("matrix is not quantifier-free");
    }
  }

  int pred_bit(const std::string& p) const {
    auto it = std::lower_bound(preds.begin(), preds.end(), p);
    return static_cast<int>(it - preds.begin());
  }

  // Can the element chain `tuple` (levels 1..k fixed) be completed by some
  // structurally valid subtree? Measure conditions are the LP's business.
  bool ok_subtree(int k, std::vector<int>& tuple) {
    if (k == n()) return matrix_true(tuple);
    std::vector<int> key;
    key.push_back(k);
    key.insert(key.end(), tuple.begin(), tuple.end());
    auto it = ok_memo.find(key);
    if (it != ok_memo.end()) return it->second;
    bool ok = false;
    switch (kinds[k].tag) {
      case QuantifierKind::Tag::Exists: {
        for (int a = 0; a < usize() && !ok; ++a) {
          tuple.push_back(a);
          ok = ok_subtree(k + 1, tuple);
          tuple.pop_back();
        }
        break;
      }
      case QuantifierKind::Tag::Forall: {
        ok = true;
        for (int a = 0; a < usize() && ok; ++a) {
          tuple.push_back(a);
          ok = ok_subtree(k + 1, tuple);
          tuple.pop_back();
        }
        break;
      }
      case QuantifierKind::Tag::WeakAtLeast:
      case QuantifierKind::Tag::StrongGreater:
        ok = true;  // the empty node is structurally admissible
        break;
    }
    ok_memo[key] = ok;
    return ok;
  }

  std::vector<int> allowed_members(int k, std::vector<int>& tuple) {
    std::vector<int> out;
    for (int a = 0; a < usize(); ++a) {
      tuple.push_back(a);
      if (ok_subtree(k + 1, tuple)) out.push_back(a);
      tuple.pop_back();
    }
    return out;
  }

  // Candidate node sets for level k+1 (0-indexed kind k) under prefix class
  // `tuple`, in the order they should be tried.
  std::vector<std::vector<int>> candidates(int k, std::vector<int>& tuple) {
    std::vector<int> allowed = allowed_members(k, tuple);
    std::vector<std::vector<int>> out;
    switch (kinds[k].tag) {
      case QuantifierKind::Tag::Exists:
        for (int a : allowed) out.push_back({a});
        break;
      case QuantifierKind::Tag::Forall:
        if (static_cast<int>(allowed.size()) == usize()) out.push_back(allowed);
        break;
      case QuantifierKind::Tag::WeakAtLeast:
      case QuantifierKind::Tag::StrongGreater: {
        if (k + 1 == n()) {
          out.push_back(allowed);  // maximal node is optimal at the leaf level
          break;
        }
        // Interior threshold level: all subsets, decreasing size.
        int sz = static_cast<int>(allowed.size());
        std::vector<std::vector<int>> subsets;
        for (unsigned mask = 0; mask < (1u << sz); ++mask) {
          std::vector<int> sub;
          for (int i = 0; i < sz; ++i)
            if (mask & (1u << i)) sub.push_back(allowed[i]);
          subsets.push_back(std::move(sub));
        }
        std::stable_sort(subsets.begin(), subsets.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
        out = std::move(subsets);
        break;
      }
    }
    return out;
  }

  bool search(std::optional<FiniteModel>& witness, const Signature& sig) {
    std::vector<std::vector<int>> classes = {{}};
    rows.clear();
    ok_memo.clear();
    return level(0, classes, witness, sig);
  }

  bool level(int k, const std::vector<std::vector<int>>& classes,
             std::optional<FiniteModel>& witness, const Signature& sig) {
    if (k == n()) return try_lp(witness, sig);
    std::vector<std::vector<std::vector<int>>> cand;
    cand.reserve(classes.size());
    for (auto cls : classes) {
      std::vector<int> t = cls;
      cand.push_back(candidates(k, t));
      if (cand.back().empty()) return false;  // structurally dead class
    }
    std::vector<std::size_t> pick(classes.size(), 0);
    while (true) {
      // Install picks: rows + child classes.
      std::vector<Row> added;
      std::vector<std::vector<int>> next;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& node = cand[c][pick[c]];
        if (kinds[k].tag == QuantifierKind::Tag::WeakAtLeast ||
            kinds[k].tag == QuantifierKind::Tag::StrongGreater) {
          Row row{kinds[k].tag, {kinds[k].eps, node}};
          if (rows.insert(row).second) added.push_back(row);
        }
        if (k + 1 < n()) {
          for (int a : node) {
            next.push_back(classes[c]);
            next.back().push_back(a);
          }
        }
      }
      bool found = level(k + 1, next, witness, sig);
      for (const auto& r : added) rows.erase(r);
      if (found) return true;
      // Advance pick odometer.
      std::size_t c = 0;
      for (; c < classes.size(); ++c) {
        if (++pick[c] < cand[c].size()) break;
        pick[c] = 0;
      }
      if (c == classes.size()) return false;
    }
  }

  bool try_lp(std::optional<FiniteModel>& witness, const Signature& sig) {
    std::vector<std::string> names;
    for (int c : cells) names.push_back(cell_label(c));
    LinSystem lp(names);
    int u = usize();
    std::vector<Rat> coef(u, Rat(0));
    for (const auto& [tag, body] : rows) {
      const auto& [eps, members] = body;
      std::fill(coef.begin(), coef.end(), Rat(0));
      for (int a : members) coef[a] = 1;
      if (tag == QuantifierKind::Tag::WeakAtLeast)
        lp.add_ge(coef, eps);
      else
        lp.add_gt(coef, eps);
    }
    for (int a = 0; a < u; ++a) {
      std::fill(coef.begin(), coef.end(), Rat(0));
      coef[a] = 1;
      if (positive_measures)
        lp.add_gt(coef, Rat(0));
      else
        lp.add_ge(coef, Rat(0));
    }
    std::fill(coef.begin(), coef.end(), Rat(1));
    lp.add_eq(coef, Rat(1));
    LpResult res = feasible(lp);
    if (!res.feasible) return false;

    FiniteModel m;
    m.sig = sig;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      m.universe.push_back(cell_label(cells[i]));
      m.measure.push_back(res.point[i]);
    }
    for (std::size_t l = 0; l < preds.size(); ++l) {
      auto& tuples = m.relations[preds[l]];
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] >> l & 1) tuples.insert({static_cast<int>(i)});
    }
    witness = std::move(m);
    return true;
  }

  std::string cell_label(int mask) const {
    std::string s = "u";
    for (std::size_t l = 0; l < preds.size(); ++l)
      if (mask >> l & 1) s += std::to_string(l + 1);
    return s;
  }
};

DecisionOutcome decide_monadic_impl(const QSentence& q, const Signature& sig,
                                    bool positive_measures) {
  if (!sig.is_monadic_relational())
    throw std::invalid_argument("decide_monadic requires a monadic relational signature");
  q.check();
  check_well_formed(q.matrix, sig);

  DecisionOutcome out;
  if (q.prefix.empty()) {
    // Closed quantifier-free matrix over a monadic signature has no atoms;
    // evaluate on a singleton dummy model.
    FiniteModel dummy;
    dummy.sig = sig;
    dummy.universe = {"u"};
    dummy.measure = {Rat(1)};
    if (classical_eval(dummy, q.matrix)) {
      out.verdict = Verdict::Satisfiable;
      out.witness = dummy;
    } else {
      out.verdict = Verdict::Unsatisfiable;
    }
    return out;
  }

  MonadicSearch search(q);
  for (const auto& [p, a] : sig.predicates) search.preds.push_back(p);
  std::sort(search.preds.begin(), search.preds.end());
  search.positive_measures = positive_measures;

  int s = static_cast<int>(search.preds.size());
  if (s > 4)
    throw std::invalid_argument(
        "monadic decider limited to 4 predicates (cell-subset search space)");
  int ncells = 1 << s;
  // All nonempty cell subsets, smaller universes first.
  std::vector<unsigned> universes;
  for (unsigned mask = 1; mask < (1u << ncells); ++mask) universes.push_back(mask);
  std::stable_sort(universes.begin(), universes.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });

  for (unsigned mask : universes) {
    search.cells.clear();
    for (int c = 0; c < ncells; ++c)
      if (mask >> c & 1) search.cells.push_back(c);
    std::optional<FiniteModel> witness;
    if (search.search(witness, sig)) {
      if (!eval_q(*witness, q))
        throw std::logic_error("monadic decider produced a non-verifying witness");
      out.verdict = Verdict::Satisfiable;
      out.certificate_tree = find_qtree(*witness, q);
      out.witness = std::move(witness);
      return out;
    }
  }
  out.verdict = Verdict::Unsatisfiable;
  return out;
}

}  // namespace

DecisionOutcome decide_monadic(const QSentence& q, const Signature& sig) {
  return decide_monadic_impl(q, sig, false);
}

DecisionOutcome decide_monadic(const Formula& f, Mode mode, const Rat& eps,
                               const Signature& sig) {
  if (mode == Mode::F && eps == 1)
    throw std::invalid_argument("F-mode epsilon must be < 1");
  if (!is_sentence(f)) throw std::invalid_argument("decide_monadic requires a sentence");
  QSentence q = mode == Mode::E ? e_coerce(f, eps) : f_coerce(f, eps);
  DecisionOutcome out = decide_monadic_impl(q, sig, mode == Mode::F);
  if (out.witness) {
    bool ok = mode == Mode::E ? eval_e(*out.witness, f, eps) : eval_f(*out.witness, f, eps);
    if (!ok) throw std::logic_error("monadic decider witness fails the coerced sentence");
  }
  return out;
}

// ── Enumeration semi-decision ───────────────────────────────────────────────

DecisionOutcome semi_decide_finite_sat(const Formula& f, const Rat& eps, Mode mode,
                                       int budget, const Signature& sig, int max_size,
                                       int jobs) {
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  check_well_formed(f, sig);
  if (!is_sentence(f)) throw std::invalid_argument("semi_decide requires a sentence");
  if (max_size <= 0) max_size = budget;

  auto holds = [&](const FiniteModel& m) {
    return mode == Mode::E ? eval_e(m, f, eps) : eval_f(m, f, eps);
  };

  DecisionOutcome out;
  if (jobs <= 1) {
    enumerate_models(sig, max_size, budget, [&](const FiniteModel& m) {
      if (!holds(m)) return false;
      out.witness = m;
      return true;
    });
  } else {
    // Batched parallel evaluation; the lowest enumeration index wins.
    const std::size_t batch_size = 256;
    std::vector<FiniteModel> batch;
    auto flush = [&]() {
      if (batch.empty() || out.witness) return;
      std::atomic<std::size_t> hit{batch.size()};
      std::size_t nthreads = std::min<std::size_t>(jobs, batch.size());
      std::vector<std::thread> workers;
      for (std::size_t w = 0; w < nthreads; ++w) {
        workers.emplace_back([&, w]() {
          for (std::size_t i = w; i < batch.size(); i += nthreads) {
            if (i >= hit.load(std::memory_order_relaxed)) continue;
            if (holds(batch[i])) {
              std::size_t cur = hit.load(std::memory_order_relaxed);
              while (i < cur &&
                     !hit.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
              }
            }
          }
        });
      }
      for (auto& t : workers) t.join();
      if (hit.load() < batch.size()) out.witness = batch[hit.load()];
      batch.clear();
    };
    enumerate_models(sig, max_size, budget, [&](const FiniteModel& m) {
      batch.push_back(m);
      if (batch.size() >= batch_size) flush();
      return out.witness.has_value();
    });
    flush();
  }

  if (out.witness) {
    out.verdict = Verdict::Satisfiable;
  } else {
    out.verdict = Verdict::BudgetExhausted;
  }
  return out;
}

}  // namespace epslog
