#include "epslog/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace epslog {

// ── Signature ───────────────────────────────────────────────────────────────

bool Signature::is_monadic_relational() const {
  if (has_equality || !constants.empty()) return false;
  for (const auto& [name, arity] : predicates)
    if (arity != 1) return false;
  return true;
}

void Signature::check() const {
  for (const auto& [name, arity] : predicates) {
    if (arity < 1)
      throw std::invalid_argument("predicate " + name + " has arity < 1");
    if (constants.count(name))
      throw std::invalid_argument("name " + name + " is both predicate and constant");
  }
}

// ── Formula factories ───────────────────────────────────────────────────────

Formula Formula::atom(std::string p, std::vector<Term> a) {
  Formula f;
  f.kind = FormulaKind::Atom;
  f.pred = std::move(p);
  f.args = std::move(a);
  return f;
}

Formula Formula::equal(Term l, Term r) {
  Formula f;
  f.kind = FormulaKind::Equal;
  f.args = {std::move(l), std::move(r)};
  return f;
}

Formula Formula::lnot(Formula g) {
  Formula f;
  f.kind = FormulaKind::Not;
  f.kids.push_back(std::move(g));
  return f;
}

Formula Formula::land(std::vector<Formula> fs) {
  if (fs.empty()) throw std::invalid_argument("empty conjunction");
  if (fs.size() == 1) return std::move(fs[0]);
  Formula f;
  f.kind = FormulaKind::And;
  f.kids = std::move(fs);
  return f;
}

Formula Formula::lor(std::vector<Formula> fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  if (fs.size() == 1) return std::move(fs[0]);
  Formula f;
  f.kind = FormulaKind::Or;
  f.kids = std::move(fs);
  return f;
}

Formula Formula::implies(Formula a, Formula b) {
  Formula f;
  f.kind = FormulaKind::Implies;
  f.kids.push_back(std::move(a));
  f.kids.push_back(std::move(b));
  return f;
}

Formula Formula::iff(Formula a, Formula b) {
  Formula f;
  f.kind = FormulaKind::Iff;
  f.kids.push_back(std::move(a));
  f.kids.push_back(std::move(b));
  return f;
}

Formula Formula::forall(std::string v, Formula g) {
  Formula f;
  f.kind = FormulaKind::Forall;
  f.var = std::move(v);
  f.kids.push_back(std::move(g));
  return f;
}

Formula Formula::exists(std::string v, Formula g) {
  Formula f;
  f.kind = FormulaKind::Exists;
  f.var = std::move(v);
  f.kids.push_back(std::move(g));
  return f;
}

// ── QuantifierKind / QSentence ──────────────────────────────────────────────

QuantifierKind QuantifierKind::weak_at_least(Rat e) {
  if (e < 0 || e > 1) throw std::invalid_argument("q-threshold outside [0,1]");
  return {Tag::WeakAtLeast, std::move(e)};
}

QuantifierKind QuantifierKind::strong_greater(Rat e) {
  if (e < 0 || e > 1) throw std::invalid_argument("q-threshold outside [0,1]");
  return {Tag::StrongGreater, std::move(e)};
}

void QSentence::check() const {
  if (!is_quantifier_free(matrix))
    throw std::invalid_argument("q-sentence matrix contains quantifiers");
  std::set<std::string> bound;
  for (const auto& [k, v] : prefix) {
    if (!bound.insert(v).second)
      throw std::invalid_argument("q-sentence prefix repeats variable " + v);
  }
  for (const auto& v : free_vars(matrix))
    if (!bound.count(v))
      throw std::invalid_argument("matrix variable " + v + " not in prefix");
}

std::string PropVar::to_string() const {
  std::string s = "p(" + prime;
  for (std::size_t i = 0; i < index.size(); ++i) s += (i == 0 ? ";" : ",") + index[i];
  s += ")";
  return s;
}

// ── Queries ─────────────────────────────────────────────────────────────────

static void free_vars_rec(const Formula& f, std::set<std::string>& bound,
                          std::set<std::string>& out) {
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (const auto& t : f.args)
        if (t.kind == TermKind::Variable && !bound.count(t.name)) out.insert(t.name);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool fresh = bound.insert(f.var).second;
      free_vars_rec(f.kids[0], bound, out);
      if (fresh) bound.erase(f.var);
      return;
    }
    default:
      for (const auto& k : f.kids) free_vars_rec(k, bound, out);
  }
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

bool is_quantifier_free(const Formula& f) {
  if (f.kind == FormulaKind::Forall || f.kind == FormulaKind::Exists) return false;
  return std::all_of(f.kids.begin(), f.kids.end(), is_quantifier_free);
}

bool is_prenex(const Formula& f) {
  const Formula* g = &f;
  while (g->kind == FormulaKind::Forall || g->kind == FormulaKind::Exists)
    g = &g->kids[0];
  return is_quantifier_free(*g);
}

void check_well_formed(const Formula& f, const Signature& sig) {
  switch (f.kind) {
    case FormulaKind::Atom: {
      auto it = sig.predicates.find(f.pred);
      if (it == sig.predicates.end())
        throw std::invalid_argument("undeclared predicate " + f.pred);
      if (static_cast<int>(f.args.size()) != it->second)
        throw std::invalid_argument("arity mismatch for " + f.pred + ": got " +
                                    std::to_string(f.args.size()) + ", declared " +
                                    std::to_string(it->second));
      for (const auto& t : f.args)
        if (t.kind == TermKind::Constant && !sig.constants.count(t.name))
          throw std::invalid_argument("undeclared constant " + t.name);
      return;
    }
    case FormulaKind::Equal:
      if (!sig.has_equality)
        throw std::invalid_argument("equality used but not in signature");
      for (const auto& t : f.args)
        if (t.kind == TermKind::Constant && !sig.constants.count(t.name))
          throw std::invalid_argument("undeclared constant " + t.name);
      return;
    default:
      for (const auto& k : f.kids) check_well_formed(k, sig);
  }
}

// ── NNF ─────────────────────────────────────────────────────────────────────

static Formula nnf_pos(const Formula& f);
static Formula nnf_neg(const Formula& f);

static Formula nnf_pos(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return f;
    case FormulaKind::Not:
      return nnf_neg(f.kids[0]);
    case FormulaKind::And:
    case FormulaKind::Or: {
      Formula g;
      g.kind = f.kind;
      for (const auto& k : f.kids) g.kids.push_back(nnf_pos(k));
      return g;
    }
    case FormulaKind::Implies:
      return Formula::lor({nnf_neg(f.kids[0]), nnf_pos(f.kids[1])});
    case FormulaKind::Iff:
      return Formula::land({Formula::lor({nnf_neg(f.kids[0]), nnf_pos(f.kids[1])}),
                            Formula::lor({nnf_neg(f.kids[1]), nnf_pos(f.kids[0])})});
    case FormulaKind::Forall:
      return Formula::forall(f.var, nnf_pos(f.kids[0]));
    case FormulaKind::Exists:
      return Formula::exists(f.var, nnf_pos(f.kids[0]));
  }
  throw std::logic_error("unreachable");
}

static Formula nnf_neg(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return Formula::lnot(f);
    case FormulaKind::Not:
      return nnf_pos(f.kids[0]);
    case FormulaKind::And: {
      Formula g;
      g.kind = FormulaKind::Or;
      for (const auto& k : f.kids) g.kids.push_back(nnf_neg(k));
      return g;
    }
    case FormulaKind::Or: {
      Formula g;
      g.kind = FormulaKind::And;
      for (const auto& k : f.kids) g.kids.push_back(nnf_neg(k));
      return g;
    }
    case FormulaKind::Implies:
      return Formula::land({nnf_pos(f.kids[0]), nnf_neg(f.kids[1])});
    case FormulaKind::Iff:
      // ¬(a↔b) = ¬(a→b) ∨ ¬(b→a)
      return Formula::lor({Formula::land({nnf_pos(f.kids[0]), nnf_neg(f.kids[1])}),
                           Formula::land({nnf_pos(f.kids[1]), nnf_neg(f.kids[0])})});
    case FormulaKind::Forall:
      return Formula::exists(f.var, nnf_neg(f.kids[0]));
    case FormulaKind::Exists:
      return Formula::forall(f.var, nnf_neg(f.kids[0]));
  }
  throw std::logic_error("unreachable");
}

Formula to_nnf(const Formula& f) { return nnf_pos(f); }

// ── Renaming and substitution ───────────────────────────────────────────────

static void collect_var_names(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.args)
    if (t.kind == TermKind::Variable) out.insert(t.name);
  if (f.kind == FormulaKind::Forall || f.kind == FormulaKind::Exists) out.insert(f.var);
  for (const auto& k : f.kids) collect_var_names(k, out);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + "_" + std::to_string(k);
    if (!taken.count(cand)) return cand;
  }
}

// Substitutes free occurrences of variable `v` by `t`. Callers only pass
// terms that cannot be captured (fresh variables or constants).
static Formula subst_var(const Formula& f, const std::string& v, const Term& t) {
  Formula g = f;
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (auto& a : g.args)
        if (a.kind == TermKind::Variable && a.name == v) a = t;
      return g;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      if (f.var == v) return g;  // rebound below
      g.kids[0] = subst_var(f.kids[0], v, t);
      return g;
    default:
      for (auto& k : g.kids) k = subst_var(k, v, t);
      return g;
  }
}

static Formula rename_apart_rec(const Formula& f,
                                std::map<std::string, std::string>& env,
                                std::set<std::string>& taken) {
  Formula g = f;
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (auto& a : g.args)
        if (a.kind == TermKind::Variable) {
          auto it = env.find(a.name);
          if (it != env.end()) a.name = it->second;
        }
      return g;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      std::string nv = fresh_name(f.var, taken);
      taken.insert(nv);
      auto it = env.find(f.var);
      std::string saved;
      bool had = it != env.end();
      if (had) saved = it->second;
      env[f.var] = nv;
      g.var = nv;
      g.kids[0] = rename_apart_rec(f.kids[0], env, taken);
      if (had)
        env[f.var] = saved;
      else
        env.erase(f.var);
      return g;
    }
    default:
      for (auto& k : g.kids) k = rename_apart_rec(k, env, taken);
      return g;
  }
}

// Makes all binders pairwise distinct and distinct from free variables.
static Formula rename_apart(const Formula& f) {
  std::set<std::string> taken = free_vars(f);
  std::map<std::string, std::string> env;
  return rename_apart_rec(f, env, taken);
}

// ── Prenexing ───────────────────────────────────────────────────────────────

struct PrenexParts {
  std::vector<std::pair<FormulaKind, std::string>> prefix;
  Formula matrix;
};

static PrenexParts pull_quantifiers(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      PrenexParts inner = pull_quantifiers(f.kids[0]);
      inner.prefix.insert(inner.prefix.begin(), {f.kind, f.var});
      return inner;
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      PrenexParts out;
      Formula m;
      m.kind = f.kind;
      for (const auto& k : f.kids) {
        PrenexParts p = pull_quantifiers(k);
        out.prefix.insert(out.prefix.end(), p.prefix.begin(), p.prefix.end());
        m.kids.push_back(std::move(p.matrix));
      }
      out.matrix = std::move(m);
      return out;
    }
    default:
      // NNF input: Not sits on literals only; Implies/Iff already eliminated.
      return {{}, f};
  }
}

Formula to_prenex(const Formula& f) {
  Formula g = rename_apart(to_nnf(f));
  PrenexParts p = pull_quantifiers(g);
  Formula out = std::move(p.matrix);
  for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it)
    out = (it->first == FormulaKind::Forall) ? Formula::forall(it->second, std::move(out))
                                             : Formula::exists(it->second, std::move(out));
  return out;
}

// ── Coercions ───────────────────────────────────────────────────────────────

static QSentence coerce(const Formula& f, const Rat& eps, bool e_mode) {
  if (!is_sentence(f)) throw std::invalid_argument("coercion requires a sentence");
  if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon outside [0,1]");
  Formula p = to_prenex(f);
  QSentence q;
  const Formula* g = &p;
  while (g->kind == FormulaKind::Forall || g->kind == FormulaKind::Exists) {
    QuantifierKind k;
    if (g->kind == FormulaKind::Forall)
      k = e_mode ? QuantifierKind::weak_at_least(Rat(1) - eps) : QuantifierKind::all();
    else
      k = e_mode ? QuantifierKind::exist() : QuantifierKind::strong_greater(eps);
    q.prefix.emplace_back(k, g->var);
    g = &g->kids[0];
  }
  q.matrix = *g;
  return q;
}

QSentence e_coerce(const Formula& f, const Rat& eps) { return coerce(f, eps, true); }
QSentence f_coerce(const Formula& f, const Rat& eps) { return coerce(f, eps, false); }

// ── Relativization ──────────────────────────────────────────────────────────

Formula relativize(const Formula& f, const std::string& unary_pred) {
  if (!is_prenex(f)) throw std::invalid_argument("relativize requires prenex input");
  if (f.kind == FormulaKind::Forall) {
    Formula guard = Formula::atom(unary_pred, {Term::var(f.var)});
    return Formula::forall(f.var,
                           Formula::implies(std::move(guard), relativize(f.kids[0], unary_pred)));
  }
  if (f.kind == FormulaKind::Exists) {
    Formula guard = Formula::atom(unary_pred, {Term::var(f.var)});
    return Formula::exists(
        f.var, Formula::land({std::move(guard), relativize(f.kids[0], unary_pred)}));
  }
  return f;
}

// ── Validity conversion ─────────────────────────────────────────────────────

Formula validity_convert(const Formula& f) {
  if (!is_prenex(f)) throw std::invalid_argument("validity_convert requires prenex input");
  if (!is_sentence(f)) throw std::invalid_argument("validity_convert requires a sentence");
  std::vector<std::pair<FormulaKind, std::string>> prefix;
  const Formula* g = &f;
  while (g->kind == FormulaKind::Forall || g->kind == FormulaKind::Exists) {
    prefix.emplace_back(g->kind, g->var);
    g = &g->kids[0];
  }
  std::set<std::string> names;
  collect_var_names(f, names);
  std::string y = fresh_name("y", names);

  Formula matrix = *g;
  std::vector<std::string> universals;
  for (const auto& [k, v] : prefix) {
    if (k == FormulaKind::Forall)
      universals.push_back(v);
    else
      matrix = subst_var(matrix, v, Term::var(y));
  }
  for (auto it = universals.rbegin(); it != universals.rend(); ++it)
    matrix = Formula::forall(*it, std::move(matrix));
  return Formula::forall(y, std::move(matrix));
}

// ── Propositionalization ────────────────────────────────────────────────────

static PropFormula prop_rec(const Formula& f, std::vector<PropVar>& vars,
                            std::map<PropVar, int>& seen) {
  PropFormula out;
  switch (f.kind) {
    case FormulaKind::Equal:
      throw std::invalid_argument("propositionalize rejects equality atoms");
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      throw std::invalid_argument("propositionalize requires a universal-prenex input");
    case FormulaKind::Atom: {
      PropVar v{f.pred, {}};
      for (const auto& t : f.args) v.index.push_back(t.name);
      auto [it, fresh] = seen.try_emplace(v, static_cast<int>(vars.size()));
      if (fresh) vars.push_back(v);
      out.kind = PropFormula::Kind::Var;
      out.var = it->second;
      return out;
    }
    case FormulaKind::Not:
      out.kind = PropFormula::Kind::Not;
      break;
    case FormulaKind::And:
      out.kind = PropFormula::Kind::And;
      break;
    case FormulaKind::Or:
      out.kind = PropFormula::Kind::Or;
      break;
    case FormulaKind::Implies:
      out.kind = PropFormula::Kind::Implies;
      break;
    case FormulaKind::Iff:
      out.kind = PropFormula::Kind::Iff;
      break;
  }
  for (const auto& k : f.kids) out.kids.push_back(prop_rec(k, vars, seen));
  return out;
}

Propositionalization propositionalize(const Formula& f) {
  const Formula* g = &f;
  while (g->kind == FormulaKind::Forall) g = &g->kids[0];
  if (!is_quantifier_free(*g))
    throw std::invalid_argument("propositionalize requires a universal-prenex input");
  Propositionalization out;
  std::map<PropVar, int> seen;
  out.formula = prop_rec(*g, out.vars, seen);
  return out;
}

// ── Printing ────────────────────────────────────────────────────────────────

std::string print_formula(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Atom: {
      std::string s = "(" + f.pred;
      for (const auto& t : f.args) s += " " + t.name;
      return s + ")";
    }
    case FormulaKind::Equal:
      return "(= " + f.args[0].name + " " + f.args[1].name + ")";
    case FormulaKind::Not:
      return "(not " + print_formula(f.kids[0]) + ")";
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::string s = f.kind == FormulaKind::And ? "(and" : "(or";
      for (const auto& k : f.kids) s += " " + print_formula(k);
      return s + ")";
    }
    case FormulaKind::Implies:
      return "(implies " + print_formula(f.kids[0]) + " " + print_formula(f.kids[1]) + ")";
    case FormulaKind::Iff:
      return "(iff " + print_formula(f.kids[0]) + " " + print_formula(f.kids[1]) + ")";
    case FormulaKind::Forall:
      return "(forall " + f.var + " " + print_formula(f.kids[0]) + ")";
    case FormulaKind::Exists:
      return "(exists " + f.var + " " + print_formula(f.kids[0]) + ")";
  }
  throw std::logic_error("unreachable");
}

std::string print_quantifier(const QuantifierKind& k) {
  switch (k.tag) {
    case QuantifierKind::Tag::Exists:
      return "exists";
    case QuantifierKind::Tag::Forall:
      return "forall";
    case QuantifierKind::Tag::WeakAtLeast:
      return "qgeq " + rat_to_string(k.eps);
    case QuantifierKind::Tag::StrongGreater:
      return "qgt " + rat_to_string(k.eps);
  }
  throw std::logic_error("unreachable");
}

std::string print_qsentence(const QSentence& q) {
  std::string out = print_formula(q.matrix);
  for (auto it = q.prefix.rbegin(); it != q.prefix.rend(); ++it)
    out = "(" + print_quantifier(it->first) + " " + it->second + " " + out + ")";
  return out;
}

}  // namespace epslog
