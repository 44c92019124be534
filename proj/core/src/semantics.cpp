#include "epslog/semantics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace epslog {

const QTreeNode* QTreeNode::child(int elem) const {
  for (const auto& [e, n] : kids)
    if (e == elem) return &n;
  return nullptr;
}

// ── εE-truth ────────────────────────────────────────────────────────────────

static bool eval_e_nnf(const FiniteModel& m, const Formula& f, const Rat& eps, Env& env) {
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return classical_eval(m, f, env);
    case FormulaKind::Not:
      return !classical_eval(m, f.kids[0], env);  // literal in NNF
    case FormulaKind::And:
      for (const auto& k : f.kids)
        if (!eval_e_nnf(m, k, eps, env)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& k : f.kids)
        if (eval_e_nnf(m, k, eps, env)) return true;
      return false;
    case FormulaKind::Exists: {
      env.emplace_back(f.var, 0);
      bool found = false;
      for (int a = 0; a < static_cast<int>(m.universe.size()) && !found; ++a) {
        env.back().second = a;
        found = eval_e_nnf(m, f.kids[0], eps, env);
      }
      env.pop_back();
      return found;
    }
    case FormulaKind::Forall: {
      env.emplace_back(f.var, 0);
      Rat mass(0);
      for (int a = 0; a < static_cast<int>(m.universe.size()); ++a) {
        env.back().second = a;
        if (eval_e_nnf(m, f.kids[0], eps, env)) mass += m.measure[a];
      }
      env.pop_back();
      return mass >= Rat(1) - eps;
    }
    default:
      throw std::logic_error("NNF evaluator reached a non-NNF node");
  }
}

bool eval_e(const FiniteModel& m, const Formula& f, const Rat& eps, const Env& env) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon outside [0,1]");
  Formula nnf = to_nnf(f);
  Env e = env;
  return eval_e_nnf(m, nnf, eps, e);
}

// ── εF-truth ────────────────────────────────────────────────────────────────

static bool eval_f_nnf(const FiniteModel& m, const Formula& f, const Rat& eps, Env& env) {
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return classical_eval(m, f, env);
    case FormulaKind::Not:
      return !classical_eval(m, f.kids[0], env);
    case FormulaKind::And:
      for (const auto& k : f.kids)
        if (!eval_f_nnf(m, k, eps, env)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& k : f.kids)
        if (eval_f_nnf(m, k, eps, env)) return true;
      return false;
    case FormulaKind::Forall: {
      env.emplace_back(f.var, 0);
      bool all = true;
      for (int a = 0; a < static_cast<int>(m.universe.size()) && all; ++a) {
        env.back().second = a;
        all = eval_f_nnf(m, f.kids[0], eps, env);
      }
      env.pop_back();
      return all;
    }
    case FormulaKind::Exists: {
      env.emplace_back(f.var, 0);
      Rat mass(0);
      for (int a = 0; a < static_cast<int>(m.universe.size()); ++a) {
        env.back().second = a;
        if (eval_f_nnf(m, f.kids[0], eps, env)) mass += m.measure[a];
      }
      env.pop_back();
      return mass > eps;
    }
    default:
      throw std::logic_error("NNF evaluator reached a non-NNF node");
  }
}

bool eval_f(const FiniteModel& m, const Formula& f, const Rat& eps, const Env& env) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon outside [0,1]");
  Formula nnf = to_nnf(f);
  Env e = env;
  return eval_f_nnf(m, nnf, eps, e);
}

// ── q-truth ─────────────────────────────────────────────────────────────────
//
// The maximal-set recursion is exponential in the prefix length, which the
// Turing-machine encoding pushes past 15 variables. The evaluator below keeps
// the exact semantics but works on a partially evaluated matrix: decided
// atoms fold to constants, quantifiers whose variable no longer occurs in
// the residual matrix collapse to a single recursive call, and threshold
// levels stop scanning once the accumulated or remaining mass settles the
// comparison. Tests cross-check it against a naive reference recursion.

namespace {

struct SNode {
  enum class K { Const, Leaf, Not, And, Or, Implies, Iff };
  K k = K::Const;
  bool value = false;          // K::Const
  const Formula* leaf = nullptr;  // K::Leaf: Atom or Equal in the original matrix
  std::vector<SNode> kids;

  static SNode constant(bool b) {
    SNode n;
    n.k = K::Const;
    n.value = b;
    return n;
  }
};

bool env_has(const Env& env, const std::string& var) {
  for (const auto& [v, e] : env)
    if (v == var) return true;
  return false;
}

bool leaf_decided(const FiniteModel& m, const Formula& f, const Env& env) {
  for (const auto& t : f.args)
    if (t.kind == TermKind::Variable && !env_has(env, t.name)) return false;
  (void)m;
  return true;
}

SNode compile_matrix(const Formula& f) {
  SNode n;
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      n.k = SNode::K::Leaf;
      n.leaf = &f;
      return n;
    case FormulaKind::Not:
      n.k = SNode::K::Not;
      break;
    case FormulaKind::And:
      n.k = SNode::K::And;
      break;
    case FormulaKind::Or:
      n.k = SNode::K::Or;
      break;
    case FormulaKind::Implies:
      n.k = SNode::K::Implies;
      break;
    case FormulaKind::Iff:
      n.k = SNode::K::Iff;
      break;
    default:
      throw std::logic_error("q-sentence matrix contains a quantifier");
  }
  for (const auto& kid : f.kids) n.kids.push_back(compile_matrix(kid));
  return n;
}

SNode simplify(const FiniteModel& m, const SNode& n, const Env& env) {
  switch (n.k) {
    case SNode::K::Const:
      return n;
    case SNode::K::Leaf:
      if (leaf_decided(m, *n.leaf, env))
        return SNode::constant(classical_eval(m, *n.leaf, env));
      return n;
    case SNode::K::Not: {
      SNode kid = simplify(m, n.kids[0], env);
      if (kid.k == SNode::K::Const) return SNode::constant(!kid.value);
      SNode out;
      out.k = SNode::K::Not;
      out.kids.push_back(std::move(kid));
      return out;
    }
    case SNode::K::And:
    case SNode::K::Or: {
      bool is_and = n.k == SNode::K::And;
      SNode out;
      out.k = n.k;
      for (const auto& kid : n.kids) {
        SNode s = simplify(m, kid, env);
        if (s.k == SNode::K::Const) {
          if (s.value != is_and) return SNode::constant(!is_and);  // dominating
          continue;                                                // neutral
        }
        out.kids.push_back(std::move(s));
      }
      if (out.kids.empty()) return SNode::constant(is_and);
      if (out.kids.size() == 1) return std::move(out.kids[0]);
      return out;
    }
    case SNode::K::Implies: {
      SNode a = simplify(m, n.kids[0], env);
      SNode b = simplify(m, n.kids[1], env);
      if (a.k == SNode::K::Const)
        return a.value ? b : SNode::constant(true);
      if (b.k == SNode::K::Const) {
        if (b.value) return SNode::constant(true);
        SNode out;
        out.k = SNode::K::Not;
        out.kids.push_back(std::move(a));
        return out;
      }
      SNode out;
      out.k = SNode::K::Implies;
      out.kids.push_back(std::move(a));
      out.kids.push_back(std::move(b));
      return out;
    }
    case SNode::K::Iff: {
      SNode a = simplify(m, n.kids[0], env);
      SNode b = simplify(m, n.kids[1], env);
      auto negate = [](SNode x) {
        SNode out;
        out.k = SNode::K::Not;
        out.kids.push_back(std::move(x));
        return out;
      };
      if (a.k == SNode::K::Const) return a.value ? std::move(b) : negate(std::move(b));
      if (b.k == SNode::K::Const) return b.value ? std::move(a) : negate(std::move(a));
      SNode out;
      out.k = SNode::K::Iff;
      out.kids.push_back(std::move(a));
      out.kids.push_back(std::move(b));
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

bool mentions_var(const SNode& n, const std::string& var) {
  if (n.k == SNode::K::Leaf) {
    for (const auto& t : n.leaf->args)
      if (t.kind == TermKind::Variable && t.name == var) return true;
    return false;
  }
  for (const auto& kid : n.kids)
    if (mentions_var(kid, var)) return true;
  return false;
}

// Applies quantifier `k` to a remainder of constant truth value: the
// satisfying set is all of M (mass 1) or empty (mass 0).
bool fold_constant(const QuantifierKind& k, bool remainder) {
  switch (k.tag) {
    case QuantifierKind::Tag::Exists:
    case QuantifierKind::Tag::Forall:
      return remainder;  // universe is nonempty
    case QuantifierKind::Tag::WeakAtLeast:
      return remainder ? true : k.eps == 0;
    case QuantifierKind::Tag::StrongGreater:
      return remainder ? k.eps < 1 : false;
  }
  throw std::logic_error("unreachable");
}

struct QEval {
  const FiniteModel& m;
  const QSentence& q;
  Rat total_mass;  // sum of all element masses (1 for valid models)

  bool run(std::size_t level, const SNode& matrix, Env& env) const {
    if (matrix.k == SNode::K::Const) {
      bool val = matrix.value;
      for (std::size_t k = level; k < q.prefix.size(); ++k)
        val = fold_constant(q.prefix[k].first, val);
      return val;
    }
    if (level == q.prefix.size())
      throw std::logic_error("undecided matrix below the last level");
    const auto& [kind, var] = q.prefix[level];

    if (!mentions_var(matrix, var)) {
      bool remainder = run(level + 1, matrix, env);
      return fold_constant(kind, remainder);
    }

    int n = static_cast<int>(m.universe.size());
    env.emplace_back(var, 0);
    bool result = false;
    switch (kind.tag) {
      case QuantifierKind::Tag::Exists: {
        for (int a = 0; a < n && !result; ++a) {
          env.back().second = a;
          result = run(level + 1, simplify(m, matrix, env), env);
        }
        break;
      }
      case QuantifierKind::Tag::Forall: {
        result = true;
        for (int a = 0; a < n && result; ++a) {
          env.back().second = a;
          result = run(level + 1, simplify(m, matrix, env), env);
        }
        break;
      }
      case QuantifierKind::Tag::WeakAtLeast:
      case QuantifierKind::Tag::StrongGreater: {
        bool weak = kind.tag == QuantifierKind::Tag::WeakAtLeast;
        Rat mass(0);
        Rat rest = total_mass;
        bool decided = false;
        for (int a = 0; a < n && !decided; ++a) {
          rest -= m.measure[a];
          env.back().second = a;
          if (run(level + 1, simplify(m, matrix, env), env)) mass += m.measure[a];
          if (weak ? mass >= kind.eps : mass > kind.eps) {
            result = true;
            decided = true;
          } else if (weak ? mass + rest < kind.eps : mass + rest <= kind.eps) {
            result = false;
            decided = true;
          }
        }
        if (!decided) result = weak ? mass >= kind.eps : mass > kind.eps;
        break;
      }
    }
    env.pop_back();
    return result;
  }
};

bool eval_q_from(const FiniteModel& m, const QSentence& q, std::size_t level, Env& env) {
  Rat total(0);
  for (const auto& r : m.measure) total += r;
  QEval ev{m, q, total};
  SNode matrix = simplify(m, compile_matrix(q.matrix), env);
  return ev.run(level, matrix, env);
}

}  // namespace

bool eval_q(const FiniteModel& m, const QSentence& q, const Env& env) {
  Env e = env;
  return eval_q_from(m, q, 0, e);
}

// ── Witness trees ───────────────────────────────────────────────────────────

static QTreeNode build_tree_rec(const FiniteModel& m, const QSentence& q,
                                std::size_t level, Env& env) {
  const auto& [kind, var] = q.prefix[level];
  int n = static_cast<int>(m.universe.size());
  QTreeNode node;
  env.emplace_back(var, 0);
  for (int a = 0; a < n; ++a) {
    env.back().second = a;
    if (eval_q_from(m, q, level + 1, env)) {
      node.elems.push_back(a);
      if (kind.tag == QuantifierKind::Tag::Exists) break;  // least witness
    }
  }
  for (int a : node.elems) {
    if (level + 1 < q.prefix.size()) {
      env.back().second = a;
      node.kids.emplace_back(a, build_tree_rec(m, q, level + 1, env));
    }
  }
  env.pop_back();
  return node;
}

std::optional<QTree> find_qtree(const FiniteModel& m, const QSentence& q) {
  if (!eval_q(m, q)) return std::nullopt;
  QTree t;
  for (const auto& [k, v] : q.prefix) t.levels.push_back(k);
  if (!q.prefix.empty()) {
    Env env;
    t.root = build_tree_rec(m, q, 0, env);
  }
  return t;
}

// Shape check: children exactly at non-leaf levels, one per member element.
static void check_shape(const QTreeNode& node, int level, int height) {
  for (int e : node.elems)
    if (e < 0) throw std::invalid_argument("malformed tree: negative element");
  if (!std::is_sorted(node.elems.begin(), node.elems.end()))
    throw std::invalid_argument("malformed tree: node set not sorted");
  if (level == height) {
    if (!node.kids.empty()) throw std::invalid_argument("malformed tree: leaf has children");
    return;
  }
  if (node.kids.size() != node.elems.size())
    throw std::invalid_argument("malformed tree: child map inconsistent with node set");
  for (std::size_t i = 0; i < node.elems.size(); ++i) {
    if (node.kids[i].first != node.elems[i])
      throw std::invalid_argument("malformed tree: child map inconsistent with node set");
    check_shape(node.kids[i].second, level + 1, height);
  }
}

static bool level_condition(const FiniteModel& m, const QuantifierKind& k,
                            const QTreeNode& node) {
  switch (k.tag) {
    case QuantifierKind::Tag::Exists:
      return !node.elems.empty();
    case QuantifierKind::Tag::Forall:
      return static_cast<int>(node.elems.size()) == static_cast<int>(m.universe.size());
    case QuantifierKind::Tag::WeakAtLeast:
    case QuantifierKind::Tag::StrongGreater: {
      Rat mass(0);
      for (int e : node.elems) mass += m.measure[e];
      return k.tag == QuantifierKind::Tag::WeakAtLeast ? mass >= k.eps : mass > k.eps;
    }
  }
  throw std::logic_error("unreachable");
}

static bool check_levels_rec(const FiniteModel& m, const std::vector<QuantifierKind>& levels,
                             const QTreeNode& node, std::size_t level) {
  if (!level_condition(m, levels[level], node)) return false;
  for (const auto& [e, kid] : node.kids)
    if (!check_levels_rec(m, levels, kid, level + 1)) return false;
  return true;
}

bool check_tree_levels(const FiniteModel& m, const std::vector<QuantifierKind>& levels,
                       const QTree& t) {
  if (static_cast<int>(levels.size()) != t.height())
    throw std::invalid_argument("level list length differs from tree height");
  if (t.height() == 0) return true;
  if (!t.root) throw std::invalid_argument("malformed tree: missing root");
  check_shape(*t.root, 1, t.height());
  return check_levels_rec(m, levels, *t.root, 0);
}

static bool check_brans_rec(const FiniteModel& m, const QSentence& q, const QTreeNode& node,
                            std::size_t level, Env& env) {
  const std::string& var = q.prefix[level].second;
  for (std::size_t i = 0; i < node.elems.size(); ++i) {
    env.emplace_back(var, node.elems[i]);
    bool ok;
    if (level + 1 == q.prefix.size())
      ok = classical_eval(m, q.matrix, env);
    else
      ok = check_brans_rec(m, q, node.kids[i].second, level + 1, env);
    env.pop_back();
    if (!ok) return false;
  }
  return true;
}

bool verify_qtree(const FiniteModel& m, const QSentence& q, const QTree& t) {
  if (t.height() != static_cast<int>(q.prefix.size()))
    throw std::invalid_argument("tree height differs from prefix length");
  std::vector<QuantifierKind> levels;
  for (const auto& [k, v] : q.prefix) levels.push_back(k);
  if (t.height() == 0) return classical_eval(m, q.matrix);
  if (!check_tree_levels(m, levels, t)) return false;
  Env env;
  return check_brans_rec(m, q, *t.root, 0, env);
}

// ── Wedge product ───────────────────────────────────────────────────────────

static void graft(QTreeNode& node, int depth, int t_height, const QTreeNode& u_root) {
  if (depth == t_height) {
    // node is a leaf of t: hang a copy of u under every member element.
    for (int e : node.elems) node.kids.emplace_back(e, u_root);
    return;
  }
  for (auto& [e, kid] : node.kids) graft(kid, depth + 1, t_height, u_root);
}

QTree wedge(const QTree& t, const QTree& u) {
  QTree out;
  out.levels = t.levels;
  out.levels.insert(out.levels.end(), u.levels.begin(), u.levels.end());
  if (t.height() == 0) {
    out.root = u.root;
    return out;
  }
  out.root = t.root;
  if (u.height() == 0) return out;
  graft(*out.root, 1, t.height(), *u.root);
  return out;
}

// ── Conjunction of q-sentences ──────────────────────────────────────────────

QSentence conjoin_qsentences(const QSentence& q1, const QSentence& q2) {
  std::set<std::string> taken;
  for (const auto& [k, v] : q1.prefix) taken.insert(v);
  for (const auto& v : free_vars(q1.matrix)) taken.insert(v);

  QSentence out;
  out.prefix = q1.prefix;
  Formula m2 = q2.matrix;
  std::map<std::string, std::string> ren;
  for (const auto& [k, v] : q2.prefix) {
    std::string nv = fresh_name(v, taken);
    taken.insert(nv);
    ren[v] = nv;
    out.prefix.emplace_back(k, nv);
  }
  // Rename q2's variables in its matrix (prefix variables are the only frees).
  std::function<Formula(const Formula&)> ren_fn = [&](const Formula& f) {
    Formula g = f;
    switch (f.kind) {
      case FormulaKind::Atom:
      case FormulaKind::Equal:
        for (auto& a : g.args)
          if (a.kind == TermKind::Variable) {
            auto it = ren.find(a.name);
            if (it != ren.end()) a.name = it->second;
          }
        return g;
      default:
        for (auto& k : g.kids) k = ren_fn(k);
        return g;
    }
  };
  m2 = ren_fn(m2);
  out.matrix = Formula::land({q1.matrix, std::move(m2)});
  return out;
}

// ── Serialization ───────────────────────────────────────────────────────────

static void print_node(const FiniteModel& m, const QTreeNode& node, int level, int via,
                       std::ostringstream& out) {
  for (int i = 1; i < level; ++i) out << "  ";
  out << "level " << level << " [set:";
  for (int e : node.elems) out << " " << m.universe[e];
  out << "]";
  if (via >= 0) out << " (via " << m.universe[via] << ")";
  out << "\n";
  for (const auto& [e, kid] : node.kids) print_node(m, kid, level + 1, e, out);
}

std::string print_qtree(const FiniteModel& m, const QTree& t) {
  std::ostringstream out;
  if (t.root) print_node(m, *t.root, 1, -1, out);
  return out.str();
}

}  // namespace epslog
