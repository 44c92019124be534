#include "epslog/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace epslog {

int FiniteModel::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == label) return static_cast<int>(i);
  return -1;
}

bool FiniteModel::holds(const std::string& pred, const std::vector<int>& tuple) const {
  auto it = relations.find(pred);
  return it != relations.end() && it->second.count(tuple) != 0;
}

Rat FiniteModel::mass_of(const std::vector<char>& members) const {
  Rat total(0);
  for (std::size_t i = 0; i < universe.size() && i < members.size(); ++i)
    if (members[i]) total += measure[i];
  return total;
}

std::vector<std::string> validate_model(const FiniteModel& m) {
  std::vector<std::string> errs;
  if (m.universe.empty()) errs.push_back("universe is empty");
  std::set<std::string> seen;
  for (const auto& e : m.universe)
    if (!seen.insert(e).second) errs.push_back("duplicate element label " + e);
  if (m.measure.size() != m.universe.size()) {
    errs.push_back("measure assigns " + std::to_string(m.measure.size()) +
                   " values for " + std::to_string(m.universe.size()) + " elements");
  } else {
    Rat sum(0);
    for (std::size_t i = 0; i < m.measure.size(); ++i) {
      if (m.measure[i] < 0)
        errs.push_back("negative mass " + rat_to_string(m.measure[i]) + " on " +
                       m.universe[i]);
      sum += m.measure[i];
    }
    if (!m.universe.empty() && sum != 1)
      errs.push_back("measure sum " + rat_to_string(sum) + " != 1");
  }
  int n = static_cast<int>(m.universe.size());
  for (const auto& [pred, tuples] : m.relations) {
    auto it = m.sig.predicates.find(pred);
    if (it == m.sig.predicates.end()) {
      errs.push_back("relation " + pred + " not in signature");
      continue;
    }
    for (const auto& t : tuples) {
      if (static_cast<int>(t.size()) != it->second)
        errs.push_back("arity mismatch in relation " + pred);
      for (int idx : t)
        if (idx < 0 || idx >= n) errs.push_back("relation " + pred + " uses unknown element");
    }
  }
  for (const auto& [c, idx] : m.constants) {
    if (!m.sig.constants.count(c)) errs.push_back("constant " + c + " not in signature");
    if (idx < 0 || idx >= n) errs.push_back("constant " + c + " maps outside the universe");
  }
  for (const auto& c : m.sig.constants)
    if (!m.constants.count(c)) errs.push_back("constant " + c + " has no interpretation");
  return errs;
}

int env_lookup(const Env& env, const std::string& var) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == var) return it->second;
  throw std::invalid_argument("unbound variable " + var);
}

static int term_value(const FiniteModel& m, const Term& t, const Env& env) {
  if (t.kind == TermKind::Variable) return env_lookup(env, t.name);
  auto it = m.constants.find(t.name);
  if (it == m.constants.end()) throw std::invalid_argument("unbound constant " + t.name);
  return it->second;
}

bool classical_eval(const FiniteModel& m, const Formula& f, const Env& env) {
  switch (f.kind) {
    case FormulaKind::Atom: {
      std::vector<int> tuple;
      tuple.reserve(f.args.size());
      for (const auto& t : f.args) tuple.push_back(term_value(m, t, env));
      return m.holds(f.pred, tuple);
    }
    case FormulaKind::Equal:
      return term_value(m, f.args[0], env) == term_value(m, f.args[1], env);
    case FormulaKind::Not:
      return !classical_eval(m, f.kids[0], env);
    case FormulaKind::And:
      return std::all_of(f.kids.begin(), f.kids.end(),
                         [&](const Formula& k) { return classical_eval(m, k, env); });
    case FormulaKind::Or:
      return std::any_of(f.kids.begin(), f.kids.end(),
                         [&](const Formula& k) { return classical_eval(m, k, env); });
    case FormulaKind::Implies:
      return !classical_eval(m, f.kids[0], env) || classical_eval(m, f.kids[1], env);
    case FormulaKind::Iff:
      return classical_eval(m, f.kids[0], env) == classical_eval(m, f.kids[1], env);
    case FormulaKind::Forall: {
      Env e = env;
      e.emplace_back(f.var, 0);
      for (int a = 0; a < static_cast<int>(m.universe.size()); ++a) {
        e.back().second = a;
        if (!classical_eval(m, f.kids[0], e)) return false;
      }
      return true;
    }
    case FormulaKind::Exists: {
      Env e = env;
      e.emplace_back(f.var, 0);
      for (int a = 0; a < static_cast<int>(m.universe.size()); ++a) {
        e.back().second = a;
        if (classical_eval(m, f.kids[0], e)) return true;
      }
      return false;
    }
  }
  throw std::logic_error("unreachable");
}

// ── Monadic quotient ────────────────────────────────────────────────────────

FiniteModel quotient_monadic(const FiniteModel& m) {
  if (!m.sig.is_monadic_relational())
    throw std::invalid_argument("quotient_monadic requires a monadic relational signature");
  std::vector<std::string> preds;
  for (const auto& [p, a] : m.sig.predicates) preds.push_back(p);

  auto cell_of = [&](int elem) {
    unsigned mask = 0;
    for (std::size_t l = 0; l < preds.size(); ++l)
      if (m.holds(preds[l], {elem})) mask |= 1u << l;
    return mask;
  };

  std::map<unsigned, Rat> cells;  // mask -> mass, keyed ascending
  for (int a = 0; a < static_cast<int>(m.universe.size()); ++a)
    cells[cell_of(a)] += m.measure[a];

  FiniteModel q;
  q.sig = m.sig;
  for (const auto& p : preds) q.relations[p];
  for (const auto& [mask, mass] : cells) {
    std::string label = "u";
    for (std::size_t l = 0; l < preds.size(); ++l)
      if (mask & (1u << l)) label += std::to_string(l + 1);
    int idx = static_cast<int>(q.universe.size());
    q.universe.push_back(label);
    q.measure.push_back(mass);
    for (std::size_t l = 0; l < preds.size(); ++l)
      if (mask & (1u << l)) q.relations[preds[l]].insert({idx});
  }
  return q;
}

// ── Enumeration ─────────────────────────────────────────────────────────────

namespace {

// All t in N^k with sum == w, ascending lexicographic.
void weight_vectors(int k, int w, std::vector<int>& cur,
                    const std::function<void(const std::vector<int>&)>& emit) {
  if (k == 1) {
    cur.push_back(w);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int first = 0; first <= w; ++first) {
    cur.push_back(first);
    weight_vectors(k - 1, w - first, cur, emit);
    cur.pop_back();
  }
}

int gcd_positive(const std::vector<int>& t) {
  int g = 0;
  for (int x : t)
    if (x > 0) g = std::gcd(g, x);
  return g;
}

}  // namespace

bool enumerate_models(const Signature& sig, int max_size, int max_denominator,
                      const std::function<bool(const FiniteModel&)>& visit) {
  sig.check();
  bool stopped = false;
  for (int w = 1; w <= max_denominator && !stopped; ++w) {
    for (int k = 1; k <= max_size && !stopped; ++k) {
      // Tuple spaces per predicate, in signature (alphabetical) order.
      std::vector<std::string> preds;
      std::vector<long long> spaces;
      for (const auto& [p, arity] : sig.predicates) {
        long long space = 1;
        for (int i = 0; i < arity; ++i) {
          space *= k;
          if (space > 62) throw std::invalid_argument("relation space too large to enumerate");
        }
        preds.push_back(p);
        spaces.push_back(space);
      }
      std::vector<std::string> consts(sig.constants.begin(), sig.constants.end());

      FiniteModel base;
      base.sig = sig;
      for (int i = 1; i <= k; ++i) base.universe.push_back("e" + std::to_string(i));

      std::vector<int> scratch;
      weight_vectors(k, w, scratch, [&](const std::vector<int>& t) {
        if (stopped) return;
        if (gcd_positive(t) != 1) return;  // canonical representative only
        base.measure.clear();
        for (int x : t) base.measure.emplace_back(x, w);

        // Odometer over relation assignments and constant interpretations.
        std::vector<unsigned long long> rel_bits(preds.size(), 0);
        std::vector<int> const_pick(consts.size(), 0);
        while (true) {
          base.relations.clear();
          for (std::size_t pi = 0; pi < preds.size(); ++pi) {
            auto& tuples = base.relations[preds[pi]];
            int arity = sig.predicates.at(preds[pi]);
            for (long long ti = 0; ti < spaces[pi]; ++ti) {
              if (!(rel_bits[pi] >> ti & 1ull)) continue;
              std::vector<int> tuple(arity);
              long long rest = ti;
              for (int pos = arity - 1; pos >= 0; --pos) {
                tuple[pos] = static_cast<int>(rest % k);
                rest /= k;
              }
              tuples.insert(std::move(tuple));
            }
          }
          base.constants.clear();
          for (std::size_t ci = 0; ci < consts.size(); ++ci)
            base.constants[consts[ci]] = const_pick[ci];

          if (visit(base)) {
            stopped = true;
            return;
          }

          // Advance odometer: constants fastest, then relations.
          std::size_t ci = 0;
          for (; ci < consts.size(); ++ci) {
            if (++const_pick[ci] < k) break;
            const_pick[ci] = 0;
          }
          if (ci < consts.size()) continue;
          std::size_t pi = 0;
          for (; pi < preds.size(); ++pi) {
            if (++rel_bits[pi] < (1ull << spaces[pi])) break;
            rel_bits[pi] = 0;
          }
          if (pi == preds.size()) break;
        }
      });
    }
  }
  return stopped;
}

std::vector<FiniteModel> enumerate_models_vec(const Signature& sig, int max_size,
                                              int max_denominator) {
  std::vector<FiniteModel> out;
  enumerate_models(sig, max_size, max_denominator, [&](const FiniteModel& m) {
    out.push_back(m);
    return false;
  });
  return out;
}

// ── Model files ─────────────────────────────────────────────────────────────

FiniteModel parse_model(const std::string& text, const Signature& sig) {
  FiniteModel m;
  m.sig = sig;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("model file line " + std::to_string(lineno) + ": " + msg);
  };
  auto need_elem = [&](const std::string& label) {
    int idx = m.index_of(label);
    if (idx < 0) fail("unknown element " + label);
    return idx;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "universe:") {
      std::string e;
      while (ls >> e) {
        if (m.index_of(e) >= 0) fail("duplicate element " + e);
        m.universe.push_back(e);
      }
      m.measure.assign(m.universe.size(), Rat(0));
    } else if (kw == "measure:") {
      if (m.universe.empty()) fail("measure before universe");
      std::string entry;
      while (ls >> entry) {
        auto eq = entry.find('=');
        if (eq == std::string::npos) fail("expected elem=rational, got " + entry);
        int idx = need_elem(entry.substr(0, eq));
        m.measure[idx] = parse_rat(entry.substr(eq + 1));
      }
    } else if (kw == "const") {
      std::string entry;
      if (!(ls >> entry)) fail("expected 'const name=elem'");
      auto eq = entry.find('=');
      if (eq == std::string::npos) fail("expected 'const name=elem'");
      std::string name = entry.substr(0, eq);
      if (!sig.constants.count(name)) fail("constant " + name + " not in signature");
      m.constants[name] = need_elem(entry.substr(eq + 1));
    } else if (kw == "rel") {
      std::string head;
      if (!(ls >> head)) fail("expected 'rel <pred>:'");
      if (head.empty() || head.back() != ':') fail("expected ':' after predicate name");
      std::string pred = head.substr(0, head.size() - 1);
      auto it = sig.predicates.find(pred);
      if (it == sig.predicates.end()) fail("predicate " + pred + " not in signature");
      int arity = it->second;
      auto& tuples = m.relations[pred];
      std::string tok;
      std::vector<int> tuple;
      bool in_tuple = false;
      while (ls >> tok) {
        while (!tok.empty() && tok.front() == '(') {
          if (in_tuple) fail("nested '('");
          in_tuple = true;
          tok.erase(tok.begin());
        }
        int closes = 0;
        while (!tok.empty() && tok.back() == ')') {
          ++closes;
          tok.pop_back();
        }
        if (!tok.empty()) {
          if (!in_tuple && arity != 1) fail("tuples of arity > 1 need parentheses");
          tuple.push_back(need_elem(tok));
        }
        if (!in_tuple && arity == 1 && !tuple.empty()) {
          tuples.insert(tuple);
          tuple.clear();
        }
        for (int c = 0; c < closes; ++c) {
          if (!in_tuple) fail("unbalanced ')'");
          in_tuple = false;
          if (static_cast<int>(tuple.size()) != arity)
            fail("tuple arity mismatch for " + pred);
          tuples.insert(tuple);
          tuple.clear();
        }
      }
      if (in_tuple) fail("unterminated tuple");
      if (!tuple.empty()) fail("stray elements outside tuple");
    } else {
      fail("unknown directive " + kw);
    }
  }
  return m;
}

std::string print_model(const FiniteModel& m) {
  std::ostringstream out;
  out << "universe:";
  for (const auto& e : m.universe) out << " " << e;
  out << "\nmeasure:";
  for (std::size_t i = 0; i < m.universe.size(); ++i)
    out << " " << m.universe[i] << "=" << rat_to_string(m.measure[i]);
  out << "\n";
  for (const auto& [c, idx] : m.constants)
    out << "const " << c << "=" << m.universe[idx] << "\n";
  for (const auto& [pred, tuples] : m.relations) {
    if (tuples.empty()) continue;
    out << "rel " << pred << ":";
    int arity = m.sig.predicates.count(pred) ? m.sig.predicates.at(pred) : -1;
    for (const auto& t : tuples) {
      if (arity == 1) {
        out << " " << m.universe[t[0]];
      } else {
        out << " (";
        for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << m.universe[t[i]];
        out << ")";
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace epslog
