#include "epslog/encode.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace epslog {

// ── Machine description ─────────────────────────────────────────────────────

void TuringMachine::check() const {
  std::set<std::string> all(states.begin(), states.end());
  if (all.size() != states.size()) throw std::invalid_argument("duplicate state names");
  if (!all.count(init)) throw std::invalid_argument("initial state not declared");
  for (const auto& q : accepting)
    if (!all.count(q)) throw std::invalid_argument("accepting state " + q + " not declared");
  for (const auto& q : rejecting)
    if (!all.count(q)) throw std::invalid_argument("rejecting state " + q + " not declared");
  for (const auto& q : accepting)
    if (rejecting.count(q))
      throw std::invalid_argument("state " + q + " both accepting and rejecting");
  for (const auto& q : states) {
    if (accepting.count(q) || rejecting.count(q)) continue;
    for (int w = 0; w <= 1; ++w)
      if (!delta.count({q, w}))
        throw std::invalid_argument("transition missing for (" + q + ", " +
                                    std::to_string(w) + ")");
  }
  for (const auto& [key, val] : delta) {
    if (!all.count(key.first) || !all.count(std::get<0>(val)))
      throw std::invalid_argument("transition uses undeclared state");
    if (accepting.count(key.first) || rejecting.count(key.first))
      throw std::invalid_argument("transition out of a halting state");
    int w = key.second, w2 = std::get<1>(val);
    if (w < 0 || w > 1 || w2 < 0 || w2 > 1)
      throw std::invalid_argument("tape alphabet is {0,1}");
    char d = std::get<2>(val);
    if (d != 'L' && d != 'R') throw std::invalid_argument("direction must be L or R");
  }
}

TuringMachine parse_tm(const std::string& text) {
  TuringMachine tm;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("tm file line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "states:") {
      std::string s;
      while (ls >> s) tm.states.push_back(s);
    } else if (kw == "init:") {
      if (!(ls >> tm.init)) fail("missing initial state");
    } else if (kw == "accept:") {
      std::string s;
      while (ls >> s) tm.accepting.insert(s);
    } else if (kw == "reject:") {
      std::string s;
      while (ls >> s) tm.rejecting.insert(s);
    } else {
      // transition: q w -> q' w' D
      std::string w, arrow, q2, w2, dir;
      if (!(ls >> w >> arrow >> q2 >> w2 >> dir) || arrow != "->")
        fail("expected '<state> <sym> -> <state> <sym> <L|R>'");
      if ((w != "0" && w != "1") || (w2 != "0" && w2 != "1")) fail("symbols must be 0 or 1");
      if (dir != "L" && dir != "R") fail("direction must be L or R");
      auto key = std::make_pair(kw, w == "1" ? 1 : 0);
      if (tm.delta.count(key)) fail("duplicate transition for (" + kw + ", " + w + ")");
      tm.delta[key] = {q2, w2 == "1" ? 1 : 0, dir[0]};
    }
  }
  tm.check();
  return tm;
}

std::string print_tm(const TuringMachine& tm) {
  std::ostringstream out;
  out << "states:";
  for (const auto& s : tm.states) out << " " << s;
  out << "\ninit: " << tm.init << "\naccept:";
  for (const auto& s : tm.accepting) out << " " << s;
  out << "\nreject:";
  for (const auto& s : tm.rejecting) out << " " << s;
  out << "\n";
  for (const auto& [key, val] : tm.delta)
    out << key.first << " " << key.second << " -> " << std::get<0>(val) << " "
        << std::get<1>(val) << " " << std::get<2>(val) << "\n";
  return out.str();
}

// ── Simulation ──────────────────────────────────────────────────────────────

SimResult simulate(const TuringMachine& tm, int max_steps) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  tm.check();
  SimResult res;
  SimConfig cfg;
  cfg.state = tm.init;
  cfg.head = 1;
  cfg.tape.assign(1, 0);
  for (int t = 1; t <= max_steps; ++t) {
    res.history.push_back(cfg);
    if (tm.accepting.count(cfg.state) || tm.rejecting.count(cfg.state)) {
      res.halted = true;
      res.halt_time = t;
      return res;
    }
    if (t == max_steps) break;
    if (cfg.head > static_cast<int>(cfg.tape.size()))
      cfg.tape.resize(cfg.head, 0);
    int sym = cfg.tape[cfg.head - 1];
    const auto& [q2, w2, dir] = tm.delta.at({cfg.state, sym});
    cfg.tape[cfg.head - 1] = w2;
    cfg.state = q2;
    if (dir == 'R') {
      ++cfg.head;
      if (cfg.head > static_cast<int>(cfg.tape.size())) cfg.tape.resize(cfg.head, 0);
    } else {
      cfg.head = std::max(1, cfg.head - 1);
    }
  }
  return res;
}

// ── Encoding helpers ────────────────────────────────────────────────────────

namespace encode_detail {

namespace {

Term v(const std::string& name) { return Term::var(name); }

Formula eq(Term a, Term b) { return Formula::atom("eq", {std::move(a), std::move(b)}); }
Formula lt(Term a, Term b) { return Formula::atom("lt", {std::move(a), std::move(b)}); }

}  // namespace

Formula successor(const std::string& sv, const std::string& bv) {
  // sv ≻ bv, with one auxiliary variable per biconditional.
  std::string s1 = bv + "_lo", s2 = bv + "_hi";
  Formula below = Formula::forall(
      s1, Formula::iff(lt(v(s1), v(sv)),
                       Formula::lor({lt(v(s1), v(bv)), eq(v(s1), v(bv))})));
  Formula above = Formula::forall(
      s2, Formula::iff(lt(v(bv), v(s2)),
                       Formula::lor({lt(v(sv), v(s2)), eq(v(sv), v(s2))})));
  return Formula::land({lt(v(bv), v(sv)), std::move(below), std::move(above)});
}

Formula shifted_atom(const std::string& pred, const std::vector<ShiftedArg>& args) {
  std::vector<Term> final_args;
  std::vector<std::pair<std::string, Formula>> binders;  // primed var, successor cond
  for (const auto& a : args) {
    if (a.shift == 0) {
      final_args.push_back(v(a.var));
    } else if (a.shift == 1) {
      std::string nv = a.var + "_next";
      binders.emplace_back(nv, successor(nv, a.var));
      final_args.push_back(v(nv));
    } else {
      std::string pv = a.var + "_prev";
      binders.emplace_back(pv, successor(a.var, pv));
      final_args.push_back(v(pv));
    }
  }
  if (binders.empty()) return Formula::atom(pred, std::move(final_args));
  std::vector<Formula> conds;
  for (auto& [bv, cond] : binders) conds.push_back(std::move(cond));
  Formula out = Formula::implies(Formula::land(std::move(conds)),
                                 Formula::atom(pred, std::move(final_args)));
  for (auto it = binders.rbegin(); it != binders.rend(); ++it)
    out = Formula::forall(it->first, std::move(out));
  return out;
}

Formula relativize_deep(const Formula& f, const std::string& n) {
  switch (f.kind) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return f;
    case FormulaKind::Forall:
      return Formula::forall(
          f.var, Formula::implies(Formula::atom(n, {Term::var(f.var)}),
                                  relativize_deep(f.kids[0], n)));
    case FormulaKind::Exists:
      return Formula::exists(
          f.var, Formula::land({Formula::atom(n, {Term::var(f.var)}),
                                relativize_deep(f.kids[0], n)}));
    default: {
      Formula g = f;
      for (auto& k : g.kids) k = relativize_deep(k, n);
      return g;
    }
  }
}

}  // namespace encode_detail

// ── The encoding ────────────────────────────────────────────────────────────

namespace {

using encode_detail::relativize_deep;
using encode_detail::shifted_atom;
using encode_detail::successor;
using encode_detail::ShiftedArg;

std::string state_pred(const std::string& q) { return "S_" + q; }

}  // namespace

TMEncoding encode_tm(const TuringMachine& tm) {
  tm.check();
  if (tm.accepting.empty() && tm.rejecting.empty())
    throw std::invalid_argument("encoding needs an accepting or rejecting state");

  TMEncoding enc;
  Signature& sig = enc.sig;
  sig.predicates["N"] = 1;
  sig.predicates["eq"] = 2;
  sig.predicates["lt"] = 2;
  sig.predicates["R"] = 2;
  sig.predicates["T"] = 2;
  sig.predicates["H"] = 2;
  for (const auto& q : tm.states) sig.predicates[state_pred(q)] = 1;
  sig.constants = {"minc", "maxc"};

  auto v = [](const std::string& s) { return Term::var(s); };
  auto c = [](const std::string& s) { return Term::con(s); };
  auto eq = [&](Term a, Term b) { return Formula::atom("eq", {a, b}); };
  auto lt = [&](Term a, Term b) { return Formula::atom("lt", {a, b}); };
  auto N = [&](Term a) { return Formula::atom("N", {a}); };
  auto rel = [&](const Formula& f) { return relativize_deep(f, "N"); };

  auto add = [&](const std::string& name, const Formula& f, const Rat& eps) {
    enc.part_names.push_back(name);
    enc.sources.push_back(f);
    enc.part_eps.push_back(eps);
    enc.parts.push_back(e_coerce(f, eps));
  };

  const Rat zero(0), half(1, 2);

  // T0: equality axioms.
  add("eq_refl", Formula::forall("x", eq(v("x"), v("x"))), zero);
  add("eq_sym",
      Formula::forall("x", Formula::forall("y", Formula::implies(eq(v("x"), v("y")),
                                                                 eq(v("y"), v("x"))))),
      zero);
  add("eq_trans",
      Formula::forall(
          "x",
          Formula::forall(
              "y", Formula::forall(
                       "z", Formula::implies(
                                Formula::land({eq(v("x"), v("y")), eq(v("y"), v("z"))}),
                                eq(v("x"), v("z")))))),
      zero);

  // T0: indiscernability of identicals, one substituted position at a time.
  for (const auto& [pred, arity] : sig.predicates) {
    for (int pos = 0; pos < arity; ++pos) {
      std::vector<Term> xs, ys;
      for (int i = 0; i < arity; ++i) xs.push_back(v("x" + std::to_string(i + 1)));
      ys = xs;
      ys[pos] = v("y");
      Formula body = Formula::implies(
          Formula::land({Formula::atom(pred, xs), eq(xs[pos], v("y"))}),
          Formula::atom(pred, ys));
      Formula closed = Formula::forall("y", std::move(body));
      for (int i = arity; i >= 1; --i)
        closed = Formula::forall("x" + std::to_string(i), std::move(closed));
      add("indisc_" + pred + "_" + std::to_string(pos + 1), closed, zero);
    }
  }

  // T0: lt is a linear order on N.
  add("order_total",
      rel(Formula::forall(
          "x", Formula::forall("y", Formula::lor({eq(v("x"), v("y")), lt(v("x"), v("y")),
                                                  lt(v("y"), v("x"))})))),
      zero);
  add("order_antisym",
      rel(Formula::forall(
          "x", Formula::forall(
                   "y", Formula::implies(Formula::lnot(eq(v("x"), v("y"))),
                                         Formula::iff(lt(v("x"), v("y")),
                                                      Formula::lnot(lt(v("y"), v("x")))))))),
      zero);
  add("order_trans",
      rel(Formula::forall(
          "x",
          Formula::forall(
              "y", Formula::forall(
                       "z", Formula::implies(
                                Formula::land({lt(v("x"), v("y")), lt(v("y"), v("z"))}),
                                lt(v("x"), v("z"))))))),
      zero);

  // T0: minc / maxc.
  add("minmax_in_N", Formula::land({N(c("minc")), N(c("maxc"))}), zero);
  add("minc_min",
      rel(Formula::forall("x", Formula::lor({eq(v("x"), c("minc")), lt(c("minc"), v("x"))}))),
      zero);
  add("maxc_max",
      rel(Formula::forall("x", Formula::lor({eq(v("x"), c("maxc")), lt(v("x"), c("maxc"))}))),
      zero);

  // T0: initial configuration.
  add("init_state", Formula::atom(state_pred(tm.init), {c("minc")}), zero);
  add("init_head",
      Formula::forall("p", Formula::iff(eq(v("p"), c("minc")),
                                        Formula::atom("H", {v("p"), c("minc")}))),
      zero);
  add("init_tape",
      rel(Formula::forall("p", Formula::lnot(Formula::atom("T", {v("p"), c("minc")})))),
      zero);

  // T0: unique state.
  {
    std::vector<Formula> some;
    for (const auto& q : tm.states) some.push_back(Formula::atom(state_pred(q), {v("t")}));
    std::vector<Formula> parts = {Formula::lor(std::move(some))};
    for (std::size_t i = 0; i < tm.states.size(); ++i)
      for (std::size_t j = i + 1; j < tm.states.size(); ++j)
        parts.push_back(Formula::lnot(
            Formula::land({Formula::atom(state_pred(tm.states[i]), {v("t")}),
                           Formula::atom(state_pred(tm.states[j]), {v("t")})})));
    add("unique_state", rel(Formula::forall("t", Formula::land(std::move(parts)))), zero);
  }

  // T0: transition sentences.
  for (const auto& [key, val] : tm.delta) {
    const auto& [q, w] = key;
    const auto& [q2, w2, dir] = val;

    std::vector<Formula> cond = {Formula::atom(state_pred(q), {v("t")}),
                                 Formula::atom("H", {v("p"), v("t")})};
    Formula tape_read = Formula::atom("T", {v("p"), v("t")});
    cond.push_back(w == 1 ? tape_read : Formula::lnot(tape_read));

    std::vector<Formula> trans;
    trans.push_back(shifted_atom(state_pred(q2), {{"t", 1}}));
    if (dir == 'R') {
      trans.push_back(shifted_atom("H", {{"p", 1}, {"t", 1}}));
    } else {
      trans.push_back(Formula::land(
          {Formula::implies(eq(v("p"), c("minc")), shifted_atom("H", {{"p", 0}, {"t", 1}})),
           Formula::implies(Formula::lnot(eq(v("p"), c("minc"))),
                            shifted_atom("H", {{"p", -1}, {"t", 1}}))}));
    }
    {
      Formula write = shifted_atom("T", {{"p", 0}, {"t", 1}});
      if (w2 == 1)
        trans.push_back(std::move(write));
      else
        trans.push_back(Formula::forall(
            "t_next", Formula::implies(successor("t_next", "t"),
                                       Formula::lnot(Formula::atom(
                                           "T", {v("p"), v("t_next")})))));
    }
    {
      // Locality: cells away from the head keep their symbol.
      Formula untouched = dir == 'R' ? successor("p2", "p") : successor("p", "p2");
      Formula guard = Formula::land(
          {Formula::lnot(eq(v("p2"), v("p"))), Formula::lnot(std::move(untouched))});
      Formula unchanged = Formula::iff(Formula::atom("T", {v("p2"), v("t")}),
                                       shifted_atom("T", {{"p2", 0}, {"t", 1}}));
      trans.push_back(
          Formula::forall("p2", Formula::implies(std::move(guard), std::move(unchanged))));
    }

    Formula rho = Formula::forall(
        "p", Formula::forall("t", Formula::implies(Formula::land(std::move(cond)),
                                                   Formula::land(std::move(trans)))));
    add("trans_" + q + "_" + std::to_string(w), rel(rho), zero);
  }

  // T0: the machine halts at maxc.
  {
    std::vector<Formula> halts;
    for (const auto& q : tm.accepting)
      halts.push_back(Formula::atom(state_pred(q), {c("maxc")}));
    for (const auto& q : tm.rejecting)
      halts.push_back(Formula::atom(state_pred(q), {c("maxc")}));
    add("halt", Formula::lor(std::move(halts)), zero);
  }

  // T0: padding relation points outside N.
  add("padding",
      Formula::forall(
          "x", Formula::forall("y", Formula::implies(Formula::atom("R", {v("x"), v("y")}),
                                                     Formula::lnot(N(v("y")))))),
      zero);

  // Measure-forcing pair: pins D(eq-class of minc) = 1/4.
  {
    QSentence lower;
    lower.prefix.emplace_back(QuantifierKind::weak_at_least(Rat(1, 4)), "x");
    lower.matrix = eq(v("x"), c("minc"));
    enc.parts.push_back(lower);
    enc.sources.push_back(Formula::forall("x", eq(v("x"), c("minc"))));
    enc.part_eps.push_back(Rat(3, 4));
    enc.part_names.push_back("force_minc_lower");

    QSentence upper;
    upper.prefix.emplace_back(QuantifierKind::weak_at_least(Rat(3, 4)), "x");
    upper.matrix = Formula::lnot(eq(v("x"), c("minc")));
    enc.parts.push_back(upper);
    enc.sources.push_back(Formula::forall("x", Formula::lnot(eq(v("x"), c("minc")))));
    enc.part_eps.push_back(Rat(1, 4));
    enc.part_names.push_back("force_minc_upper");
  }

  // T1/2: D(N) = 1/2.
  add("half_N",
      Formula::land({Formula::forall("x", N(v("x"))),
                     Formula::forall("x2", Formula::lnot(N(v("x2"))))}),
      half);

  // T1/2: each non-maximal chain element weighs as much as its strict tail.
  auto all_in_N = [&](const std::string& var, Formula body) {
    return Formula::forall(var, Formula::land({N(v(var)), std::move(body)}));
  };
  auto half_pr = [&](const std::string& yvar, const Formula& psi_of_y,
                     const Formula& psi_of_y2) {
    return Formula::land(
        {Formula::forall(yvar, psi_of_y),
         Formula::forall(yvar + "2", Formula::lnot(psi_of_y2))});
  };
  {
    Formula tail_y = Formula::lor(
        {Formula::atom("R", {v("x"), v("y")}),
         Formula::land({N(v("y")), lt(v("x"), v("y"))})});
    Formula tail_y2 = Formula::lor(
        {Formula::atom("R", {v("x"), v("y2")}),
         Formula::land({N(v("y2")), lt(v("x"), v("y2"))})});
    add("half_chain_tail",
        all_in_N("x", Formula::lor({eq(v("x"), c("maxc")), half_pr("y", tail_y, tail_y2)})),
        half);

    Formula self_y =
        Formula::lor({Formula::atom("R", {v("x"), v("y")}), eq(v("x"), v("y"))});
    Formula self_y2 =
        Formula::lor({Formula::atom("R", {v("x"), v("y2")}), eq(v("x"), v("y2"))});
    add("half_chain_self",
        all_in_N("x", Formula::lor({eq(v("x"), c("maxc")), half_pr("y", self_y, self_y2)})),
        half);
  }

  for (const auto& p : enc.parts) p.check();
  return enc;
}

// ── Witness model ───────────────────────────────────────────────────────────

std::optional<FiniteModel> witness_model(const TuringMachine& tm, int max_steps) {
  SimResult sim = simulate(tm, max_steps);
  if (!sim.halted) return std::nullopt;
  int m = sim.halt_time;
  TMEncoding enc = encode_tm(tm);

  FiniteModel w;
  w.sig = enc.sig;
  for (int i = 1; i <= 2 * m; ++i) w.universe.push_back(std::to_string(i));

  // D(i) = D(i+m) = 2^-i-1 for i < m; D(m) = D(2m) = 2^-m.
  w.measure.assign(2 * m, Rat(0));
  for (int i = 1; i <= m; ++i) {
    Rat mass = i < m ? Rat(1, Int(1) << (i + 1)) : Rat(1, Int(1) << m);
    w.measure[i - 1] = mass;
    w.measure[i + m - 1] = mass;
  }

  auto& eq_rel = w.relations["eq"];
  auto& lt_rel = w.relations["lt"];
  auto& n_rel = w.relations["N"];
  auto& r_rel = w.relations["R"];
  auto& t_rel = w.relations["T"];
  auto& h_rel = w.relations["H"];
  for (const auto& q : tm.states) w.relations[state_pred(q)];
  for (int i = 1; i <= 2 * m; ++i) {
    eq_rel.insert({i - 1, i - 1});
    for (int j = i + 1; j <= 2 * m; ++j) lt_rel.insert({i - 1, j - 1});
  }
  for (int i = 1; i <= m; ++i) n_rel.insert({i - 1});
  // R(i, j) iff i >= j - m >= 1.
  for (int i = 1; i <= 2 * m; ++i)
    for (int j = m + 1; j <= 2 * m; ++j)
      if (i >= j - m) r_rel.insert({i - 1, j - 1});

  for (int t = 1; t <= m; ++t) {
    const SimConfig& cfg = sim.history[t - 1];
    h_rel.insert({cfg.head - 1, t - 1});
    for (std::size_t pos = 0; pos < cfg.tape.size(); ++pos)
      if (cfg.tape[pos] == 1) t_rel.insert({static_cast<int>(pos), t - 1});
    w.relations[state_pred(cfg.state)].insert({t - 1});
  }

  w.constants["minc"] = 0;
  w.constants["maxc"] = m - 1;
  return w;
}

}  // namespace epslog
