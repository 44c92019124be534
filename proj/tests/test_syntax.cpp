#include <doctest.h>

#include <random>

#include "epslog/model.hpp"
#include "epslog/parser.hpp"
#include "epslog/semantics.hpp"
#include "epslog/syntax.hpp"
#include "oracles.hpp"

using namespace epslog;

namespace {

Signature sig_pq() {
  Signature s;
  s.predicates["P"] = 1;
  s.predicates["Q"] = 1;
  return s;
}

Signature sig_pr() {
  Signature s;
  s.predicates["P"] = 1;
  s.predicates["R"] = 2;
  return s;
}

Formula parse1(const std::string& t, const Signature& s) { return parse_fo_formula(t, s); }

}  // namespace

TEST_CASE("parse basic forms") {
  Signature s = sig_pq();
  Formula f = parse1("(forall x (P x))", s);
  CHECK(f == Formula::forall("x", Formula::atom("P", {Term::var("x")})));

  Signature s3;
  s3.predicates["S"] = 3;
  Formula g = parse1("(exists x (forall y (S x y y)))", s3);
  CHECK(g == Formula::exists(
                 "x", Formula::forall("y", Formula::atom("S", {Term::var("x"),
                                                               Term::var("y"),
                                                               Term::var("y")}))));

  QSentence q = parse_q_sentence("(qgeq 1/2 x (not (P x)))", s);
  REQUIRE(q.prefix.size() == 1);
  CHECK(q.prefix[0].first == QuantifierKind::weak_at_least(Rat(1, 2)));
  CHECK(q.prefix[0].second == "x");
  CHECK(q.matrix == Formula::lnot(Formula::atom("P", {Term::var("x")})));
}

TEST_CASE("parse errors carry positions and reasons") {
  Signature s = sig_pq();
  CHECK_THROWS_AS(parse_formula("(P x", s), ParseError);
  CHECK_THROWS_AS(parse_formula("(Z x)", s), ParseError);            // undeclared
  CHECK_THROWS_AS(parse_formula("(P x y)", s), ParseError);          // arity
  CHECK_THROWS_AS(parse_formula("(= x x)", s), ParseError);          // no equality
  CHECK_THROWS_AS(parse_formula("(and (P x) (qgeq 1/2 y (P y)))", s),
                  ParseError);                                       // q under connective
  CHECK_THROWS_AS(parse_formula("(qgeq 3/2 x (P x))", s), ParseError);
}

TEST_CASE("print-parse round trip on generated formulas") {
  Signature s = sig_pr();
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    Formula f = oracles::random_sentence(rng, s, 3);
    std::string text = print_formula(f);
    CHECK(parse1(text, s) == f);
  }
}

TEST_CASE("q-sentence print-parse round trip") {
  Signature s = sig_pq();
  QSentence q = parse_q_sentence("(qgt 1/3 x (forall y (or (P x) (Q y))))", s);
  QSentence q2 = parse_q_sentence(print_qsentence(q), s);
  CHECK(q.prefix == q2.prefix);
  CHECK(q.matrix == q2.matrix);
}

TEST_CASE("nnf paper cases") {
  Signature s = sig_pq();
  // not-forall flips to exists-not
  CHECK(to_nnf(parse1("(not (forall x (P x)))", s)) ==
        parse1("(exists x (not (P x)))", s));
  // double negation cancels
  Signature sc = sig_pq();
  sc.constants.insert("a");
  CHECK(to_nnf(parse_fo_formula("(not (not (P a)))", sc)) == parse_fo_formula("(P a)", sc));
  // De Morgan over conjunction
  CHECK(to_nnf(parse1("(not (and (P x) (Q y)))", s)) ==
        parse1("(or (not (P x)) (not (Q y)))", s));
}

TEST_CASE("nnf is involution-stable and eliminates implies/iff") {
  Signature s = sig_pr();
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    Formula f = oracles::random_sentence(rng, s, 3);
    Formula n = to_nnf(f);
    CHECK(to_nnf(n) == n);
    std::function<bool(const Formula&)> ok = [&](const Formula& g) {
      if (g.kind == FormulaKind::Implies || g.kind == FormulaKind::Iff) return false;
      if (g.kind == FormulaKind::Not &&
          !(g.kids[0].kind == FormulaKind::Atom || g.kids[0].kind == FormulaKind::Equal))
        return false;
      return std::all_of(g.kids.begin(), g.kids.end(), ok);
    };
    CHECK(ok(n));
  }
}

TEST_CASE("prenex shape and deterministic renaming") {
  Signature s = sig_pq();
  Formula f = parse1("(and (forall x (P x)) (exists y (Q y)))", s);
  CHECK(print_formula(to_prenex(f)) == "(forall x (exists y (and (P x) (Q y))))");

  Formula g = parse1("(exists x (or (P x) (forall x (Q x))))", s);
  CHECK(print_formula(to_prenex(g)) == "(exists x (forall x_1 (or (P x) (Q x_1))))");

  Signature sc = sig_pq();
  sc.constants.insert("a");
  Formula h = parse_fo_formula("(P a)", sc);
  CHECK(to_prenex(h) == h);
}

TEST_CASE("nnf and prenex preserve epsilon-semantics (exhaustive small grid)") {
  Signature s = sig_pr();
  std::mt19937 rng(23);
  std::vector<Rat> eps_grid = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4)};
  std::vector<FiniteModel> models = enumerate_models_vec(s, 2, 3);
  for (int i = 0; i < 40; ++i) {
    Formula f = oracles::random_sentence(rng, s, 2);
    Formula n = to_nnf(f);
    Formula p = to_prenex(f);
    for (const auto& m : models) {
      for (const auto& eps : eps_grid) {
        CHECK(eval_e(m, f, eps) == eval_e(m, n, eps));
        CHECK(eval_e(m, f, eps) == eval_e(m, p, eps));
        CHECK(eval_f(m, f, eps) == eval_f(m, n, eps));
        CHECK(eval_f(m, f, eps) == eval_f(m, p, eps));
      }
    }
  }
}

TEST_CASE("coercions map quantifiers as defined") {
  Signature s;
  s.predicates["R"] = 2;
  Formula f = parse_fo_formula("(exists x (forall y (R x y)))", s);
  QSentence qe = e_coerce(f, Rat(1, 4));
  REQUIRE(qe.prefix.size() == 2);
  CHECK(qe.prefix[0].first == QuantifierKind::exist());
  CHECK(qe.prefix[1].first == QuantifierKind::weak_at_least(Rat(3, 4)));

  Formula g = parse_fo_formula("(forall x (exists y (R x y)))", s);
  QSentence qf = f_coerce(g, Rat(1, 2));
  REQUIRE(qf.prefix.size() == 2);
  CHECK(qf.prefix[0].first == QuantifierKind::all());
  CHECK(qf.prefix[1].first == QuantifierKind::strong_greater(Rat(1, 2)));

  // boundary epsilon = 0
  Signature sp = sig_pq();
  QSentence q0 = e_coerce(parse1("(forall x (P x))", sig_pq()), Rat(0));
  CHECK(q0.prefix[0].first == QuantifierKind::weak_at_least(Rat(1)));
  QSentence q1 = f_coerce(parse1("(exists x (P x))", sig_pq()), Rat(0));
  CHECK(q1.prefix[0].first == QuantifierKind::strong_greater(Rat(0)));

  // quantifier-free sentence: empty prefix, unchanged matrix
  Signature sc = sig_pq();
  sc.constants.insert("a");
  QSentence qq = e_coerce(parse_fo_formula("(P a)", sc), Rat(1, 2));
  CHECK(qq.prefix.empty());
  CHECK(qq.matrix == parse_fo_formula("(P a)", sc));
}

TEST_CASE("coercion agrees with the native evaluators") {
  Signature s = sig_pr();
  std::mt19937 rng(31);
  std::vector<Rat> eps_grid = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};
  std::vector<FiniteModel> models = enumerate_models_vec(s, 2, 3);
  for (int i = 0; i < 30; ++i) {
    Formula f = oracles::random_sentence(rng, s, 2);
    for (const auto& eps : eps_grid) {
      QSentence qe = e_coerce(f, eps);
      QSentence qf = f_coerce(f, eps);
      for (const auto& m : models) {
        CHECK(eval_e(m, f, eps) == eval_q(m, qe));
        CHECK(eval_f(m, f, eps) == eval_q(m, qf));
      }
    }
  }
}

TEST_CASE("relativize") {
  Signature s;
  s.predicates["P"] = 1;
  s.predicates["N"] = 1;
  s.predicates["R"] = 2;
  CHECK(print_formula(relativize(parse1("(forall x (P x))", s), "N")) ==
        "(forall x (implies (N x) (P x)))");
  Formula qf = parse1("(or (P x) (P y))", s);
  CHECK(relativize(qf, "N") == qf);
  CHECK(print_formula(relativize(parse1("(exists x (forall y (R x y)))", s), "N")) ==
        "(exists x (and (N x) (forall y (implies (N y) (R x y)))))");
  CHECK_THROWS(relativize(parse1("(not (forall x (P x)))", s), "N"));
}

TEST_CASE("validity conversion") {
  Signature s = sig_pr();
  // exists-forall: existential variable replaced by fresh y, universal kept
  Formula f = parse1("(exists x1 (forall x2 (R x1 x2)))", s);
  CHECK(print_formula(validity_convert(f)) == "(forall y (forall x2 (R y x2)))");
  // no existentials: vacuous y
  CHECK(print_formula(validity_convert(parse1("(forall x (P x))", s))) ==
        "(forall y (forall x (P x)))");
  // single existential
  CHECK(print_formula(validity_convert(parse1("(exists x (P x))", s))) ==
        "(forall y (P y))");
  // fresh variable avoids capture when y is taken
  Formula g = parse1("(exists y (P y))", s);
  CHECK(print_formula(validity_convert(g)) == "(forall y_1 (P y_1))");
  CHECK_THROWS(validity_convert(parse1("(not (exists x (P x)))", s)));
}

TEST_CASE("propositionalize keys variables by prime formula and tuple") {
  Signature s = sig_pr();
  Formula f = parse1("(forall x (or (P x) (not (P x))))", s);
  Propositionalization p = propositionalize(f);
  REQUIRE(p.vars.size() == 1);
  CHECK(p.vars[0] == PropVar{"P", {"x"}});

  Formula g = parse1("(forall x (forall y (implies (R x y) (R y x))))", s);
  Propositionalization pg = propositionalize(g);
  CHECK(pg.vars.size() == 2);  // p(R;x,y) and p(R;y,x) are distinct

  Formula h = parse1("(forall x (R x x))", s);
  CHECK(propositionalize(h).vars.size() == 1);

  Signature se = sig_pr();
  se.has_equality = true;
  CHECK_THROWS(propositionalize(parse_fo_formula("(forall x (= x x))", se)));
  CHECK_THROWS(propositionalize(parse1("(forall x (exists y (R x y)))", s)));
}

TEST_CASE("conjoin_qsentences renames apart and multiplies truth") {
  Signature s = sig_pq();
  QSentence q1 = parse_q_sentence("(exists x (P x))", s);
  QSentence q2 = parse_q_sentence("(qgeq 1/2 x (Q x))", s);
  QSentence both = conjoin_qsentences(q1, q2);
  REQUIRE(both.prefix.size() == 2);
  CHECK(both.prefix[0].second == "x");
  CHECK(both.prefix[1].second == "x_1");
  both.check();

  std::vector<FiniteModel> models = enumerate_models_vec(s, 2, 4);
  for (const auto& m : models)
    CHECK(eval_q(m, both) == (eval_q(m, q1) && eval_q(m, q2)));
}

TEST_CASE("signature queries") {
  Signature s = sig_pq();
  CHECK(s.is_monadic_relational());
  s.has_equality = true;
  CHECK(!s.is_monadic_relational());
  Signature s2 = sig_pr();
  CHECK(!s2.is_monadic_relational());
  Signature s3 = sig_pq();
  s3.constants.insert("c");
  CHECK(!s3.is_monadic_relational());
}
