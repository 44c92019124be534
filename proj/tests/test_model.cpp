#include <doctest.h>

#include "epslog/model.hpp"
#include "epslog/parser.hpp"
#include "epslog/semantics.hpp"
#include "oracles.hpp"

using namespace epslog;

namespace {

Signature sig_p() {
  Signature s;
  s.predicates["P"] = 1;
  return s;
}

}  // namespace

TEST_CASE("validate_model reports each violation") {
  Signature s = sig_p();
  FiniteModel ok;
  ok.sig = s;
  ok.universe = {"a"};
  ok.measure = {Rat(1)};
  CHECK(validate_model(ok).empty());

  FiniteModel bad_sum;
  bad_sum.sig = s;
  bad_sum.universe = {"a", "b"};
  bad_sum.measure = {Rat(1, 2), Rat(1, 3)};
  auto errs = validate_model(bad_sum);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0] == "measure sum 5/6 != 1");

  FiniteModel bad_arity;
  bad_arity.sig = s;
  bad_arity.universe = {"a", "b"};
  bad_arity.measure = {Rat(1, 2), Rat(1, 2)};
  bad_arity.relations["P"].insert({0, 1});
  errs = validate_model(bad_arity);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("arity") != std::string::npos);

  FiniteModel neg;
  neg.sig = s;
  neg.universe = {"a", "b"};
  neg.measure = {Rat(3, 2), Rat(-1, 2)};
  errs = validate_model(neg);
  CHECK(errs.size() == 1);  // negative mass; the sum is still 1
  CHECK(errs[0].find("negative") != std::string::npos);
}

TEST_CASE("model file round trip") {
  Signature s;
  s.predicates["P"] = 1;
  s.predicates["R"] = 2;
  s.constants.insert("minc");
  std::string text =
      "# comment\n"
      "universe: a b c\n"
      "measure: a=1/4 b=1/2 c=1/4\n"
      "const minc=a\n"
      "rel P: a c\n"
      "rel R: (a b) (b c)\n";
  FiniteModel m = parse_model(text, s);
  CHECK(validate_model(m).empty());
  CHECK(m.universe.size() == 3);
  CHECK(m.holds("P", {0}));
  CHECK(m.holds("P", {2}));
  CHECK(m.holds("R", {0, 1}));
  CHECK(m.holds("R", {1, 2}));
  CHECK(!m.holds("R", {1, 0}));
  CHECK(m.constants.at("minc") == 0);

  FiniteModel m2 = parse_model(print_model(m), s);
  CHECK(m2.universe == m.universe);
  CHECK(m2.measure == m.measure);
  CHECK(m2.relations == m.relations);
  CHECK(m2.constants == m.constants);

  CHECK_THROWS(parse_model("universe: a\nmeasure: b=1\n", s));  // undeclared element
  CHECK_THROWS(parse_model("universe: a\nrel R: a\n", s));      // needs parentheses
}

TEST_CASE("classical evaluation") {
  Signature s = sig_p();
  FiniteModel m;
  m.sig = s;
  m.universe = {"e1", "e2"};
  m.measure = {Rat(1, 2), Rat(1, 2)};
  m.relations["P"].insert({0});
  CHECK(!classical_eval(m, parse_fo_formula("(forall x (P x))", s)));
  CHECK(classical_eval(m, parse_fo_formula("(exists x (P x))", s)));

  Signature se;
  se.has_equality = true;
  se.predicates["P"] = 1;
  FiniteModel me = m;
  me.sig = se;
  CHECK(classical_eval(me, parse_fo_formula("(forall x (exists y (not (= x y))))", se)));
}

TEST_CASE("quotient of the worked example") {
  Signature s;
  s.predicates["P1"] = 1;
  s.predicates["P2"] = 1;
  FiniteModel m;
  m.sig = s;
  m.universe = {"a", "b", "c"};
  m.measure = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
  m.relations["P1"] = {{0}, {1}};
  m.relations["P2"] = {{2}};
  FiniteModel q = quotient_monadic(m);
  REQUIRE(q.universe.size() == 2);
  CHECK(q.universe[0] == "u1");  // cell {P1}
  CHECK(q.universe[1] == "u2");  // cell {P2}
  CHECK(q.measure[0] == Rat(2, 3));
  CHECK(q.measure[1] == Rat(1, 3));
  CHECK(q.relations.at("P1").count({0}));
  CHECK(q.relations.at("P2").count({1}));
  CHECK(validate_model(q).empty());
}

TEST_CASE("quotient fixpoint and degenerate partition") {
  Signature s = sig_p();
  FiniteModel simple;
  simple.sig = s;
  simple.universe = {"x", "y"};
  simple.measure = {Rat(1, 4), Rat(3, 4)};
  simple.relations["P"] = {{1}};
  FiniteModel q = quotient_monadic(simple);
  CHECK(q.universe.size() == 2);
  CHECK(q.measure == std::vector<Rat>{Rat(1, 4), Rat(3, 4)});

  FiniteModel empty;
  empty.sig = s;
  empty.universe = {"x", "y", "z"};
  empty.measure = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
  FiniteModel qe = quotient_monadic(empty);
  REQUIRE(qe.universe.size() == 1);
  CHECK(qe.universe[0] == "u");
  CHECK(qe.measure[0] == Rat(1));
}

TEST_CASE("quotient preserves epsilon-truth on depth-2 sentences") {
  Signature s;
  s.predicates["P1"] = 1;
  s.predicates["P2"] = 1;
  std::vector<Formula> atoms = {
      Formula::atom("P1", {Term::var("x")}), Formula::atom("P2", {Term::var("x")}),
      Formula::atom("P1", {Term::var("y")}), Formula::atom("P2", {Term::var("y")})};
  std::vector<Formula> matrices = oracles::matrix_family(atoms);
  std::vector<Rat> eps_grid = {Rat(0), Rat(1, 3), Rat(1, 2), Rat(1)};

  std::mt19937 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    FiniteModel m = oracles::random_model(rng, s, 4, 6);
    FiniteModel q = quotient_monadic(m);
    for (const auto& matrix : matrices) {
      for (int qs = 0; qs < 4; ++qs) {
        Formula f = matrix;
        f = (qs & 1) ? Formula::forall("y", f) : Formula::exists("y", f);
        f = (qs & 2) ? Formula::forall("x", f) : Formula::exists("x", f);
        for (const auto& eps : eps_grid) {
          CHECK(eval_e(m, f, eps) == eval_e(q, f, eps));
        }
      }
    }
  }
}

TEST_CASE("enumeration counts and determinism") {
  Signature s = sig_p();
  auto models = enumerate_models_vec(s, 1, 1);
  REQUIRE(models.size() == 2);  // P empty / P full on the mass-1 singleton
  CHECK(models[0].universe == std::vector<std::string>{"e1"});
  CHECK(models[0].measure[0] == Rat(1));

  CHECK(enumerate_models_vec(s, 0, 3).empty());

  Signature sc = sig_p();
  sc.constants.insert("c");
  auto withc = enumerate_models_vec(sc, 2, 1);
  // size 1: 2 relation choices x 1 constant; size 2 at weight 1: measures
  // (1,0) and (0,1), 4 relation choices, 2 constant choices.
  CHECK(withc.size() == 2 + 2 * 4 * 2);
  for (const auto& m : withc) CHECK(validate_model(m).empty());

  // duplicate-free
  std::set<std::string> seen;
  for (const auto& m : withc) CHECK(seen.insert(print_model(m)).second);

  // deterministic
  auto again = enumerate_models_vec(sc, 2, 1);
  REQUIRE(again.size() == withc.size());
  for (std::size_t i = 0; i < again.size(); ++i)
    CHECK(print_model(again[i]) == print_model(withc[i]));
}

TEST_CASE("enumeration covers reduced measures exactly once") {
  Signature s = sig_p();
  auto models = enumerate_models_vec(s, 2, 4);
  std::set<std::vector<Rat>> measures;
  for (const auto& m : models)
    if (m.universe.size() == 2) measures.insert(m.measure);
  // k=2, denominators <= 4: (1,0),(0,1),(1/2,1/2),(1/3,2/3),(2/3,1/3),
  // (1/4,3/4),(3/4,1/4)
  CHECK(measures.size() == 7);
  CHECK(measures.count({Rat(1), Rat(0)}) == 1);
  CHECK(measures.count({Rat(1, 4), Rat(3, 4)}) == 1);
}
