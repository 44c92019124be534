#include <doctest.h>

#include <random>

#include "epslog/model.hpp"
#include "epslog/parser.hpp"
#include "epslog/semantics.hpp"
#include "oracles.hpp"

using namespace epslog;

namespace {

// M = {1..4}, uniform, S(x,y,z) iff x + y = z.
FiniteModel sum_model() {
  Signature s;
  s.predicates["S"] = 3;
  FiniteModel m;
  m.sig = s;
  m.universe = {"1", "2", "3", "4"};
  m.measure.assign(4, Rat(1, 4));
  for (int x = 1; x <= 4; ++x)
    for (int y = 1; y <= 4; ++y)
      if (x + y <= 4) m.relations["S"].insert({x - 1, y - 1, x + y - 1});
  return m;
}

Signature sum_sig() { return sum_model().sig; }

FiniteModel eq_model(std::vector<Rat> masses) {
  Signature s;
  s.has_equality = true;
  FiniteModel m;
  m.sig = s;
  for (std::size_t i = 1; i <= masses.size(); ++i)
    m.universe.push_back(std::to_string(i));
  m.measure = std::move(masses);
  return m;
}

QTreeNode leaf(std::vector<int> elems) {
  QTreeNode n;
  n.elems = std::move(elems);
  return n;
}

// The paper's three-level example tree: {1} / {1,2,3} / {2},{3},{4}.
QTreeNode paper_tree_root() {
  QTreeNode mid;
  mid.elems = {0, 1, 2};
  mid.kids.emplace_back(0, leaf({1}));
  mid.kids.emplace_back(1, leaf({2}));
  mid.kids.emplace_back(2, leaf({3}));
  QTreeNode root;
  root.elems = {0};
  root.kids.emplace_back(0, mid);
  return root;
}

QTree with_levels(QTreeNode root, std::vector<QuantifierKind> levels) {
  QTree t;
  t.levels = std::move(levels);
  t.root = std::move(root);
  return t;
}

const QuantifierKind kEx = QuantifierKind::exist();
const QuantifierKind kAll = QuantifierKind::all();
QuantifierKind geq(int n, int d) { return QuantifierKind::weak_at_least(Rat(n, d)); }
QuantifierKind gt(int n, int d) { return QuantifierKind::strong_greater(Rat(n, d)); }

}  // namespace

TEST_CASE("eval_e on the paper examples") {
  FiniteModel m = sum_model();
  Formula f = parse_fo_formula("(exists x (forall y (exists z (S x y z))))", sum_sig());
  CHECK(eval_e(m, f, Rat(1, 2)));
  CHECK(!eval_e(m, f, Rat(0)));

  Signature sp;
  sp.predicates["P"] = 1;
  FiniteModel mp;
  mp.sig = sp;
  mp.universe = {"1", "2"};
  mp.measure = {Rat(3, 4), Rat(1, 4)};
  mp.relations["P"] = {{0}};
  Formula all_p = parse_fo_formula("(forall x (P x))", sp);
  CHECK(eval_e(mp, all_p, Rat(1, 4)));
  CHECK(!eval_e(mp, all_p, Rat(1, 5)));

  FiniteModel singleton = eq_model({Rat(1)});
  Formula ex_all = parse_fo_formula("(exists x (forall y (= x y)))", singleton.sig);
  CHECK(eval_e(singleton, ex_all, Rat(0)));
  CHECK(eval_e(singleton, ex_all, Rat(1, 2)));
}

TEST_CASE("eval_f on the paper examples") {
  FiniteModel two = eq_model({Rat(1, 2), Rat(1, 2)});
  Formula all_ex = parse_fo_formula("(forall x (exists y (= x y)))", two.sig);
  CHECK(eval_f(two, all_ex, Rat(1, 4)));
  CHECK(!eval_f(two, all_ex, Rat(1, 2)));

  FiniteModel singleton = eq_model({Rat(1)});
  Formula ex_all = parse_fo_formula("(exists x (forall y (= x y)))", singleton.sig);
  CHECK(eval_f(singleton, ex_all, Rat(0)));
  CHECK(eval_f(singleton, ex_all, Rat(3, 4)));

  Formula contradiction =
      parse_fo_formula("(exists x (forall y (not (= x y))))", two.sig);
  CHECK(!eval_f(two, contradiction, Rat(0)));
  CHECK(!eval_f(singleton, contradiction, Rat(1, 2)));
  FiniteModel skew = eq_model({Rat(1, 8), Rat(7, 8)});
  CHECK(!eval_f(skew, contradiction, Rat(0)));
}

TEST_CASE("eval_q boundary cases") {
  Signature sp;
  sp.predicates["P"] = 1;
  FiniteModel m;
  m.sig = sp;
  m.universe = {"1", "2"};
  m.measure = {Rat(1, 2), Rat(1, 2)};
  m.relations["P"] = {{0}};

  QSentence weak0 = parse_q_sentence("(qgeq 0 x (P x))", sp);
  CHECK(eval_q(m, weak0));

  QSentence strong_half = parse_q_sentence("(qgt 1/2 x (P x))", sp);
  CHECK(!eval_q(m, strong_half));  // 1/2 > 1/2 fails

  QSentence sum_example = parse_q_sentence(
      "(exists x (qgeq 1/2 y (exists z (S x y z))))", sum_sig());
  CHECK(eval_q(sum_model(), sum_example));
}

TEST_CASE("eval_q matches the naive maximal-set recursion") {
  Signature s;
  s.predicates["P"] = 1;
  s.predicates["R"] = 2;
  std::mt19937 rng(99);
  std::vector<FiniteModel> models = enumerate_models_vec(s, 2, 3);
  std::vector<QuantifierKind> kinds = {kEx, kAll, geq(1, 2), geq(1, 1), gt(0, 1),
                                       gt(1, 2), geq(0, 1), gt(3, 4)};
  std::vector<Formula> atoms = {
      Formula::atom("P", {Term::var("x")}), Formula::atom("R", {Term::var("x"), Term::var("y")}),
      Formula::atom("R", {Term::var("y"), Term::var("x")})};
  std::vector<Formula> matrices = oracles::matrix_family(atoms);
  for (int trial = 0; trial < 300; ++trial) {
    QSentence q;
    q.prefix.emplace_back(kinds[rng() % kinds.size()], "x");
    q.prefix.emplace_back(kinds[rng() % kinds.size()], "y");
    q.matrix = matrices[rng() % matrices.size()];
    const FiniteModel& m = models[rng() % models.size()];
    CHECK(eval_q(m, q) == oracles::naive_eval_q(m, q));
  }
}

TEST_CASE("the paper q-tree validates exactly the listed level lists") {
  FiniteModel m = sum_model();
  QTreeNode root = paper_tree_root();

  CHECK(check_tree_levels(m, {kEx, geq(3, 4), gt(0, 1)}, with_levels(root, {kEx, geq(3, 4), gt(0, 1)})));
  CHECK(check_tree_levels(m, {geq(1, 4), kEx, kEx}, with_levels(root, {geq(1, 4), kEx, kEx})));
  CHECK(check_tree_levels(m, {gt(0, 1), gt(1, 2), geq(0, 1)}, with_levels(root, {gt(0, 1), gt(1, 2), geq(0, 1)})));
  CHECK(!check_tree_levels(m, {kEx, kAll, kEx}, with_levels(root, {kEx, kAll, kEx})));
  CHECK(!check_tree_levels(m, {gt(1, 2), gt(3, 4), gt(1, 4)},
                           with_levels(root, {gt(1, 2), gt(3, 4), gt(1, 4)})));
}

TEST_CASE("verify_qtree checks brans against the matrix") {
  FiniteModel m = sum_model();
  // q-tree for exists x (qgt 1/2 y (exists z (S x y z))) but not with forall.
  QSentence good = parse_q_sentence(
      "(exists x (qgt 1/2 y (exists z (S x y z))))", sum_sig());
  QSentence bad = parse_q_sentence(
      "(exists x (forall y (exists z (S x y z))))", sum_sig());
  QTree t = with_levels(paper_tree_root(), {});
  for (const auto& [k, v] : good.prefix) t.levels.push_back(k);
  QTree t_bad = t;
  t_bad.levels = {kEx, kAll, kEx};
  CHECK(verify_qtree(m, good, t));
  CHECK(!verify_qtree(m, bad, t_bad));

  // Same tree with a wrong matrix: brans must fail.
  Signature s2 = sum_sig();
  QSentence wrong = parse_q_sentence(
      "(exists x (qgt 1/2 y (exists z (S x z y))))", s2);
  CHECK(!verify_qtree(m, wrong, t));

  // Malformed: child map missing an element.
  QTree broken = t;
  broken.root->kids[0].second.kids.pop_back();
  CHECK_THROWS(verify_qtree(m, good, broken));
}

TEST_CASE("height-2 paper tree and the 1/4F vs 1/2F distinction") {
  FiniteModel m = eq_model({Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
  QTreeNode root;
  root.elems = {0, 1, 2, 3};
  root.kids.emplace_back(0, leaf({2, 3}));
  root.kids.emplace_back(1, leaf({2, 3}));
  root.kids.emplace_back(2, leaf({0, 1}));
  root.kids.emplace_back(3, leaf({0, 1}));

  CHECK(check_tree_levels(m, {kAll, kEx}, with_levels(root, {kAll, kEx})));
  CHECK(check_tree_levels(m, {geq(1, 1), gt(1, 4)}, with_levels(root, {geq(1, 1), gt(1, 4)})));
  CHECK(!check_tree_levels(m, {kEx, kAll}, with_levels(root, {kEx, kAll})));
  CHECK(!check_tree_levels(m, {kAll, gt(1, 2)}, with_levels(root, {kAll, gt(1, 2)})));

  Formula neq = parse_fo_formula("(forall x (exists y (not (= x y))))", m.sig);
  QSentence coerced_quarter = f_coerce(neq, Rat(1, 4));
  QSentence coerced_half = f_coerce(neq, Rat(1, 2));
  QTree tq = with_levels(root, {});
  for (const auto& [k, v] : coerced_quarter.prefix) tq.levels.push_back(k);
  CHECK(verify_qtree(m, coerced_quarter, tq));
  QTree th = tq;
  th.levels = {kAll, gt(1, 2)};
  CHECK(!verify_qtree(m, coerced_half, th));

  // Exercise from the paper: no 3/4F-tree for this sentence exists at all.
  QSentence coerced_34 = f_coerce(neq, Rat(3, 4));
  CHECK(!oracles::exhaustive_tree_sat(m, coerced_34));
  CHECK(!eval_q(m, coerced_34));

  // Negative matrix cases from the q-tree example.
  QSentence all_all = parse_q_sentence("(forall x (forall y (not (= x y))))", m.sig);
  QTree ta = tq;
  ta.levels = {kAll, kAll};
  CHECK(!verify_qtree(m, all_all, ta));
}

TEST_CASE("find_qtree returns the canonical maximal witness") {
  FiniteModel m = sum_model();
  Formula f = parse_fo_formula("(exists x (forall y (exists z (S x y z))))", sum_sig());
  QSentence q = e_coerce(f, Rat(1, 2));
  auto t = find_qtree(m, q);
  REQUIRE(t.has_value());
  CHECK(verify_qtree(m, q, *t));
  // Root pruned to the least witness {1}; the weak level holds the maximal
  // set {1,2,3}; each leaf is the least sum witness.
  REQUIRE(t->root.has_value());
  CHECK(t->root->elems == std::vector<int>{0});
  const QTreeNode& mid = t->root->kids[0].second;
  CHECK(mid.elems == std::vector<int>{0, 1, 2});
  CHECK(mid.kids[0].second.elems == std::vector<int>{1});
  CHECK(mid.kids[1].second.elems == std::vector<int>{2});
  CHECK(mid.kids[2].second.elems == std::vector<int>{3});

  QSentence unsat = e_coerce(f, Rat(0));
  CHECK(!find_qtree(m, unsat).has_value());

  QSentence empty_prefix;
  empty_prefix.matrix = parse_fo_formula("(S c1 c1 c2)", [] {
    Signature s;
    s.predicates["S"] = 3;
    s.constants = {"c1", "c2"};
    return s;
  }());
  FiniteModel mc = m;
  mc.sig.constants = {"c1", "c2"};
  mc.constants["c1"] = 0;
  mc.constants["c2"] = 1;
  auto t0 = find_qtree(mc, empty_prefix);
  REQUIRE(t0.has_value());
  CHECK(t0->height() == 0);
  CHECK(verify_qtree(mc, empty_prefix, *t0));
}

TEST_CASE("tree correspondence against exhaustive enumeration") {
  Signature s;
  s.predicates["P"] = 1;
  s.predicates["R"] = 2;
  std::vector<FiniteModel> models = enumerate_models_vec(s, 2, 2);
  std::vector<Formula> atoms = {Formula::atom("P", {Term::var("x")}),
                                Formula::atom("R", {Term::var("x"), Term::var("y")})};
  std::vector<Formula> matrices = oracles::matrix_family(atoms);
  std::vector<QuantifierKind> kinds = {kEx, kAll, geq(1, 2), gt(1, 4)};
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    QSentence q;
    q.prefix.emplace_back(kinds[rng() % kinds.size()], "x");
    q.prefix.emplace_back(kinds[rng() % kinds.size()], "y");
    q.matrix = matrices[rng() % matrices.size()];
    const FiniteModel& m = models[rng() % models.size()];
    bool via_eval = eval_q(m, q);
    bool via_trees = oracles::exhaustive_tree_sat(m, q);
    auto found = find_qtree(m, q);
    CHECK(via_eval == via_trees);
    CHECK(via_eval == found.has_value());
    if (found) CHECK(verify_qtree(m, q, *found));
  }
}

TEST_CASE("wedge product reproduces the worked example") {
  QTreeNode t_root;
  t_root.elems = {0, 1, 2};
  t_root.kids.emplace_back(0, leaf({1, 2}));
  t_root.kids.emplace_back(1, leaf({2}));
  t_root.kids.emplace_back(2, leaf({0, 3}));
  QTree t = with_levels(t_root, {geq(3, 4), kEx});

  QTree u = with_levels(leaf({0}), {kEx});

  QTree w = wedge(t, u);
  REQUIRE(w.levels.size() == 3);
  REQUIRE(w.root.has_value());
  int leaf_count = 0;
  for (const auto& [e1, mid] : w.root->kids) {
    for (const auto& [e2, lf] : mid.kids) {
      CHECK(lf.elems == std::vector<int>{0});
      ++leaf_count;
    }
  }
  CHECK(leaf_count == 5);

  // Wedge with a height-0 tree is the identity.
  QTree unit;
  QTree same = wedge(t, unit);
  CHECK(same.levels == t.levels);
  CHECK(same.root->elems == t.root->elems);

  // Heights 1 and 1: child count equals the leaf element count.
  QTree two = wedge(u, u);
  CHECK(two.height() == 2);
  CHECK(two.root->kids.size() == 1);
}

TEST_CASE("duality, deduction theorem, monotonicity, coincidence (sampled)") {
  Signature s;
  s.predicates["P"] = 1;
  s.predicates["R"] = 2;
  std::mt19937 rng(41);
  std::vector<Rat> eps_grid = {Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2),
                               Rat(2, 3), Rat(3, 4), Rat(1)};
  for (int i = 0; i < 120; ++i) {
    FiniteModel m = oracles::random_model(rng, s, 4, 8);
    Formula f = oracles::random_sentence(rng, s, 3);
    Formula g = oracles::random_sentence(rng, s, 2);
    const Rat& eps = eps_grid[rng() % eps_grid.size()];
    CHECK(eval_f(m, f, eps) == !eval_e(m, Formula::lnot(f), eps));
    CHECK(eval_e(m, Formula::implies(f, g), eps) ==
          (!eval_f(m, f, eps) || eval_e(m, g, eps)));
  }
  // Monotonicity in epsilon for NNF sentences.
  for (int i = 0; i < 60; ++i) {
    FiniteModel m = oracles::random_model(rng, s, 3, 6);
    Formula f = to_nnf(oracles::random_sentence(rng, s, 3));
    for (std::size_t a = 0; a + 1 < eps_grid.size(); ++a)
      if (eval_e(m, f, eps_grid[a])) CHECK(eval_e(m, f, eps_grid[a + 1]));
  }
  // epsilon = 0 coincides with classical truth on positive-mass models.
  for (int i = 0; i < 60; ++i) {
    FiniteModel m = oracles::random_model(rng, s, 3, 6);
    bool positive = true;
    for (const auto& r : m.measure) positive = positive && r > 0;
    if (!positive) continue;
    Formula f = oracles::random_sentence(rng, s, 3);
    CHECK(eval_e(m, f, Rat(0)) == classical_eval(m, f));
  }
}

TEST_CASE("paraconsistency regression fixture") {
  Signature s;
  s.predicates["P"] = 1;
  FiniteModel m;
  m.sig = s;
  m.universe = {"a", "b"};
  m.measure = {Rat(1), Rat(0)};
  m.relations["P"] = {{0}};
  CHECK(eval_e(m, parse_fo_formula("(forall x (P x))", s), Rat(0)));
  CHECK(eval_e(m, parse_fo_formula("(exists x (not (P x)))", s), Rat(0)));
}

TEST_CASE("qtree serialization format") {
  FiniteModel m = sum_model();
  QSentence q = parse_q_sentence(
      "(exists x (qgeq 1/2 y (exists z (S x y z))))", sum_sig());
  auto t = find_qtree(m, q);
  REQUIRE(t.has_value());
  std::string text = print_qtree(m, *t);
  CHECK(text ==
        "level 1 [set: 1]\n"
        "  level 2 [set: 1 2 3] (via 1)\n"
        "    level 3 [set: 2] (via 1)\n"
        "    level 3 [set: 3] (via 2)\n"
        "    level 3 [set: 4] (via 3)\n");
}
