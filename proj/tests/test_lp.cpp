#include <doctest.h>

#include <random>

#include "epslog/linsystem.hpp"
#include "oracles.hpp"

using namespace epslog;

namespace {

bool point_satisfies(const LinSystem& s, const std::vector<Rat>& x) {
  for (const auto& r : s.rows) {
    Rat lhs(0);
    for (std::size_t i = 0; i < r.coef.size(); ++i) lhs += r.coef[i] * x[i];
    switch (r.rel) {
      case RowRel::Ge:
        if (!(lhs >= r.rhs)) return false;
        break;
      case RowRel::Gt:
        if (!(lhs > r.rhs)) return false;
        break;
      case RowRel::Eq:
        if (!(lhs == r.rhs)) return false;
        break;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("feasible_weak fixtures") {
  // x >= 0, x <= 1, x = 1/2 forces the point.
  LinSystem s({"x"});
  s.add_ge({Rat(1)}, Rat(0));
  s.add_le({Rat(1)}, Rat(1));
  s.add_eq({Rat(1)}, Rat(1, 2));
  LpResult r = feasible_weak(s);
  REQUIRE(r.feasible);
  CHECK(r.point == std::vector<Rat>{Rat(1, 2)});

  LinSystem contra({"x"});
  contra.add_ge({Rat(1)}, Rat(1));
  contra.add_le({Rat(1)}, Rat(0));
  CHECK(!feasible_weak(contra).feasible);

  // Simplex of measures with a floor on the first coordinate.
  LinSystem simplex({"m1", "m2"});
  simplex.add_ge({Rat(1), Rat(0)}, Rat(0));
  simplex.add_ge({Rat(0), Rat(1)}, Rat(0));
  simplex.add_eq({Rat(1), Rat(1)}, Rat(1));
  simplex.add_ge({Rat(1), Rat(0)}, Rat(3, 4));
  r = feasible_weak(simplex);
  REQUIRE(r.feasible);
  CHECK(point_satisfies(simplex, r.point));

  LinSystem strict({"x"});
  strict.add_gt({Rat(1)}, Rat(0));
  CHECK_THROWS(feasible_weak(strict));
}

TEST_CASE("feasible fixtures from the strict procedure") {
  // x > 0 and x < 0 contradict.
  LinSystem a({"x"});
  a.add_gt({Rat(1)}, Rat(0));
  a.add_lt({Rat(1)}, Rat(0));
  CHECK(!feasible(a).feasible);

  // x > 0, y > 0, x + y = 1.
  LinSystem b({"x", "y"});
  b.add_gt({Rat(1), Rat(0)}, Rat(0));
  b.add_gt({Rat(0), Rat(1)}, Rat(0));
  b.add_eq({Rat(1), Rat(1)}, Rat(1));
  LpResult rb = feasible(b);
  REQUIRE(rb.feasible);
  CHECK(point_satisfies(b, rb.point));

  // Mixed strict/weak/equality measure system.
  LinSystem c({"m1", "m2", "m3"});
  c.add_eq({Rat(1), Rat(1), Rat(1)}, Rat(1));
  c.add_gt({Rat(1), Rat(0), Rat(0)}, Rat(0));
  c.add_gt({Rat(0), Rat(1), Rat(0)}, Rat(0));
  c.add_gt({Rat(0), Rat(0), Rat(1)}, Rat(0));
  c.add_gt({Rat(1), Rat(1), Rat(0)}, Rat(1, 2));
  c.add_ge({Rat(0), Rat(0), Rat(1)}, Rat(1, 4));
  LpResult rc = feasible(c);
  REQUIRE(rc.feasible);
  CHECK(point_satisfies(c, rc.point));
}

TEST_CASE("boundary strictness is respected") {
  // x >= 1/2 and x < 1/2: the weak closure touches only at the excluded point.
  LinSystem s({"x"});
  s.add_ge({Rat(1)}, Rat(1, 2));
  s.add_lt({Rat(1)}, Rat(1, 2));
  CHECK(!feasible(s).feasible);

  LinSystem t({"x"});
  t.add_ge({Rat(1)}, Rat(1, 2));
  t.add_gt({Rat(-1)}, Rat(-1));  // x < 1
  LpResult r = feasible(t);
  REQUIRE(r.feasible);
  CHECK(point_satisfies(t, r.point));
}

TEST_CASE("equalities eliminate consistently") {
  LinSystem s({"x", "y", "z"});
  s.add_eq({Rat(1), Rat(1), Rat(0)}, Rat(1));   // x + y = 1
  s.add_eq({Rat(0), Rat(1), Rat(-1)}, Rat(0));  // y = z
  s.add_gt({Rat(0), Rat(0), Rat(1)}, Rat(1, 3));
  s.add_ge({Rat(1), Rat(0), Rat(0)}, Rat(0));
  LpResult r = feasible(s);
  REQUIRE(r.feasible);
  CHECK(point_satisfies(s, r.point));

  LinSystem inconsistent({"x"});
  inconsistent.add_eq({Rat(0)}, Rat(2));
  inconsistent.add_gt({Rat(1)}, Rat(0));
  CHECK(!feasible(inconsistent).feasible);
}

TEST_CASE("agreement with the strict-FM oracle on random small systems") {
  std::mt19937 rng(2024);
  int feas = 0, infeas = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int nvars = 1 + rng() % 3;
    std::vector<std::string> names;
    for (int i = 0; i < nvars; ++i) names.push_back("v" + std::to_string(i));
    LinSystem s(names);
    int nrows = 1 + rng() % 5;
    for (int r = 0; r < nrows; ++r) {
      std::vector<Rat> coef;
      for (int i = 0; i < nvars; ++i)
        coef.emplace_back(static_cast<int>(rng() % 5) - 2);
      Rat rhs(static_cast<int>(rng() % 5) - 2);
      switch (rng() % 3) {
        case 0:
          s.add_ge(coef, rhs);
          break;
        case 1:
          s.add_gt(coef, rhs);
          break;
        default:
          s.add_eq(coef, rhs);
          break;
      }
    }
    LpResult mine = feasible(s);
    bool oracle = oracles::oracle_feasible(s);
    CHECK(mine.feasible == oracle);
    if (mine.feasible) {
      ++feas;
      CHECK(point_satisfies(s, mine.point));
    } else {
      ++infeas;
    }
  }
  // The sample exercises both outcomes.
  CHECK(feas > 50);
  CHECK(infeas > 50);
}

TEST_CASE("determinism") {
  LinSystem s({"x", "y"});
  s.add_ge({Rat(1), Rat(1)}, Rat(1));
  s.add_gt({Rat(1), Rat(-1)}, Rat(0));
  LpResult a = feasible(s);
  LpResult b = feasible(s);
  REQUIRE(a.feasible);
  CHECK(a.point == b.point);
}

TEST_CASE("system printing") {
  LinSystem s({"x", "y"});
  s.add_ge({Rat(2), Rat(-1, 2)}, Rat(3));
  s.add_eq({Rat(0), Rat(1)}, Rat(0));
  CHECK(print_system(s) == "2 x + -1/2 y >= 3\n1 y = 0\n");
}
