#include <doctest.h>

#include <random>

#include "fpnc/lp/simplex.hpp"
#include "support.hpp"

using namespace fpnc;

namespace {
AffineExpr v(std::uint32_t i, const Rational& k = 1) { return AffineExpr::variable(ThetaId{i}, k); }
}  // namespace

TEST_CASE("symmetric max") {
  LinearProgram lp{{ThetaId{1}, ThetaId{2}}, v(2), {v(2) - v(1), v(2) - (AffineExpr(1) - v(1))}};
  auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == Rational(1, 2));
  CHECK(sol.assignment.at(ThetaId{1}) == Rational(1, 2));
}

TEST_CASE("left-over feasibility corner") {
  LinearProgram lp{{ThetaId{1}}, v(1), {v(1, 40) - AffineExpr(10)}};
  auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == Rational(1, 4));
}

TEST_CASE("infeasible and unbounded programs") {
  LinearProgram infeasible{{ThetaId{1}}, v(1), {v(1) - AffineExpr(1), -v(1)}};
  CHECK(solve(infeasible).status == LpStatus::infeasible);
  LinearProgram unbounded{{ThetaId{1}}, -v(1), {v(1) - AffineExpr(1)}};
  CHECK(solve(unbounded).status == LpStatus::unbounded);
}

TEST_CASE("unknown variables are rejected") {
  LinearProgram lp{{ThetaId{1}}, v(1), {v(2)}};
  CHECK_THROWS(solve(lp));
}

TEST_CASE("text export lists one inequality per line") {
  LinearProgram lp{{ThetaId{1}}, v(1), {v(1, 40) - AffineExpr(10)}};
  auto text = lp.to_text();
  CHECK(text.find("minimize") != std::string::npos);
  CHECK(text.find("-10 + 40*t1 >= 0") != std::string::npos);
}

TEST_CASE("random programs: optimum is feasible and no sampled point beats it") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-5, 5);
  int optimal = 0;
  for (int round = 0; round < 40; ++round) {
    LinearProgram lp;
    const int n = 3;
    for (int i = 1; i <= n; ++i) lp.variables.push_back(ThetaId{static_cast<std::uint32_t>(i)});
    for (int i = 1; i <= n; ++i) lp.objective += v(i, std::abs(coef(rng)) + 1);
    for (int c = 0; c < 5; ++c) {
      AffineExpr e(coef(rng));
      for (int i = 1; i <= n; ++i) e += v(i, coef(rng));
      lp.constraints.push_back(e);
    }
    // Keep the program bounded and feasible: every variable at most 10.
    for (int i = 1; i <= n; ++i) lp.constraints.push_back(AffineExpr(10) - v(i));
    auto sol = solve(lp);
    auto again = solve(lp);
    CHECK(sol.status == again.status);
    if (sol.status != LpStatus::optimal) continue;
    ++optimal;
    CHECK(sol.assignment == again.assignment);
    for (const auto& c : lp.constraints) CHECK(c.evaluate(sol.assignment) >= 0);
    CHECK(lp.objective.evaluate(sol.assignment) == sol.value);
    std::uniform_int_distribution<int> pick(0, 100);
    for (int s = 0; s < 2500; ++s) {
      Assignment a;
      for (auto id : lp.variables) a[id] = Rational(pick(rng), 10);
      bool feasible = true;
      for (const auto& c : lp.constraints) feasible = feasible && c.evaluate(a) >= 0;
      if (feasible) CHECK(lp.objective.evaluate(a) >= sol.value);
    }
  }
  CHECK(optimal > 5);
}
