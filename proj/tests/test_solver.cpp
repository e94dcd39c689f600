#include "doctest.h"

#include <random>
#include <stdexcept>
#include <thread>

#include "dea/solver.hpp"
#include "support/oracles.hpp"

using namespace dea::solver;
using dea::testing::BoxLp;

TEST_CASE("corner of the unit simplex") {
  LinearProgram lp;
  const auto x = lp.add_variable(0, 1, 1.0);
  const auto y = lp.add_variable(0, 1, 0.0);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::Equal, 1);
  const Solution s = solve_lp(lp);
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(0.0));
  CHECK(s.values[x] == doctest::Approx(0.0));
  CHECK(s.values[y] == doctest::Approx(1.0));
}

TEST_CASE("construction rejects inconsistent programs") {
  CHECK_THROWS_AS(LinearProgram::from_dense(Sense::Minimize, {1, 2}, {{1, 2, 3}},
                                            {Relation::Equal}, {1}, {0, 0}, {1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LinearProgram::from_dense(Sense::Minimize, {1, 2}, {{1, 2}}, {Relation::Equal},
                                            {1, 2}, {0, 0}, {1, 1}),
                  std::invalid_argument);
  LinearProgram lp;
  CHECK_THROWS_AS(lp.add_variable(2, 1), std::invalid_argument);
  const auto b = lp.add_binary();
  CHECK_THROWS_AS(lp.set_bounds(b, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(lp.add_constraint({{7, 1.0}}, Relation::Equal, 0), std::invalid_argument);
  CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);

  SolverConfig bad;
  bad.big_m = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.feas_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("bounds are honoured without rows") {
  LinearProgram lp(Sense::Maximize);
  lp.add_variable(0, 3, 1.0);
  lp.add_variable(-1, 2, 1.0);
  lp.add_variable(-4, -1, -1.0);
  const Solution s = solve_lp(lp);
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(9.0));
  CHECK(s.values[2] == doctest::Approx(-4.0));
}

TEST_CASE("infeasible and unbounded programs are detected") {
  SUBCASE("infeasible box") {
    LinearProgram lp;
    const auto x = lp.add_variable(0, 1, 1.0);
    const auto y = lp.add_variable(0, 1, 1.0);
    lp.add_constraint({{x, 1}, {y, 1}}, Relation::GreaterEqual, 3);
    CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
  }
  SUBCASE("contradictory rows") {
    LinearProgram lp;
    const auto x = lp.add_variable(-kInfinity, kInfinity, 0.0);
    lp.add_constraint({{x, 1}}, Relation::LessEqual, 1);
    lp.add_constraint({{x, 1}}, Relation::GreaterEqual, 2);
    CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
  }
  SUBCASE("unbounded ray") {
    LinearProgram lp;
    const auto x = lp.add_variable(0, kInfinity, -1.0);
    const auto y = lp.add_variable(0, kInfinity, 0.0);
    lp.add_constraint({{x, 1}, {y, -1}}, Relation::LessEqual, 1);
    CHECK(solve_lp(lp).status == SolveStatus::Unbounded);
  }
  SUBCASE("free variable, bounded objective") {
    LinearProgram lp(Sense::Maximize);
    const auto w = lp.add_variable(-kInfinity, kInfinity, 1.0);
    const auto v = lp.add_variable(0, kInfinity, 0.0);
    lp.add_constraint({{w, 1}, {v, -2}}, Relation::LessEqual, -1);
    lp.add_constraint({{v, 1}}, Relation::LessEqual, 3);
    const Solution s = solve_lp(lp);
    REQUIRE(s.optimal());
    CHECK(s.objective_value == doctest::Approx(5.0));
  }
}

TEST_CASE("iteration limit is reported") {
  std::mt19937_64 rng(3);
  BoxLp box;
  do {
    box = dea::testing::random_box_lp(rng);
  } while (box.matrix.size() < 3);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  const Solution s = solve_lp(box.build(), cfg);
  CHECK((s.status == SolveStatus::IterationLimit || s.status == SolveStatus::Optimal ||
         s.status == SolveStatus::Infeasible));
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(solve_lp(box.build(), cfg), std::invalid_argument);
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  BoxLp box;
  box.cost = {0, 0, 0, -0.75, 20, -0.5, 6};
  box.matrix = {{1, 0, 0, 0.25, -8, -1, 9}, {0, 1, 0, 0.5, -12, -0.5, 3}, {0, 0, 1, 0, 0, 1, 0}};
  box.rhs = {0, 0, 1};
  box.lower.assign(7, 0.0);
  box.upper.assign(7, 50.0);
  const auto expected = dea::testing::enumerate_vertices(box);
  REQUIRE(expected);
  for (std::size_t bland_after : {std::size_t{1}, std::size_t{50}}) {
    SolverConfig cfg;
    cfg.bland_after = bland_after;
    const Solution s = solve_lp(box.build(), cfg);
    REQUIRE(s.optimal());
    CHECK(s.objective_value == doctest::Approx(*expected).epsilon(1e-9));
  }
}

TEST_CASE("random box LPs agree with basis enumeration") {
  std::mt19937_64 rng(20240611);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const BoxLp box = dea::testing::random_box_lp(rng);
    const LinearProgram lp = box.build();
    const auto expected = dea::testing::enumerate_vertices(box);
    const Solution s = solve_lp(lp);
    CAPTURE(trial);
    if (!expected) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(s.optimal());
    CHECK(std::abs(s.objective_value - *expected) <= 1e-7 * (1.0 + std::abs(*expected)));
    CHECK(lp.max_violation(s.values) <= 1e-9 * 100);
    CHECK(dea::testing::worst_improving_reduced_cost(lp, s) <= SolverConfig{}.pivot_tol * 10);
  }
  CHECK(feasible > 100);
}

TEST_CASE("solving is deterministic and re-entrant") {
  std::mt19937_64 rng(99);
  std::vector<LinearProgram> programs;
  for (int k = 0; k < 20; ++k) programs.push_back(dea::testing::random_box_lp(rng).build());
  std::vector<Solution> first(programs.size()), second(programs.size());
  std::thread t1([&] {
    for (std::size_t k = 0; k < programs.size(); ++k) first[k] = solve_lp(programs[k]);
  });
  std::thread t2([&] {
    for (std::size_t k = 0; k < programs.size(); ++k) second[k] = solve_lp(programs[k]);
  });
  t1.join();
  t2.join();
  for (std::size_t k = 0; k < programs.size(); ++k) {
    CHECK(first[k].status == second[k].status);
    CHECK(first[k].values == second[k].values);
  }
}

TEST_CASE("MILP with an integral relaxation matches the LP") {
  LinearProgram lp;
  const auto x = lp.add_variable(0, 1, 1.0);
  const auto y = lp.add_variable(0, 1, 0.0);
  lp.add_constraint({{x, 1}, {y, 1}}, Relation::Equal, 1);
  const Solution relaxed = solve_milp(lp);
  lp.set_binary(x, true);
  lp.set_binary(y, true);
  const Solution integral = solve_milp(lp);
  REQUIRE(integral.optimal());
  CHECK(integral.objective_value == doctest::Approx(relaxed.objective_value));
  CHECK(integral.values == relaxed.values);
}

TEST_CASE("three-binary knapsack equals full enumeration") {
  // min -(5a + 4b + 3c)  s.t. 2a + 3b + c <= 4
  LinearProgram lp;
  const auto a = lp.add_binary(-5);
  const auto b = lp.add_binary(-4);
  const auto c = lp.add_binary(-3);
  lp.add_constraint({{a, 2}, {b, 3}, {c, 1}}, Relation::LessEqual, 4);
  double best = 0.0;
  for (int mask = 0; mask < 8; ++mask) {
    const int va = mask & 1, vb = (mask >> 1) & 1, vc = (mask >> 2) & 1;
    if (2 * va + 3 * vb + vc <= 4) best = std::min(best, -5.0 * va - 4.0 * vb - 3.0 * vc);
  }
  const Solution s = solve_milp(lp);
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(best));
  CHECK(s.values[a] == 1.0);
  CHECK(s.values[c] == 1.0);
}

TEST_CASE("MILP statuses") {
  SUBCASE("infeasible integrality") {
    LinearProgram lp;
    const auto a = lp.add_binary(1);
    const auto b = lp.add_binary(1);
    lp.add_constraint({{a, 1}, {b, 1}}, Relation::Equal, 1.5);
    const Solution s = solve_milp(lp);
    CHECK(s.status == SolveStatus::Infeasible);
  }
  SUBCASE("unbounded root") {
    LinearProgram lp;
    const auto a = lp.add_binary(1);
    const auto x = lp.add_variable(0, kInfinity, -1);
    lp.add_constraint({{a, 1}, {x, -1}}, Relation::LessEqual, 0.5);
    CHECK(solve_milp(lp).status == SolveStatus::Unbounded);
  }
  SUBCASE("node limit") {
    // Parity-style program with a fractional relaxation at every level.
    LinearProgram lp(Sense::Maximize);
    std::vector<Term> terms;
    for (int k = 0; k < 8; ++k) terms.push_back({lp.add_binary(1.0), 2.0});
    lp.add_constraint(terms, Relation::LessEqual, 7.0);
    lp.add_constraint(terms, Relation::GreaterEqual, 0.5);
    SolverConfig cfg;
    cfg.max_nodes = 1;
    CHECK(solve_milp(lp, cfg).status == SolveStatus::NodeLimit);
  }
}

TEST_CASE("random MILPs agree with binary enumeration") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    const LinearProgram lp = dea::testing::random_milp(rng, 8);
    const Solution expected = dea::testing::enumerate_binaries(lp);
    const Solution s = solve_milp(lp);
    CAPTURE(trial);
    REQUIRE(s.status == expected.status);
    if (!s.optimal()) continue;
    CHECK(std::abs(s.objective_value - expected.objective_value) <= 1e-7);
    CHECK(lp.max_violation(s.values) <= 1e-7);
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
      if (lp.binary_mask()[j]) {
        CHECK(std::min(std::abs(s.values[j]), std::abs(1 - s.values[j])) <= SolverConfig{}.int_tol);
      }
    }
  }
}
