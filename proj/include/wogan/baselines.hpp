#pragma once

#include <array>

#include "wogan/geometry.hpp"
#include "wogan/random.hpp"
#include "wogan/suite.hpp"
#include "wogan/sut.hpp"

namespace wogan {

/// c1 ~ U[-0.07, 0.07], then c_{i+1} ~ U[c_i - 0.05, c_i + 0.05] clamped to
/// the curvature range.
CurvatureTest random_walk_test(int d, Rng& rng);

/// Every component i.i.d. uniform on [-0.07, 0.07].
CurvatureTest uniform_random_test(int d, Rng& rng);

/// Uniform random search over d-component tests. Invalid draws are discarded
/// without consuming an execution.
TestSuite random_search_run(const TestExecutor& executor, const GeometryConfig& geometry, Budget budget, Rng& rng,
                            RecordSink sink = {}, int d = 5);

/// Settings of the Frenetic-style genetic baseline. Selection, passed-test
/// mutation and length jitter are stand-ins; the original tool does not fix
/// them.
struct FreneticConfig {
    int init_population = 60;
    int road_points = 20;
    int road_points_jitter = 5;
    double failure_threshold = 0.95;
    double passed_mutation_scale = 0.01;
    /// Probability that a passed-test mutation also adds or drops one point.
    double length_jitter_probability = 0.1;
    /// Probability of a uniform rather than fitness-proportional parent pick.
    double uniform_selection_floor = 0.05;

    void validate() const;
};

CurvatureTest mutate_reverse(const CurvatureTest& test);
CurvatureTest mutate_mirror(const CurvatureTest& test);
/// First ceil(d/2) components swap places with the rest.
CurvatureTest mutate_split_swap(const CurvatureTest& test);
/// Traverses the road backward: reversed order, negated sign.
CurvatureTest mutate_reverse_cartesian(const CurvatureTest& test);

/// The four exploitation mutants of a failed test, in the order reverse,
/// mirror, split-swap, reverse-cartesian.
std::array<CurvatureTest, 4> frenetic_mutate_failed(const CurvatureTest& test);

/// Gaussian perturbation of every component, clamped to range, plus an
/// occasional one-point length change.
CurvatureTest frenetic_mutate_passed(const CurvatureTest& test, const FreneticConfig& cfg, Rng& rng);

/// Throws BudgetTooSmall when a count budget is below init_population.
TestSuite frenetic_run(const TestExecutor& executor, const GeometryConfig& geometry, Budget budget,
                       const FreneticConfig& cfg, Rng& rng, RecordSink sink = {});

} // namespace wogan
