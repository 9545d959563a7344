#include "basic/errors.hpp"
#include "basic/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace basic;

namespace {

const char* kPlanJson = R"({
  "schema_version": 1,
  "scenario": {
    "n": 60, "m": 30, "K": 2, "Kp": 2, "Q": 2,
    "community_sizes": [30, 30],
    "bipartite_community_sizes": [15, 15],
    "beta_primary": 0.2,
    "avg_degree": 10.0,
    "seed": 4242
  },
  "cases": [
    {"name": "weak", "beta_bipartite": [0.5, 0.5]},
    {"name": "strong", "beta_bipartite": [0.1, 0.1]}
  ],
  "methods": ["BASIC", "SCORE"],
  "replications": 3,
  "seed": 4242,
  "output": "out.csv"
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("plan parsing and validation") {
    auto plan = plan_from_json(kPlanJson);
    CHECK(plan.scenario.n == 60);
    CHECK(plan.cases.size() == 2);
    CHECK(plan.cases[1].name == "strong");
    CHECK(plan.methods.size() == 2);
    CHECK(plan.replications == 3);
    CHECK_NOTHROW(plan.validate());

    auto bad_case = plan;
    bad_case.cases[0].beta_bipartite = {0.5};  // wrong length for Q=2
    CHECK_THROWS_AS(bad_case.validate(), DomainError);

    auto no_methods = plan;
    no_methods.methods.clear();
    CHECK_THROWS_AS(no_methods.validate(), DomainError);

    CHECK_THROWS_AS(plan_from_json("{not json"), ParseError);
}

TEST_CASE("run_plan row layout and summary consistency") {
    auto plan = plan_from_json(kPlanJson);
    auto result = run_plan(plan);
    CHECK(result.rows.size() == 2 * 3 * 2);  // cases x reps x methods
    CHECK(result.summaries.size() == 4);
    for (const auto& row : result.rows) CHECK(row.error.empty());

    // summary means reproduce the row means exactly
    for (const auto& s : result.summaries) {
        double sum = 0.0;
        int count = 0;
        for (const auto& row : result.rows)
            if (row.case_name == s.case_name && row.method == s.method) {
                sum += row.ari;
                ++count;
            }
        CHECK(count == s.count);
        CHECK(std::abs(sum / count - s.mean_ari) <= 1e-12);
    }
}

TEST_CASE("identical plans give byte-identical results files") {
    auto plan = plan_from_json(kPlanJson);
    auto r1 = run_plan(plan, 3);
    auto r2 = run_plan(plan, 1);  // different worker counts, same bytes
    write_results_csv("exp_det_a.csv", r1);
    write_results_csv("exp_det_b.csv", r2);
    CHECK(slurp("exp_det_a.csv") == slurp("exp_det_b.csv"));
    CHECK(!slurp("exp_det_a.csv").empty());
    std::remove("exp_det_a.csv");
    std::remove("exp_det_b.csv");
}

TEST_CASE("single-method plans run") {
    auto plan = plan_from_json(kPlanJson);
    plan.methods = {Method::SCORE};
    plan.replications = 2;
    auto result = run_plan(plan);
    CHECK(result.rows.size() == 2 * 2);
    for (const auto& row : result.rows) CHECK(row.method == Method::SCORE);
}

TEST_CASE("csv writers produce the documented headers") {
    auto plan = plan_from_json(kPlanJson);
    plan.replications = 1;
    auto result = run_plan(plan);
    write_results_csv("exp_hdr.csv", result);
    write_summary_csv("exp_hdr_summary.csv", result);
    write_timing_csv("exp_hdr_timing.csv", result);

    std::ifstream res("exp_hdr.csv");
    std::string line;
    std::getline(res, line);
    CHECK(line == "case,method,replication,ari,seed,error");
    int rows = 0;
    while (std::getline(res, line)) ++rows;
    CHECK(rows == 4);

    std::ifstream sum("exp_hdr_summary.csv");
    std::getline(sum, line);
    CHECK(line == "case,method,mean_ari,sd_ari,replications");

    std::remove("exp_hdr.csv");
    std::remove("exp_hdr_summary.csv");
    std::remove("exp_hdr_timing.csv");
}

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 12345.6789, 1e-17, 0.0, -2.5}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}
