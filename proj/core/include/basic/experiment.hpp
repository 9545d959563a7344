#ifndef BASIC_EXPERIMENT_HPP
#define BASIC_EXPERIMENT_HPP

#include "basic/genmodel.hpp"
#include "basic/spectral.hpp"

#include <string>
#include <vector>

namespace basic {

enum class Method { BASIC, SCORE };

std::string method_name(Method m);

/// One named column of bipartite out-in ratios (a "case" of the design).
struct CaseSpec {
    std::string name;
    std::vector<double> beta_bipartite;  // length scenario.Q
};

struct ExperimentPlan {
    ScenarioConfig scenario;  // beta_bipartite ignored; cases supply it
    std::vector<CaseSpec> cases;
    std::vector<Method> methods;
    int replications = 50;
    std::uint64_t seed = 0;
    std::string output;

    void validate() const;
};

ExperimentPlan plan_from_json(const std::string& text);
ExperimentPlan load_plan(const std::string& path);

struct ResultRow {
    std::string case_name;
    Method method = Method::BASIC;
    int replication = 0;
    double ari = 0.0;
    long runtime_ms = 0;
    std::uint64_t seed_used = 0;
    std::string error;  // empty on success
};

struct SummaryRow {
    std::string case_name;
    Method method = Method::BASIC;
    double mean_ari = 0.0;
    double sd_ari = 0.0;
    int count = 0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;        // deterministic (case, rep, method) order
    std::vector<SummaryRow> summaries;  // per case x method
};

/// Runs every (case, replication, method) cell over a bounded worker
/// pool. Per-row RNG substreams make the result independent of
/// scheduling; workers <= 0 reads BASIC_WORKERS, then the hardware
/// concurrency.
ExperimentResult run_plan(const ExperimentPlan& plan, int workers = 0);

/// Results CSV (header row, '.' decimal separator, 17 significant
/// digits). Runtime is excluded so identical seeds give identical bytes;
/// the summary file carries the aggregate statistics.
void write_results_csv(const std::string& path, const ExperimentResult& result);
void write_summary_csv(const std::string& path, const ExperimentResult& result);

/// Per-row wall-clock sidecar (not byte-reproducible by nature).
void write_timing_csv(const std::string& path, const ExperimentResult& result);

std::string format_double(double v);  // shortest 17-significant-digit form

} // namespace basic

#endif // BASIC_EXPERIMENT_HPP
