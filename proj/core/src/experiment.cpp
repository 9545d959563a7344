#include "basic/experiment.hpp"

#include "basic/clustering.hpp"
#include "basic/errors.hpp"
#include "basic/rng.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace basic {

std::string method_name(Method m) {
    return m == Method::BASIC ? "BASIC" : "SCORE";
}

void ExperimentPlan::validate() const {
    scenario.validate();
    if (cases.empty()) throw DomainError("plan needs at least one case");
    if (methods.empty()) throw DomainError("plan needs at least one method");
    if (replications < 1) throw DomainError("replications must be >= 1");
    for (const auto& c : cases)
        if (static_cast<Index>(c.beta_bipartite.size()) != scenario.Q)
            throw DomainError("case '" + c.name + "' needs " + std::to_string(scenario.Q) +
                              " bipartite ratios");
}

ExperimentPlan plan_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad plan JSON: ") + e.what());
    }
    ExperimentPlan plan;
    try {
        plan.scenario = scenario_from_json(j.at("scenario").dump());
        for (const auto& c : j.at("cases")) {
            CaseSpec cs;
            cs.name = c.at("name").get<std::string>();
            cs.beta_bipartite = c.at("beta_bipartite").get<std::vector<double>>();
            plan.cases.push_back(std::move(cs));
        }
        for (const auto& m : j.at("methods")) {
            std::string name = m.get<std::string>();
            if (name == "BASIC") plan.methods.push_back(Method::BASIC);
            else if (name == "SCORE") plan.methods.push_back(Method::SCORE);
            else throw ParseError("unknown method '" + name + "'");
        }
        plan.replications = j.value("replications", 50);
        plan.seed = j.value("seed", std::uint64_t{0});
        plan.output = j.value("output", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad plan field: ") + e.what());
    }
    plan.validate();
    return plan;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return plan_from_json(buf.str());
}

namespace {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("BASIC_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace

ExperimentResult run_plan(const ExperimentPlan& plan, int workers) {
    plan.validate();

    struct Cell {
        std::size_t case_idx;
        int replication;
    };
    std::vector<Cell> cells;
    for (std::size_t c = 0; c < plan.cases.size(); ++c)
        for (int r = 0; r < plan.replications; ++r)
            cells.push_back({c, r});

    const std::size_t methods_per_cell = plan.methods.size();
    std::vector<ResultRow> rows(cells.size() * methods_per_cell);

    auto run_cell = [&](std::size_t cell_idx) {
        const Cell& cell = cells[cell_idx];
        const CaseSpec& cs = plan.cases[cell.case_idx];

        ScenarioConfig cfg = plan.scenario;
        cfg.beta_bipartite = cs.beta_bipartite;
        cfg.replications = plan.replications;
        cfg.seed = plan.seed;

        ScenarioDraw draw;
        std::string build_error;
        try {
            draw = build_scenario(cfg, cell.case_idx, cell.replication);
        } catch (const std::exception& e) {
            build_error = e.what();
        }

        for (std::size_t mi = 0; mi < methods_per_cell; ++mi) {
            ResultRow& row = rows[cell_idx * methods_per_cell + mi];
            row.case_name = cs.name;
            row.method = plan.methods[mi];
            row.replication = cell.replication;
            row.seed_used = plan.seed;
            if (!build_error.empty()) {
                row.error = build_error;
                continue;
            }
            const auto t0 = std::chrono::steady_clock::now();
            try {
                Rng rng = substream(plan.seed,
                                    {cell.case_idx, static_cast<std::uint64_t>(cell.replication),
                                     0x4d00 + static_cast<std::uint64_t>(row.method)});
                DetectOptions opts;
                DetectResult res = (row.method == Method::BASIC)
                                       ? basic_detect(draw.primary, draw.bipartite, cfg.K, opts, rng)
                                       : score_detect(draw.primary, cfg.K, opts, rng);
                row.ari = ari(res.labels, draw.truth);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
        }
    };

    const int nworkers = resolve_workers(workers);
    if (nworkers <= 1 || cells.size() <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
                    run_cell(i);
            });
        for (auto& t : pool) t.join();
    }

    ExperimentResult result;
    result.rows = std::move(rows);
    for (const auto& cs : plan.cases)
        for (Method m : plan.methods) {
            SummaryRow s;
            s.case_name = cs.name;
            s.method = m;
            double sum = 0.0, sum2 = 0.0;
            for (const auto& row : result.rows) {
                if (row.case_name != cs.name || row.method != m || !row.error.empty()) continue;
                sum += row.ari;
                sum2 += row.ari * row.ari;
                ++s.count;
            }
            if (s.count > 0) {
                s.mean_ari = sum / s.count;
                double var = s.count > 1 ? (sum2 - sum * sum / s.count) / (s.count - 1) : 0.0;
                s.sd_ari = std::sqrt(std::max(var, 0.0));
            }
            result.summaries.push_back(std::move(s));
        }
    return result;
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void write_results_csv(const std::string& path, const ExperimentResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "case,method,replication,ari,seed,error\n";
    for (const auto& row : result.rows)
        out << row.case_name << ',' << method_name(row.method) << ',' << row.replication << ','
            << (row.error.empty() ? format_double(row.ari) : "") << ',' << row.seed_used << ','
            << row.error << '\n';
}

void write_summary_csv(const std::string& path, const ExperimentResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "case,method,mean_ari,sd_ari,replications\n";
    for (const auto& s : result.summaries)
        out << s.case_name << ',' << method_name(s.method) << ',' << format_double(s.mean_ari)
            << ',' << format_double(s.sd_ari) << ',' << s.count << '\n';
}

void write_timing_csv(const std::string& path, const ExperimentResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "case,method,replication,runtime_ms\n";
    for (const auto& row : result.rows)
        out << row.case_name << ',' << method_name(row.method) << ',' << row.replication << ','
            << row.runtime_ms << '\n';
}

} // namespace basic
