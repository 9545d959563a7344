// Command-line front end: simulate / analyze / scree / verify.
//
// Exit codes: 0 success, 1 validation error, 2 numeric failure,
// 3 verification-clause failure.

#include "basic/clustering.hpp"
#include "basic/errors.hpp"
#include "basic/experiment.hpp"
#include "basic/genmodel.hpp"
#include "basic/graph.hpp"
#include "basic/population.hpp"
#include "basic/spectral.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace basic;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerification = 3;

std::string stem_of(const std::string& path) {
    auto dot = path.find_last_of('.');
    auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

int cmd_simulate(const std::string& plan_path, const std::string& output_override,
                 std::uint64_t seed_override, bool seed_set, int reps_override, bool full,
                 bool timing) {
    ExperimentPlan plan = load_plan(plan_path);
    if (seed_set) plan.seed = seed_override;
    if (reps_override > 0) plan.replications = reps_override;
    if (full) plan.replications = 200;
    std::string output = output_override.empty() ? plan.output : output_override;
    if (output.empty()) output = "results.csv";

    ExperimentResult result = run_plan(plan);
    write_results_csv(output, result);
    write_summary_csv(stem_of(output) + ".summary.csv", result);
    if (timing) write_timing_csv(stem_of(output) + ".timing.csv", result);

    long failures = 0;
    for (const auto& row : result.rows)
        if (!row.error.empty()) ++failures;
    for (const auto& s : result.summaries)
        std::cout << s.case_name << ' ' << method_name(s.method) << " mean_ari="
                  << s.mean_ari << " sd=" << s.sd_ari << " n=" << s.count << '\n';
    std::cout << "wrote " << output << " (" << result.rows.size() << " rows, " << failures
              << " failed)\n";
    return failures == 0 ? kExitOk : kExitNumeric;
}

int cmd_analyze(const std::string& primary_path, const std::vector<std::string>& bipartite_paths,
                Index K, Index core, const std::string& output, bool zero_based) {
    EdgeListLoad load = load_edge_list(primary_path, GraphKind::Primary, 0, 0, zero_based);
    SymmetricAdjacency a = make_primary(load);
    if (load.self_loops_dropped > 0)
        std::cerr << "warning: dropped " << load.self_loops_dropped << " self-loop(s)\n";

    std::vector<BipartiteAdjacency> bs;
    for (const auto& path : bipartite_paths) {
        EdgeListLoad bl = load_edge_list(path, GraphKind::Bipartite, a.node_count(), 0, zero_based);
        bs.push_back(make_bipartite(bl));
    }

    // node-id bookkeeping across the restrictions
    std::vector<Index> original_ids(a.node_count());
    for (Index i = 0; i < a.node_count(); ++i) original_ids[i] = i;

    if (core > 0) {
        NodeSubset cs = c_core(a, core);
        if (cs.size() == 0) throw DomainError("c-core is empty at c=" + std::to_string(core));
        a = restrict_to(a, cs);
        for (auto& b : bs) b = restrict_rows(b, cs);
        std::vector<Index> ids;
        for (Index orig : cs.kept) ids.push_back(original_ids[orig]);
        original_ids = std::move(ids);

        NodeSubset lcc = largest_connected_component(a);
        a = restrict_to(a, lcc);
        for (auto& b : bs) b = restrict_rows(b, lcc);
        ids.clear();
        for (Index orig : lcc.kept) ids.push_back(original_ids[orig]);
        original_ids = std::move(ids);
    }

    if (K > a.node_count()) throw DomainError("K exceeds surviving node count");

    DetectOptions opts;
    Rng rng = substream(0, {0xa11a});
    Eigen::MatrixXd m = aggregate(a, bs);
    const Index spectrum_k = std::min<Index>(K + 1, a.node_count());
    EigenPack eig = top_k_eigen(m, spectrum_k, opts.eigen);

    EigenPack top_k;
    top_k.values = eig.values.head(K);
    top_k.vectors = eig.vectors.leftCols(K);
    Eigen::MatrixXd ratio = score_ratio(top_k, std::log(static_cast<double>(a.node_count())));
    KMeansOptions kopts;
    kopts.K = K;
    KMeansResult km = kmeans(ratio, kopts, rng);

    const Index base = zero_based ? 0 : 1;
    std::string labels_path = output.empty() ? "labels.csv" : output;
    {
        std::ofstream out(labels_path, std::ios::binary);
        if (!out) throw ParseError("cannot write '" + labels_path + "'");
        out << "node_id,community\n";
        for (Index i = 0; i < a.node_count(); ++i)
            out << (original_ids[i] + base) << ',' << (km.labels[i] + 1) << '\n';
    }

    nlohmann::json diag;
    diag["nodes"] = a.node_count();
    diag["edges"] = a.edge_count();
    diag["density"] = density(a);
    diag["eigenvalues"] = std::vector<double>(eig.values.data(), eig.values.data() + eig.values.size());
    if (spectrum_k > K) {
        double gap = eigengap_ratio(eig.values, K);
        diag["eigengap_ratio"] = gap;
        diag["weak_signal"] = gap < kWeakSignalEigengap;
    }
    std::string diag_path = stem_of(labels_path) + ".diagnostics.json";
    std::ofstream dout(diag_path, std::ios::binary);
    dout << diag.dump(2) << '\n';

    std::cout << "wrote " << labels_path << " and " << diag_path << '\n';
    if (diag.contains("weak_signal") && diag["weak_signal"].get<bool>())
        std::cout << "note: eigengap ratio " << diag["eigengap_ratio"].get<double>()
                  << " < " << kWeakSignalEigengap << " flags a weak-signal network\n";
    return kExitOk;
}

int cmd_scree(const std::string& primary_path, const std::vector<std::string>& bipartite_paths,
              Index kmax, const std::string& output, bool zero_based) {
    EdgeListLoad load = load_edge_list(primary_path, GraphKind::Primary, 0, 0, zero_based);
    SymmetricAdjacency a = make_primary(load);
    std::vector<BipartiteAdjacency> bs;
    for (const auto& path : bipartite_paths) {
        EdgeListLoad bl = load_edge_list(path, GraphKind::Bipartite, a.node_count(), 0, zero_based);
        bs.push_back(make_bipartite(bl));
    }
    if (kmax > a.node_count()) throw DomainError("kmax exceeds node count");

    Eigen::MatrixXd m = aggregate(a, bs);
    Eigen::VectorXd values = spectrum_abs_sorted(m).head(kmax);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!output.empty()) {
        file.open(output, std::ios::binary);
        if (!file) throw ParseError("cannot write '" + output + "'");
        out = &file;
    }
    *out << "k,eigenvalue,gap_ratio\n";
    for (Index k = 0; k < kmax; ++k) {
        *out << (k + 1) << ',' << format_double(values[k]) << ',';
        if (k + 1 < kmax && values[k] != 0.0)
            *out << format_double(1.0 - values[k + 1] / values[k]);
        *out << '\n';
    }
    return kExitOk;
}

PopulationSpec spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad spec JSON: ") + e.what());
    }
    auto as_matrix = [](const nlohmann::json& rows) {
        Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows[i].size(); ++k)
                m(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k].get<double>();
        return m;
    };
    auto as_vector = [](const nlohmann::json& arr) {
        Eigen::VectorXd v(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i)
            v[static_cast<Index>(i)] = arr[i].get<double>();
        return v;
    };
    auto as_labels = [](const nlohmann::json& arr, Index K) {
        Labels l;
        for (const auto& x : arr) l.push_back(x.get<Index>() - 1);  // 1-based in files
        return Membership(K, std::move(l));
    };

    PopulationSpec spec;
    spec.theta = as_vector(j.at("theta"));
    spec.E = as_matrix(j.at("E"));
    spec.memb_t = as_labels(j.at("labels_t"), static_cast<Index>(spec.E.rows()));
    if (j.contains("Fs") && !j["Fs"].empty()) {
        for (const auto& f : j["Fs"]) spec.Fs.push_back(as_matrix(f));
        spec.delta = as_vector(j.at("delta"));
        spec.memb_s = as_labels(j.at("labels_s"), static_cast<Index>(spec.Fs[0].cols()));
    } else {
        spec.memb_s = sequential_membership({1});
    }
    spec.validate();
    return spec;
}

int cmd_verify(const std::string& spec_path, const std::vector<std::uint64_t>& random_args,
               int deviation_draws, const std::string& output) {
    PopulationSpec spec;
    if (!spec_path.empty()) {
        spec = spec_from_json_file(spec_path);
    } else if (random_args.size() == 4) {
        spec = random_spec(static_cast<Index>(random_args[0]), static_cast<Index>(random_args[1]),
                           static_cast<Index>(random_args[2]), random_args[3]);
    } else {
        throw DomainError("provide a spec file or --random n K Q seed");
    }

    PopulationDecomposition decomp = population_aggregate(spec);
    Proposition1Report prop1 = check_proposition1(spec, decomp);
    Eigen::MatrixXd ratio = population_ratio(decomp);
    SeparationReport sep = ratio_separation(ratio, spec.memb_t.labels);

    const double tol = 1e-9;
    const bool prop1_ok = prop1.pass(tol);
    const bool separation_ok = spec.K() < 2 ||
                           (sep.max_within_spread <= tol && sep.min_between >= 2.0 - tol);
    const bool identity_ok = decomp.gram_vs_factored <= 1e-10;

    nlohmann::json report;
    report["proposition1"] = {{"eigenvalue_dev", prop1.eigenvalue_dev},
                              {"row_dev", prop1.row_dev},
                              {"row_norm_dev", prop1.row_norm_dev},
                              {"subspace_fallback", prop1.subspace_fallback},
                              {"pass", prop1_ok}};
    report["ratio_separation"] = {{"max_within_spread", sep.max_within_spread},
                                  {"min_between", sep.min_between},
                                  {"pass", separation_ok}};
    report["aggregation_identity"] = {{"gram_vs_factored", decomp.gram_vs_factored},
                                      {"diagonal_discrepancy", decomp.diagonal_discrepancy},
                                      {"pass", identity_ok}};
    report["snr"] = {{"basic", snr_basic(spec.E, spec.Fs)}, {"primary", snr_primary(spec.E)}};
    if (decomp.rank_warning) report["warnings"].push_back("sbar is rank-deficient below K");
    {
        double scale = signal_scale(spec);
        double max_signal = std::abs(spectrum_abs_sorted(spec.E)[0]);
        for (const auto& f : spec.Fs) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
            max_signal = std::max(max_signal, svd.singularValues()[0]);
        }
        report["signal_scale"] = scale;
        if (max_signal <= scale)
            report["warnings"].push_back("largest transition signal does not dominate sqrt(log(n)Z) scale");
    }
    if (deviation_draws > 0) {
        DeviationSummary dev = deviation_mc(spec, deviation_draws, 7);
        report["deviation"] = {{"draws", deviation_draws},
                               {"max_ratio", dev.max_ratio},
                               {"mean_ratio", dev.mean_ratio}};
    }
    const bool all_pass = prop1_ok && separation_ok && identity_ok;
    report["pass"] = all_pass;

    if (output.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw ParseError("cannot write '" + output + "'");
        out << report.dump(2) << '\n';
        std::cout << "wrote " << output << (all_pass ? " (all clauses pass)\n" : " (FAILURES)\n");
    }
    return all_pass ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BASIC: bipartite-assisted spectral community detection"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run an experiment plan to CSV");
    std::string plan_path, sim_output;
    std::uint64_t sim_seed = 0;
    int sim_reps = 0;
    bool sim_full = false, sim_timing = false;
    sim->add_option("plan", plan_path, "plan JSON file")->required();
    sim->add_option("--output", sim_output, "results CSV path");
    auto* seed_opt = sim->add_option("--seed", sim_seed, "override the plan seed");
    sim->add_option("--reps", sim_reps, "override replication count");
    sim->add_flag("--full", sim_full, "run the full 200 replications");
    sim->add_flag("--timing", sim_timing, "write a per-row timing sidecar");

    // analyze
    auto* ana = app.add_subcommand("analyze", "detect communities in network files");
    std::string ana_primary, ana_output;
    std::vector<std::string> ana_bipartite;
    Index ana_k = 2, ana_core = 0;
    bool ana_zero = false;
    ana->add_option("primary", ana_primary, "primary edge-list file")->required();
    ana->add_option("--bipartite", ana_bipartite, "bipartite edge-list files");
    ana->add_option("--k", ana_k, "number of communities")->required();
    ana->add_option("--core", ana_core, "extract the c-core then the largest component");
    ana->add_option("--output", ana_output, "labels CSV path");
    ana->add_flag("--zero-based", ana_zero, "node ids in files are 0-based");

    // scree
    auto* scr = app.add_subcommand("scree", "top eigenvalues of the aggregated matrix");
    std::string scr_primary, scr_output;
    std::vector<std::string> scr_bipartite;
    Index scr_kmax = 30;
    bool scr_zero = false;
    scr->add_option("primary", scr_primary, "primary edge-list file")->required();
    scr->add_option("--bipartite", scr_bipartite, "bipartite edge-list files");
    scr->add_option("--kmax", scr_kmax, "number of eigenvalues");
    scr->add_option("--output", scr_output, "CSV path (stdout if omitted)");
    scr->add_flag("--zero-based", scr_zero, "node ids in files are 0-based");

    // verify
    auto* ver = app.add_subcommand("verify", "population-theory checks");
    std::string ver_spec, ver_output;
    std::vector<std::uint64_t> ver_random;
    int ver_draws = 0;
    ver->add_option("spec", ver_spec, "population spec JSON file");
    ver->add_option("--random", ver_random, "generate a random spec: n K Q seed")
        ->expected(4);
    ver->add_option("--draws", ver_draws, "Monte-Carlo deviation draws (0 = skip)");
    ver->add_option("--output", ver_output, "report JSON path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim)
            return cmd_simulate(plan_path, sim_output, sim_seed, seed_opt->count() > 0, sim_reps,
                                sim_full, sim_timing);
        if (*ana) return cmd_analyze(ana_primary, ana_bipartite, ana_k, ana_core, ana_output, ana_zero);
        if (*scr) return cmd_scree(scr_primary, scr_bipartite, scr_kmax, scr_output, scr_zero);
        if (*ver) return cmd_verify(ver_spec, ver_random, ver_draws, ver_output);
    } catch (const basic::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}
