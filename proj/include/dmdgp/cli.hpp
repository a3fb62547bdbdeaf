#pragma once

// Command-line front end. `run_cli` takes the argument list without the
// program name so tests can drive it in-process.
//
// Exit codes: 0 success (solve: at least one solution; verify: feasible),
// 1 negative result (no solution, infeasible, crosscheck mismatch), 2 error.

#include "dmdgp/dmdgp.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace dmdgp::cli {

enum class Format { text, csv };

struct RunConfig {
    std::string subcommand;
    std::string input;
    std::string embedding;
    std::string output;
    std::string stats_output;
    std::string truth_output;
    SolveMode mode = SolveMode::all;
    ToleranceConfig tol;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    Format format = Format::text;
    bool crosscheck = false;
    bool paper_window = false;
    std::string subset_sum;
    int K = 3;
    int n = 0;
    std::string pruning = "none";
    std::string oracle_kind;
};

namespace detail {

inline SubsetSumInstance parse_subset_sum(const std::string& s)
{
    SubsetSumInstance ss;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("subset-sum entries must be integers: '" + tok + "'");
        }
        if (used != tok.size() && tok.find_first_not_of(" \t", used) != std::string::npos)
            throw InvalidArgument("subset-sum entries must be integers: '" + tok + "'");
        ss.a.push_back(v);
    }
    ss.check();
    return ss;
}

// Writes to the named file, or to `fallback` when the name is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback)
    {
        if (path.empty()) {
            os_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_)
            throw Error("cannot write " + path);
        os_ = file_.get();
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

inline void write_instance_csv(std::ostream& out, const DgpInstance& inst)
{
    out << "u,v,d\n";
    for (const auto& [e, d] : inst.edges())
        out << e.u << ',' << e.v << ',' << format_real(d) << '\n';
}

inline void write_solutions_csv(std::ostream& out, const std::vector<Embedding>& sols, int K)
{
    out << "solution,chirality,vertex";
    for (int i = 1; i <= K; ++i)
        out << ",x" << i;
    out << '\n';
    for (std::size_t s = 0; s < sols.size(); ++s) {
        const auto chi = chirality_string(sols[s].chirality);
        for (Vertex v = 1; v <= sols[s].size(); ++v) {
            out << s + 1 << ',' << chi << ',' << v;
            for (int i = 0; i < K; ++i)
                out << ',' << format_real(sols[s].at(v)(i));
            out << '\n';
        }
    }
}

inline DgpInstance load_valid_instance(const RunConfig& cfg, std::ostream& err)
{
    auto inst = read_instance(cfg.input);
    const auto report = validate(inst, cfg.tol);
    if (!report.ok()) {
        err << "instance fails validation:\n" << report.summary() << '\n';
        throw Error("invalid instance " + cfg.input);
    }
    return inst;
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto inst = load_valid_instance(cfg, err);
    SolveOptions opt;
    opt.mode = cfg.mode;
    opt.tol = cfg.tol;
    opt.threads = cfg.threads;
    const auto res = solve(inst, opt);

    Sink sink(cfg.output, out);
    if (cfg.format == Format::csv) {
        if (cfg.mode == SolveMode::count)
            *sink << "count\n" << res.count << '\n';
        else
            write_solutions_csv(*sink, res.solutions, inst.K());
    } else {
        if (cfg.mode == SolveMode::count)
            *sink << "COUNT " << res.count << '\n';
        else
            write_solutions(*sink, res.solutions);
        std::ostringstream csv;
        write_stats_csv(csv, res.stats);
        std::string line;
        std::istringstream lines(csv.str());
        while (std::getline(lines, line))
            *sink << "# " << line << '\n';
    }
    if (!cfg.stats_output.empty()) {
        Sink stats(cfg.stats_output, out);
        write_stats_csv(*stats, res.stats);
    }
    err << "solutions=" << res.count << " time=" << res.stats.wall_time << "s\n";
    return res.count > 0 ? 0 : 1;
}

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto inst = load_valid_instance(cfg, err);
    const auto window = cfg.paper_window ? PruningWindow::literal : PruningWindow::corrected;
    const auto cls = classify(inst);
    const auto gens = pruning_group_generators(inst, window);

    WidthProfile profile = predict_profile(inst, window);
    std::optional<CrosscheckReport> check;
    if (cfg.crosscheck) {
        check = crosscheck(inst, cfg.tol, window, cfg.threads);
        profile = check->profile;
    }

    std::ostringstream head;
    head << cls.summary() << '\n';
    head << "generators=" << gens.size() << " predicted_solutions=2^" << gens.size()
         << " max_predicted_width=2^" << profile.max_exponent_after(inst.K())
         << (cfg.paper_window ? " window=literal" : " window=corrected") << '\n';
    if (check) {
        head << "crosscheck=" << (check->all_match() ? "match" : "mismatch") << " solutions=" << check->solutions;
        if (!check->all_match()) {
            head << " levels=";
            for (std::size_t i = 0; i < check->mismatched_levels.size(); ++i)
                head << (i ? "," : "") << check->mismatched_levels[i];
        }
        if (check->no_instance_divergence)
            head << " no-instance-divergence";
        head << '\n';
    }

    Sink sink(cfg.output, out);
    if (cfg.format == Format::csv) {
        err << head.str();
    } else {
        std::string line;
        std::istringstream lines(head.str());
        while (std::getline(lines, line))
            *sink << "# " << line << '\n';
    }
    write_profile_csv(*sink, profile);
    return check && !check->all_match() ? 1 : 0;
}

inline int cmd_reduce(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const auto ss = parse_subset_sum(cfg.subset_sum);
    const auto inst = reduce_subset_sum(ss, cfg.K);
    Sink sink(cfg.output, out);
    if (cfg.format == Format::csv)
        write_instance_csv(*sink, inst);
    else
        write_instance(*sink, inst);
    return 0;
}

inline int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const auto g = generate_random_yes(cfg.n, cfg.K, PruningSpec::parse(cfg.pruning), cfg.seed);
    {
        Sink sink(cfg.output, out);
        if (cfg.format == Format::csv)
            write_instance_csv(*sink, g.instance);
        else
            write_instance(*sink, g.instance);
    }
    if (!cfg.truth_output.empty()) {
        Sink truth(cfg.truth_output, out);
        if (cfg.format == Format::csv)
            write_solutions_csv(*truth, {g.truth}, cfg.K);
        else
            write_embedding(*truth, g.truth, 1);
    }
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const auto inst = read_instance(cfg.input);
    const auto sols = read_embeddings(cfg.embedding, inst.K());
    if (sols.empty())
        throw Error("no SOL block in " + cfg.embedding);
    Sink sink(cfg.output, out);
    if (cfg.format == Format::csv)
        *sink << "solution,u,v,distance,realized,residual\n";
    bool all_ok = true;
    for (std::size_t s = 0; s < sols.size(); ++s) {
        const auto r = verify_embedding(inst, sols[s], cfg.tol);
        all_ok = all_ok && r.feasible();
        for (const auto& v : r.violations) {
            if (cfg.format == Format::csv)
                *sink << s + 1 << ',' << v.edge.u << ',' << v.edge.v << ',' << format_real(v.distance) << ','
                      << format_real(v.realized) << ',' << format_real(v.residual()) << '\n';
            else
                *sink << "VIOLATION " << s + 1 << ' ' << v.edge.u << ' ' << v.edge.v << " d=" << format_real(v.distance)
                      << " realized=" << format_real(v.realized) << " residual=" << format_real(v.residual()) << '\n';
        }
        if (cfg.format == Format::text)
            *sink << "SOL " << s + 1 << ' ' << (r.feasible() ? "feasible" : "infeasible")
                  << " edges=" << r.edges_checked << " violations=" << r.violations.size()
                  << " max_residual=" << format_real(r.max_residual) << '\n';
    }
    return all_ok ? 0 : 1;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    Sink sink(cfg.output, out);
    if (cfg.oracle_kind == "subset-sum") {
        const auto sols = subset_sum_solutions(parse_subset_sum(cfg.subset_sum), false);
        for (const auto& s : sols)
            *sink << chirality_string(s) << '\n';
        return sols.empty() ? 1 : 0;
    }
    if (cfg.oracle_kind == "reduction-count") {
        const auto c = reduction_count_oracle(parse_subset_sum(cfg.subset_sum), cfg.K);
        *sink << "COUNT " << c << '\n';
        return c > 0 ? 0 : 1;
    }
    if (cfg.oracle_kind == "brute") {
        const auto inst = read_instance(cfg.input);
        const auto sols = brute_force_embeddings(inst, cfg.tol);
        if (cfg.format == Format::csv)
            write_solutions_csv(*sink, sols, inst.K());
        else
            write_solutions(*sink, sols);
        return sols.empty() ? 1 : 0;
    }
    throw InvalidArgument("unknown oracle '" + cfg.oracle_kind + "'");
}

inline void add_tolerance_flags(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option_function<double>(
           "--tol-prune",
           [&cfg](double t) {
               cfg.tol.prune_abs = t;
               cfg.tol.prune_rel = t;
           },
           "Pruning tolerance (absolute and relative parts)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-geom", cfg.tol.geometry, "Sphere-equation residual tolerance")->check(CLI::PositiveNumber);
}

inline void add_format_flag(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"text", Format::text}, {"csv", Format::csv}}));
}

} // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    using namespace detail;
    RunConfig cfg;
    CLI::App app{"Branch-and-Prune solver and symmetry analysis for discretizable distance geometry", "dmdgp"};
    app.require_subcommand(1);

    auto* solve_cmd = app.add_subcommand("solve", "Enumerate embeddings of an instance");
    solve_cmd->add_option("instance", cfg.input, "Instance file")->required();
    auto* mode = solve_cmd->add_option_group("mode");
    mode->add_flag_callback("--all", [&] { cfg.mode = SolveMode::all; }, "All solutions (default)");
    mode->add_flag_callback("--first", [&] { cfg.mode = SolveMode::first; }, "Stop at the first solution");
    mode->add_flag_callback("--count", [&] { cfg.mode = SolveMode::count; }, "Count solutions only");
    mode->require_option(0, 1);
    solve_cmd->add_option("-o,--output", cfg.output, "Solution file (default stdout)");
    solve_cmd->add_option("--stats", cfg.stats_output, "Write level,nodes,pruned CSV here");
    solve_cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    add_tolerance_flags(solve_cmd, cfg);
    add_format_flag(solve_cmd, cfg);

    auto* analyze_cmd = app.add_subcommand("analyze", "Predicted width profile and polynomial-case classification");
    analyze_cmd->add_option("instance", cfg.input, "Instance file")->required();
    analyze_cmd->add_flag("--crosscheck", cfg.crosscheck, "Run the solver and compare measured widths");
    analyze_cmd->add_flag("--paper-window", cfg.paper_window, "Use the literal [u+K, v] generator window");
    analyze_cmd->add_option("--threads", cfg.threads, "Worker threads for --crosscheck")->check(CLI::Range(1u, 1024u));
    analyze_cmd->add_option("-o,--output", cfg.output, "Output file (default stdout)");
    add_tolerance_flags(analyze_cmd, cfg);
    add_format_flag(analyze_cmd, cfg);

    auto* reduce_cmd = app.add_subcommand("reduce", "Build the instance encoding a Subset-Sum instance");
    reduce_cmd->add_option("--subset-sum", cfg.subset_sum, "Comma-separated positive integers")->required();
    reduce_cmd->add_option("--K", cfg.K, "Embedding dimension (>= 2)")->required();
    reduce_cmd->add_option("-o,--output", cfg.output, "Instance file (default stdout)");
    add_format_flag(reduce_cmd, cfg);

    auto* gen_cmd = app.add_subcommand("generate", "Random YES instance with its ground-truth embedding");
    gen_cmd->add_option("--n", cfg.n, "Vertex count")->required();
    gen_cmd->add_option("--K", cfg.K, "Embedding dimension")->required();
    gen_cmd->add_option("--pruning", cfg.pruning, "none | density:<p> | prop1:<v0> | prop2:<v0> | prop3:<v0>");
    gen_cmd->add_option("--seed", cfg.seed, "RNG seed");
    gen_cmd->add_option("-o,--output", cfg.output, "Instance file (default stdout)");
    gen_cmd->add_option("--truth", cfg.truth_output, "Ground-truth embedding file");
    add_format_flag(gen_cmd, cfg);

    auto* verify_cmd = app.add_subcommand("verify", "Check embeddings against every edge distance");
    verify_cmd->add_option("instance", cfg.input, "Instance file")->required();
    verify_cmd->add_option("embedding", cfg.embedding, "Embedding file (SOL/X records)")->required();
    verify_cmd->add_option("-o,--output", cfg.output, "Report file (default stdout)");
    add_tolerance_flags(verify_cmd, cfg);
    add_format_flag(verify_cmd, cfg);

    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force references");
    oracle_cmd->group("");
    oracle_cmd->add_option("kind", cfg.oracle_kind, "subset-sum | reduction-count | brute")->required();
    oracle_cmd->add_option("instance", cfg.input, "Instance file (brute)");
    oracle_cmd->add_option("--subset-sum", cfg.subset_sum, "Comma-separated positive integers");
    oracle_cmd->add_option("--K", cfg.K, "Embedding dimension");
    oracle_cmd->add_option("-o,--output", cfg.output, "Output file (default stdout)");
    add_tolerance_flags(oracle_cmd, cfg);
    add_format_flag(oracle_cmd, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd)
            return cmd_solve(cfg, out, err);
        if (*analyze_cmd)
            return cmd_analyze(cfg, out, err);
        if (*reduce_cmd)
            return cmd_reduce(cfg, out, err);
        if (*gen_cmd)
            return cmd_generate(cfg, out, err);
        if (*verify_cmd)
            return cmd_verify(cfg, out, err);
        if (*oracle_cmd)
            return cmd_oracle(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace dmdgp::cli
