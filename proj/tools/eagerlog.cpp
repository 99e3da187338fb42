#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eagerlog/bench.hpp"
#include "eagerlog/engine.hpp"
#include "eagerlog/parser.hpp"

namespace fs = std::filesystem;
using namespace eagerlog;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UserError("cannot read " + path.string());
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw UserError("cannot write " + path.string());
}

struct CommonArgs {
    std::string program;
    std::string facts = ".";
    std::string oracle = "mock";
    std::string solver = "z3";
    std::uint32_t latency_us = 0;
    std::string cache_policy = "replace";
    bool delta_first = false;
    bool parallel_outer = false;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("program", a.program, "Datalog program (.dl)")->required();
    cmd->add_option("--facts", a.facts, "Directory of <pred>.facts files for input predicates");
    cmd->add_flag("--delta-first", a.delta_first, "Semi-naive: evaluate the delta atom first");
    cmd->add_flag("--parallel-outer", a.parallel_outer, "Semi-naive: split the outer loop across threads");
    cmd->add_option("--oracle", a.oracle, "Oracle backend")->check(CLI::IsMember({"mock", "smtlib"}));
    cmd->add_option("--solver", a.solver, "SMT-LIB solver executable (run with -in)");
    cmd->add_option("--oracle-latency-us", a.latency_us, "Mock oracle latency per cache miss");
    cmd->add_option("--cache-policy", a.cache_policy, "Conjunct cache policy")
        ->check(CLI::IsMember({"replace", "union"}));
    cmd->add_option("--seed", a.seed, "Seed for steal-victim selection");
}

struct Loaded {
    Interner interner;
    FunctorRegistry functors;
    Program program;
    std::map<std::string, std::vector<Tuple>> inputs;
};

std::unique_ptr<Loaded> load(const CommonArgs& a) {
    auto l = std::make_unique<Loaded>();
    register_builtins(l->functors);
    l->program = parse_program(read_file(a.program), l->interner, a.program);
    for (const auto& d : l->program.decls()) {
        if (d.kind != PredKind::Input) continue;
        fs::path path = fs::path(a.facts) / (d.name + ".facts");
        if (!fs::exists(path)) {
            std::cerr << "warning: " << path.string() << " not found; " << d.name << " is empty\n";
            l->inputs[d.name] = {};
            continue;
        }
        l->inputs[d.name] = parse_facts(d.name, d.arity, read_file(path), l->interner, path.string());
    }
    return l;
}

EngineOptions options_from(const CommonArgs& a, EngineKind kind, std::size_t threads) {
    EngineOptions o;
    o.kind = kind;
    o.threads = threads;
    o.delta_first = a.delta_first;
    o.parallel_outer = a.parallel_outer;
    o.seed = a.seed;
    o.oracle.backend = a.oracle == "smtlib" ? OracleBackend::SmtLib : OracleBackend::Mock;
    o.oracle.policy = a.cache_policy == "union" ? CachePolicy::Union : CachePolicy::Replace;
    o.oracle.latency_us = a.latency_us;
    o.oracle.solver_path = a.solver;
    return o;
}

std::map<std::string, std::string> dumps(const Loaded& l, const Database& db) {
    std::map<std::string, std::string> out;
    for (const auto& d : l.program.decls())
        if (d.kind == PredKind::Output) out[d.name] = db.dump(d.name, l.interner);
    return out;
}

int cmd_run(const CommonArgs& a, const std::string& engine, std::size_t threads, const std::string& out_dir,
            const std::string& metrics) {
    auto l = load(a);
    RunResult r = evaluate(l->program, l->functors, l->interner, l->inputs, options_from(a, parse_engine(engine), threads));
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw UserError("cannot create output directory " + out_dir + ": " + ec.message());
    for (const auto& [pred, text] : dumps(*l, *r.db)) write_file(fs::path(out_dir) / (pred + ".csv"), text);
    if (!metrics.empty()) emit_csv(r.metrics, metrics);
    return 0;
}

int cmd_compare(const CommonArgs& a, const std::vector<std::string>& engines, const std::vector<std::size_t>& threads,
                std::size_t repeats, const std::string& out_path) {
    auto l = load(a);
    std::vector<RunMetrics> rows;
    std::map<std::string, std::string> reference;
    std::string reference_name;
    for (const auto& e : engines) {
        EngineKind kind = parse_engine(e);
        for (std::size_t t : threads) {
            for (std::size_t rep = 0; rep < repeats; ++rep) {
                RunResult r = evaluate(l->program, l->functors, l->interner, l->inputs, options_from(a, kind, t));
                auto d = dumps(*l, *r.db);
                std::string name = e + "/" + std::to_string(t) + "/" + std::to_string(rep);
                if (reference_name.empty()) {
                    reference = std::move(d);
                    reference_name = name;
                } else if (d != reference) {
                    for (const auto& [pred, text] : d)
                        if (reference[pred] != text)
                            std::cerr << "error: " << pred << " differs between " << reference_name << " and " << name
                                      << "\n";
                    return 2;
                }
                rows.push_back(r.metrics);
            }
        }
    }
    std::size_t workers = 0;
    for (const auto& m : rows) workers = std::max(workers, m.per_worker.size());
    std::ostringstream csv;
    csv << csv_header(workers) << '\n';
    for (const auto& m : rows) csv << csv_row(m, workers) << '\n';
    if (out_path.empty())
        std::cout << csv.str();
    else
        write_file(out_path, csv.str());
    return 0;
}

int cmd_bench_gen(const TreeReachParams& p, const std::string& out_dir) {
    TreeReachInstance inst = generate_tree_reach(p);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw UserError("cannot create output directory " + out_dir + ": " + ec.message());
    write_file(fs::path(out_dir) / "program.dl", inst.program);
    write_file(fs::path(out_dir) / "edge.facts", inst.edge_facts());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"eagerlog: bottom-up Datalog with naive, semi-naive and eager evaluation"};
    app.require_subcommand(1);

    CommonArgs run_args;
    std::string engine = "seminaive", out_dir = "out", metrics;
    std::size_t threads = 1;
    auto* run = app.add_subcommand("run", "Evaluate a program and dump its output relations");
    add_common(run, run_args);
    run->add_option("--engine", engine, "naive | seminaive | eager")
        ->check(CLI::IsMember({"naive", "seminaive", "eager"}));
    run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Directory for <pred>.csv dumps");
    run->add_option("--metrics", metrics, "Write run metrics CSV here");

    CommonArgs cmp_args;
    std::vector<std::string> engines{"seminaive", "eager"};
    std::vector<std::size_t> thread_list{1};
    std::size_t repeats = 1;
    std::string cmp_out;
    auto* cmp = app.add_subcommand("compare", "Run several configurations, check equal outputs, print metrics");
    add_common(cmp, cmp_args);
    cmp->add_option("--engines", engines, "Engines to run")->delimiter(',');
    cmp->add_option("--threads", thread_list, "Thread counts")->delimiter(',')->check(CLI::PositiveNumber);
    cmp->add_option("--repeats", repeats, "Runs per configuration")->check(CLI::PositiveNumber);
    cmp->add_option("--out", cmp_out, "Write the comparison CSV here instead of stdout");

    TreeReachParams tree;
    std::string kind = "tree-reach", gen_out = "bench";
    auto* gen = app.add_subcommand("bench-gen", "Generate a benchmark program and its facts");
    gen->add_option("--kind", kind, "Benchmark family")->check(CLI::IsMember({"tree-reach"}));
    gen->add_option("--depth", tree.depth, "Tree depth");
    gen->add_option("--branching", tree.branching, "Children per node");
    gen->add_option("--contradiction-rate", tree.contradiction_rate, "Fraction of contradicting edge labels");
    gen->add_option("--seed", tree.seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output directory (program.dl, edge.facts)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(run_args, engine, threads, out_dir, metrics);
        if (*cmp) return cmd_compare(cmp_args, engines, thread_list, repeats, cmp_out);
        if (*gen) return cmd_bench_gen(tree, gen_out);
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
