// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eagerlog/bench.hpp"
#include "eagerlog/error.hpp"
#include "harness.hpp"
#include "lincheck.hpp"
#include "oracles.hpp"

using namespace eagerlog;
using support::IntRows;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failure messages of a criterion.
class Check {
public:
    void fail(const std::string& msg) {
        if (failures_++ < 5) detail_ << (detail_.tellp() > 0 ? "; " : "") << msg;
    }
    void note(const std::string& msg) { notes_ << (notes_.tellp() > 0 ? ", " : "") << msg; }
    Outcome done() const {
        if (failures_ == 0) return {true, notes_.str()};
        return {false, std::to_string(failures_) + " failure(s): " + detail_.str()};
    }

private:
    std::size_t failures_ = 0;
    std::ostringstream detail_;
    std::ostringstream notes_;
};

// 1. Every engine configuration derives the same relations.
Outcome engine_equivalence() {
    Check c;
    std::uint64_t derived = 0;
    auto compare_all = [&](const std::string& label, const std::function<std::unique_ptr<support::Fixture>()>& load) {
        std::optional<support::Dumps> ref;
        for (const auto& o : support::engine_matrix(7)) {
            auto f = load();
            auto r = support::run(*f, o);
            auto d = support::dumps(*f, *r.db);
            if (!ref) {
                ref = d;
                derived += r.metrics.derived;
            } else if (d != *ref) c.fail(label + " differs under " + support::describe(o));
        }
    };
    auto names = support::corpus_names();
    for (const auto& name : names) compare_all(name, [&] { return support::load_corpus(name); });
    std::mt19937_64 rng(2024);
    const int programs = 200;
    for (int i = 0; i < programs; ++i) {
        auto rp = support::random_program(rng);
        compare_all("random #" + std::to_string(i), [&] { return support::load_text(rp.text, rp.facts); });
    }
    c.note(std::to_string(names.size()) + " corpus + " + std::to_string(programs) + " random programs x " +
           std::to_string(support::engine_matrix().size()) + " configurations, " +
           std::to_string(derived) + " facts derived");
    return c.done();
}

// 2. Non-linear closure against Floyd-Warshall.
Outcome nonlinear_closure() {
    Check c;
    const char* text = ".decl edge(2) input\n.decl reach(2) output\n"
                       "reach(X, Y) :- edge(X, Y).\n"
                       "reach(X, Z) :- reach(X, Y), reach(Y, Z).\n";
    std::mt19937_64 rng(99);
    for (int g = 0; g < 50; ++g) {
        int n = 1 + static_cast<int>(rng() % 15);
        double density = std::uniform_real_distribution<double>(0.05, 0.4)(rng);
        std::vector<support::Edge> edges;
        IntRows rows;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (std::bernoulli_distribution(density)(rng)) {
                    edges.push_back({a, b});
                    rows.push_back({a, b});
                }
        IntRows want;
        for (auto [a, b] : support::floyd_warshall(n, edges)) want.push_back({a, b});
        for (bool delta_first : {false, true}) {
            auto f = support::load_text(text, {{"edge", rows}});
            EngineOptions o;
            o.delta_first = delta_first;
            auto r = support::run(*f, o);
            if (support::int_rows(*f, *r.db, "reach") != want)
                c.fail("graph " + std::to_string(g) + (delta_first ? " (delta-first)" : ""));
        }
    }
    c.note("50 graphs");
    return c.done();
}

std::vector<std::set<support::Lit>> recorded_calls(const support::Fixture& f, const RunResult& r) {
    std::vector<std::set<support::Lit>> out;
    for (ValueId call : r.oracle_calls.at(0)) out.push_back(support::formula_literals(f.interner, call));
    return out;
}

RunResult run_recorded(support::Fixture& f, EngineKind kind) {
    EngineOptions o;
    o.kind = kind;
    o.oracle.record_calls = true;
    o.oracle.policy = CachePolicy::Replace;
    return support::run(f, o);
}

// 3. Call order on the five-node tree.
Outcome five_node_order() {
    Check c;
    using L = std::set<support::Lit>;
    const std::vector<L> bfs = {{{1, true}}, {{2, true}}, {{1, true}, {3, true}}, {{2, true}, {4, true}}};
    const std::vector<L> dfs = {{{1, true}}, {{1, true}, {3, true}}, {{2, true}}, {{2, true}, {4, true}}};
    for (auto [kind, want] : {std::pair{EngineKind::SemiNaive, bfs}, std::pair{EngineKind::Eager, dfs}}) {
        auto f = support::load_corpus("five_node_tree");
        auto r = run_recorded(*f, kind);
        if (recorded_calls(*f, r) != want) c.fail(std::string(engine_name(kind)) + " call order");
    }
    return c.done();
}

// Path literals of node v in a complete b-ary tree numbered breadth-first.
std::set<support::Lit> path_literals(std::int64_t v, std::int64_t b) {
    std::set<support::Lit> out;
    for (; v != 0; v = (v - 1) / b) out.insert({v, true});
    return out;
}

void preorder(std::int64_t v, std::int64_t b, std::int64_t n, std::vector<std::int64_t>& out) {
    if (v != 0) out.push_back(v);
    for (std::int64_t k = 1; k <= b; ++k)
        if (b * v + k < n) preorder(b * v + k, b, n, out);
}

std::uint64_t total(const std::vector<std::uint64_t>& v) {
    std::uint64_t s = 0;
    for (auto x : v) s += x;
    return s;
}

// 4. Replace-policy misses on complete binary trees, checked by replay.
Outcome locality() {
    Check c;
    for (std::size_t d : {2u, 6u, 10u}) {
        auto inst = generate_tree_reach({d, 2, 0.0, 0});
        IntRows rows;
        for (const auto& e : inst.edges) rows.push_back({e[0], e[1], e[2], e[3]});
        const std::int64_t n = static_cast<std::int64_t>(inst.edges.size()) + 1;

        // Breadth-first sweeps call in node order; eager follows preorder.
        std::vector<std::set<support::Lit>> want_bfs, want_dfs;
        for (std::int64_t v = 1; v < n; ++v) want_bfs.push_back(path_literals(v, 2));
        std::vector<std::int64_t> pre;
        preorder(0, 2, n, pre);
        for (auto v : pre) want_dfs.push_back(path_literals(v, 2));

        std::uint64_t misses[2] = {0, 0};
        int i = 0;
        for (auto [kind, want] : {std::pair{EngineKind::SemiNaive, &want_bfs}, std::pair{EngineKind::Eager, &want_dfs}}) {
            auto f = support::load_text(inst.program, {{"edge", rows}});
            auto r = run_recorded(*f, kind);
            std::string tag = std::string(engine_name(kind)) + " d=" + std::to_string(d);
            auto calls = recorded_calls(*f, r);
            std::uint64_t replayed = total(support::replay_cache(calls, CachePolicy::Replace));
            std::uint64_t predicted = total(support::replay_cache(*want, CachePolicy::Replace));
            if (calls != *want) c.fail(tag + " call order");
            if (replayed != r.metrics.cache_misses)
                c.fail(tag + " reported " + std::to_string(r.metrics.cache_misses) + " misses, replay gives " +
                       std::to_string(replayed));
            if (predicted != r.metrics.cache_misses)
                c.fail(tag + " reported " + std::to_string(r.metrics.cache_misses) + " misses, model predicts " +
                       std::to_string(predicted));
            misses[i++] = r.metrics.cache_misses;
        }
        if (!(misses[1] < misses[0]))
            c.fail("d=" + std::to_string(d) + " eager " + std::to_string(misses[1]) + " >= seminaive " +
                   std::to_string(misses[0]));
        c.note("d=" + std::to_string(d) + " seminaive " + std::to_string(misses[0]) + " eager " +
               std::to_string(misses[1]));
    }
    return c.done();
}

// 5. Two facts derived on different workers must meet in s(3).
Outcome race_completeness() {
    Check c;
    // p, q and s form one component so all three rules run in one eager pass.
    const char* text = ".decl a(1) input\n.decl b(1) input\n.decl p(1)\n.decl q(1)\n.decl s(1) output\n"
                       "p(X) :- a(X).\n"
                       "q(X) :- b(X).\n"
                       "s(3) :- p(1), q(2).\n"
                       "p(X) :- s(X), X = 99.\n"
                       "q(X) :- s(X), X = 99.\n";
    auto f = support::load_text(text, {{"a", {{1}}}, {"b", {{2}}}});
    const ValueId three = f->interner.intern_int(3);
    const int trials = 10000;
    for (std::size_t workers : {2u, 4u, 8u}) {
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
            EngineOptions o;
            o.kind = EngineKind::Eager;
            o.threads = workers;
            o.seed = static_cast<std::uint64_t>(t);
            auto r = support::run(*f, o);
            if (r.db->find("s")->contains(std::vector<ValueId>{three})) ++hits;
        }
        if (hits != trials)
            c.fail(std::to_string(workers) + " workers: " + std::to_string(hits) + "/" + std::to_string(trials));
        c.note(std::to_string(workers) + " workers " + std::to_string(hits) + "/" + std::to_string(trials));
    }
    return c.done();
}

// 6. Concurrent storage histories are linearizable.
Outcome linearizability() {
    Check c;
    std::size_t ops = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Interner in;
        std::size_t workers = 2 + seed % 3;
        auto h = support::record_history(seed, workers, 64 / workers, 3 + seed % 3, in);
        ops += h.size();
        if (h.size() > 64) c.fail("history too long");
        if (!support::linearizable(h, 2)) c.fail("seed " + std::to_string(seed));
    }
    c.note("100 histories, " + std::to_string(ops) + " ops");
    return c.done();
}

// 7. Repeated sequential semi-naive runs do the same work.
Outcome work_determinism() {
    Check c;
    for (const auto& name : support::corpus_names()) {
        std::optional<std::uint64_t> first;
        for (int i = 0; i < 5; ++i) {
            auto f = support::load_corpus(name);
            auto r = support::run(*f, EngineKind::SemiNaive);
            if (!first) first = r.metrics.work;
            else if (r.metrics.work != *first)
                c.fail(name + ": " + std::to_string(r.metrics.work) + " vs " + std::to_string(*first));
        }
    }
    return c.done();
}

// 8. Eager gains from more workers when the oracle has latency.
Outcome scaling() {
    Check c;
    auto inst = generate_tree_reach({12, 2, 0.3, 1});
    IntRows rows;
    for (const auto& e : inst.edges) rows.push_back({e[0], e[1], e[2], e[3]});
    auto median_wall = [&](std::size_t threads) {
        std::vector<double> times;
        for (int i = 0; i < 5; ++i) {
            auto f = support::load_text(inst.program, {{"edge", rows}});
            EngineOptions o;
            o.kind = EngineKind::Eager;
            o.threads = threads;
            o.seed = static_cast<std::uint64_t>(i);
            o.oracle.latency_us = 200;
            times.push_back(support::run(*f, o).metrics.wall_seconds);
        }
        std::sort(times.begin(), times.end());
        return times[2];
    };
    double t1 = median_wall(1), t8 = median_wall(8);
    char buf[128];
    std::snprintf(buf, sizeof buf, "1 thread %.3fs, 8 threads %.3fs, ratio %.3f", t1, t8, t8 / t1);
    c.note(buf);
    if (!(t8 <= 0.6 * t1)) c.fail(buf);
    return c.done();
}

// 9. The mock oracle against enumeration.
Outcome oracle_soundness() {
    Check c;
    Interner in;
    OracleSession s(0, {}, in);
    std::mt19937_64 rng(31337);
    int sat = 0;
    for (int i = 0; i < 1000; ++i) {
        int nvars = 1 + static_cast<int>(rng() % 16);
        int len = 1 + static_cast<int>(rng() % 16);
        std::vector<support::Lit> lits;
        ValueId f = make_true(in);
        for (int k = 0; k < len; ++k) {
            std::int64_t v = static_cast<std::int64_t>(rng() % nvars);
            bool pos = rng() % 2;
            lits.push_back({v, pos});
            ValueId l = make_lit(in, v, pos);
            f = rng() % 2 ? make_conj(in, f, l) : make_conj(in, l, f);
        }
        bool want = support::brute_force_sat(lits, nvars);
        sat += want;
        if (s.is_sat(f) != want) c.fail("formula " + std::to_string(i));
    }
    c.note(std::to_string(sat) + "/1000 satisfiable");
    return c.done();
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*fn)();
        double budget_seconds;
    };
    const Criterion criteria[] = {
        {"engine equivalence", engine_equivalence, 120},
        {"non-linear closure vs Floyd-Warshall", nonlinear_closure, 10},
        {"five-node tree call order", five_node_order, 10},
        {"cache-miss locality with replay", locality, 30},
        {"two-fact race completeness", race_completeness, 60},
        {"relation linearizability", linearizability, 120},
        {"semi-naive work determinism", work_determinism, 10},
        {"eager scaling under oracle latency", scaling, 300},
        {"mock oracle soundness", oracle_soundness, 5},
    };
    int failed = 0;
    int index = 0;
    for (const auto& cr : criteria) {
        ++index;
        auto start = Clock::now();
        Outcome o;
        try {
            o = cr.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (o.pass && secs > cr.budget_seconds) {
            o.pass = false;
            o.detail += " (took " + std::to_string(secs) + "s, budget " + std::to_string(cr.budget_seconds) + "s)";
        }
        failed += !o.pass;
        std::printf("criterion %d %s: %s [%.2fs]%s%s\n", index, cr.name, o.pass ? "PASS" : "FAIL", secs,
                    o.detail.empty() ? "" : " ", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
