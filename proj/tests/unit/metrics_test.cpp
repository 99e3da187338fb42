#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "eagerlog/error.hpp"
#include "eagerlog/metrics.hpp"
#include "harness.hpp"

using namespace eagerlog;

TEST(Metrics, HeaderColumns) {
    EXPECT_EQ(csv_header(0), "engine,threads,wall_time,cpu_time,work,derived,rederived,oracle_calls,cache_misses");
    EXPECT_EQ(csv_header(2).substr(csv_header(0).size()),
              ",w0_calls,w0_misses,w0_items,w1_calls,w1_misses,w1_items");
}

TEST(Metrics, RowPadsMissingWorkers) {
    RunMetrics m;
    m.engine = "eager";
    m.threads = 1;
    m.work = 12;
    m.per_worker = {{3, 2, 7}};
    std::string row = csv_row(m, 2);
    EXPECT_EQ(row.substr(0, 8), "eager,1,");
    EXPECT_NE(row.find(",12,"), std::string::npos);
    EXPECT_EQ(row.substr(row.size() - 9), ",3,2,7,,,");
}

TEST(Metrics, EmitAndUnwritablePath) {
    auto path = std::filesystem::temp_directory_path() / "eagerlog_metrics_test.csv";
    RunMetrics m;
    m.engine = "seminaive";
    m.per_worker.resize(1);
    emit_csv(m, path.string());
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, csv_header(1));
    EXPECT_EQ(row, csv_row(m, 1));
    std::filesystem::remove(path);
    EXPECT_THROW(emit_csv(m, "/nonexistent-dir/x.csv"), UserError);
}

TEST(Metrics, RunTotalsMatchWorkerSums) {
    auto f = support::load_corpus("guarded_tree");
    for (const auto& o : support::engine_matrix(5)) {
        auto r = support::run(*f, o);
        std::uint64_t calls = 0, misses = 0;
        for (const auto& w : r.metrics.per_worker) {
            calls += w.calls;
            misses += w.misses;
        }
        EXPECT_EQ(calls, r.metrics.oracle_calls) << support::describe(o);
        EXPECT_EQ(misses, r.metrics.cache_misses) << support::describe(o);
        EXPECT_EQ(r.metrics.engine, engine_name(o.kind));
        EXPECT_GE(r.metrics.wall_seconds, 0.0);
        EXPECT_GE(r.metrics.cpu_seconds, 0.0);
        // One call per edge leaving a reached node; naive repeats its rounds.
        if (o.kind != EngineKind::Naive) {
            EXPECT_EQ(r.metrics.oracle_calls, 7u) << support::describe(o);
        }
    }
}

TEST(Metrics, CpuClockAdvances) {
    double a = process_cpu_seconds();
    volatile std::uint64_t x = 0;
    for (int i = 0; i < 20'000'000; ++i) x = x + static_cast<std::uint64_t>(i);
    EXPECT_GT(process_cpu_seconds(), a);
}
