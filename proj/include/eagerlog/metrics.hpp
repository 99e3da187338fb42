#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eagerlog {

struct WorkerMetrics {
    std::uint64_t calls = 0;
    std::uint64_t misses = 0;
    /// Work items executed (eager) or rule evaluations run (other engines).
    std::uint64_t items = 0;
};

struct RunMetrics {
    std::string engine;
    std::size_t threads = 1;
    double wall_seconds = 0;
    double cpu_seconds = 0;
    /// Tuples yielded by index scans during rule evaluation.
    std::uint64_t work = 0;
    std::uint64_t derived = 0;
    std::uint64_t rederived = 0;
    std::uint64_t oracle_calls = 0;
    std::uint64_t cache_misses = 0;
    std::vector<WorkerMetrics> per_worker;
};

/// Header with `workers` per-worker column triples (defaults to the run's own).
std::string csv_header(std::size_t workers);
/// Data row; missing per-worker columns are left empty.
std::string csv_row(const RunMetrics& m, std::size_t workers);

/// Writes header + one row. Throws UserError when the file cannot be written.
void emit_csv(const RunMetrics& m, const std::string& path);

/// Process CPU time in seconds.
double process_cpu_seconds();

} // namespace eagerlog
