#include "eagerlog/metrics.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "eagerlog/error.hpp"

namespace eagerlog {

std::string csv_header(std::size_t workers) {
    std::string h = "engine,threads,wall_time,cpu_time,work,derived,rederived,oracle_calls,cache_misses";
    for (std::size_t k = 0; k < workers; ++k) {
        std::string w = "w" + std::to_string(k);
        h += "," + w + "_calls," + w + "_misses," + w + "_items";
    }
    return h;
}

std::string csv_row(const RunMetrics& m, std::size_t workers) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed << m.engine << ',' << m.threads << ',' << m.wall_seconds << ',' << m.cpu_seconds << ',' << m.work
        << ',' << m.derived << ',' << m.rederived << ',' << m.oracle_calls << ',' << m.cache_misses;
    for (std::size_t k = 0; k < workers; ++k) {
        if (k < m.per_worker.size()) {
            const auto& w = m.per_worker[k];
            out << ',' << w.calls << ',' << w.misses << ',' << w.items;
        } else {
            out << ",,,";
        }
    }
    return out.str();
}

void emit_csv(const RunMetrics& m, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw UserError("cannot write metrics file " + path);
    f << csv_header(m.per_worker.size()) << '\n' << csv_row(m, m.per_worker.size()) << '\n';
    if (!f) throw UserError("error writing metrics file " + path);
}

double process_cpu_seconds() {
    timespec ts{};
    clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

} // namespace eagerlog
