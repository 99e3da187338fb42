#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "eagerlog/externs.hpp"

namespace eagerlog {

/// SMT-LIB name of boolean variable `var` (`v7`, `vm3` for -3).
std::string smtlib_var_name(std::int64_t var);
/// `vN` or `(not vN)`.
std::string smtlib_literal(const Literal& lit);

/// A solver child process spoken to line by line over stdin/stdout.
class SmtLibProcess {
public:
    SmtLibProcess(std::string path, std::vector<std::string> args, std::chrono::milliseconds timeout);
    ~SmtLibProcess();
    SmtLibProcess(const SmtLibProcess&) = delete;
    SmtLibProcess& operator=(const SmtLibProcess&) = delete;

    bool alive() const { return pid_ > 0 && !dead_; }
    /// Writes one command line. Returns false once the pipe is broken.
    bool send(std::string_view command);
    /// Next non-empty output line; nullopt on EOF or timeout.
    std::optional<std::string> read_line();

    /// Literals currently asserted at the solver's top level.
    std::set<ValueId> asserted;
    std::set<std::int64_t> declared;
    /// Every command written, when `keep_transcript` is set.
    std::vector<std::string> transcript;
    bool keep_transcript = false;

private:
    void shutdown();

    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    bool dead_ = false;
    std::string buffer_;
    std::chrono::milliseconds timeout_;
};

} // namespace eagerlog
