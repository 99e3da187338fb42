#include "eagerlog/smtlib.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>

#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "eagerlog/error.hpp"

extern char** environ;

namespace eagerlog {

std::string smtlib_var_name(std::int64_t var) {
    if (var < 0) return "vm" + std::to_string(-(var + 1) + std::uint64_t{1});
    return "v" + std::to_string(var);
}

std::string smtlib_literal(const Literal& lit) {
    std::string name = smtlib_var_name(lit.var);
    return lit.positive ? name : "(not " + name + ")";
}

namespace {

void ignore_sigpipe() {
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

} // namespace

SmtLibProcess::SmtLibProcess(std::string path, std::vector<std::string> args, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
    ignore_sigpipe();
    int in_pipe[2];
    int out_pipe[2];
    if (pipe(in_pipe) != 0) throw EvalError(std::string("solver: pipe failed: ") + std::strerror(errno));
    if (pipe(out_pipe) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw EvalError(std::string("solver: pipe failed: ") + std::strerror(errno));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
    posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

    std::vector<char*> argv;
    argv.push_back(path.data());
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);

    pid_t pid = -1;
    int rc = posix_spawnp(&pid, path.c_str(), &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(in_pipe[0]);
    close(out_pipe[1]);
    if (rc != 0) {
        close(in_pipe[1]);
        close(out_pipe[0]);
        throw EvalError("solver: cannot start " + path + ": " + std::strerror(rc));
    }
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

SmtLibProcess::~SmtLibProcess() { shutdown(); }

void SmtLibProcess::shutdown() {
    if (pid_ <= 0) return;
    if (!dead_) send("(exit)");
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    int status = 0;
    // Give the solver a moment to exit on its own before killing it.
    for (int i = 0; i < 50; ++i) {
        if (waitpid(pid_, &status, WNOHANG) != 0) {
            pid_ = -1;
            return;
        }
        usleep(1000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    pid_ = -1;
}

bool SmtLibProcess::send(std::string_view command) {
    if (!alive()) return false;
    if (keep_transcript) transcript.emplace_back(command);
    std::string line(command);
    line += '\n';
    std::size_t done = 0;
    while (done < line.size()) {
        ssize_t n = write(to_child_, line.data() + done, line.size() - done);
        if (n < 0) {
            if (errno == EINTR) continue;
            dead_ = true;
            return false;
        }
        done += static_cast<std::size_t>(n);
    }
    return true;
}

std::optional<std::string> SmtLibProcess::read_line() {
    auto deadline = std::chrono::steady_clock::now() + timeout_;
    for (;;) {
        while (true) {
            auto nl = buffer_.find('\n');
            if (nl == std::string::npos) break;
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) return line;
        }
        if (!alive()) return std::nullopt;
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) return std::nullopt;
        pollfd pfd{from_child_, POLLIN, 0};
        int rc = poll(&pfd, 1, static_cast<int>(left.count()));
        if (rc < 0 && errno == EINTR) continue;
        if (rc <= 0) return std::nullopt;
        char chunk[4096];
        ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            dead_ = true;
            return std::nullopt;
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

} // namespace eagerlog
