#pragma once

// Runs external DIMACS solvers as subprocesses: the formula goes to a
// temporary file, `<command> <cnf-path>` runs with stdout captured, and the
// output is parsed per SAT-competition conventions (s/v lines, exit codes 10
// and 20). SAT models are verified against the formula; a bad model is
// reported as an external-solver fault. Also provides the portfolio runner:
// k solvers in parallel, first definitive answer wins, the rest are killed.

#include "brentforge/cnf.hpp"
#include "brentforge/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace brentforge {

class ExternalSolverError : public std::runtime_error {
public:
    explicit ExternalSolverError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline std::vector<std::string> split_command(const std::string& cmd) {
    std::istringstream in(cmd);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct TempCnfFile {
    std::string path;

    explicit TempCnfFile(const CnfFormula& f) {
        const char* tmpdir = getenv("TMPDIR");
        std::string tmpl = std::string(tmpdir ? tmpdir : "/tmp") + "/brentforge-XXXXXX";
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        int fd = mkstemp(buf.data());
        if (fd < 0) throw ExternalSolverError("cannot create temporary CNF file");
        path.assign(buf.data());
        std::string text = to_dimacs(f);
        ssize_t off = 0;
        while (off < static_cast<ssize_t>(text.size())) {
            ssize_t n = ::write(fd, text.data() + off, text.size() - off);
            if (n < 0) {
                ::close(fd);
                throw ExternalSolverError("cannot write temporary CNF file");
            }
            off += n;
        }
        ::close(fd);
    }
    ~TempCnfFile() {
        if (!path.empty()) ::unlink(path.c_str());
    }
    TempCnfFile(const TempCnfFile&) = delete;
    TempCnfFile& operator=(const TempCnfFile&) = delete;
};

struct ChildProcess {
    pid_t pid = -1;
    int out_fd = -1;

    ~ChildProcess() {
        if (out_fd >= 0) ::close(out_fd);
    }
};

// fork/exec with stdout captured; exec failure is reported through a
// CLOEXEC status pipe so "no such executable" is distinguishable.
inline ChildProcess spawn(const std::vector<std::string>& argv_strings) {
    int out_pipe[2], status_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(status_pipe) != 0)
        throw ExternalSolverError("pipe() failed");
    fcntl(status_pipe[1], F_SETFD, FD_CLOEXEC);

    pid_t pid = fork();
    if (pid < 0) throw ExternalSolverError("fork() failed");
    if (pid == 0) {
        ::close(out_pipe[0]);
        ::close(status_pipe[0]);
        dup2(out_pipe[1], STDOUT_FILENO);
        ::close(out_pipe[1]);
        // keep a solver that happens to be this binary from recursing
        unsetenv("BRENTFORGE_SOLVER");
        std::vector<char*> argv;
        for (const auto& s : argv_strings) argv.push_back(const_cast<char*>(s.c_str()));
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        int err = errno;
        ssize_t n = ::write(status_pipe[1], &err, sizeof(err));
        (void)n;
        _exit(127);
    }
    ::close(out_pipe[1]);
    ::close(status_pipe[1]);

    int exec_errno = 0;
    ssize_t n = ::read(status_pipe[0], &exec_errno, sizeof(exec_errno));
    ::close(status_pipe[0]);
    if (n == sizeof(exec_errno)) {
        ::close(out_pipe[0]);
        waitpid(pid, nullptr, 0);
        throw ExternalSolverError("cannot execute '" + argv_strings[0] +
                                  "': " + std::strerror(exec_errno));
    }

    ChildProcess child;
    child.pid = pid;
    child.out_fd = out_pipe[0];
    return child;
}

}  // namespace detail

struct ExternalRun {
    SolveResult result;
    std::string raw_output;
    int exit_code = -1;
};

// time_limit_s < 0 means no limit. On timeout the child is killed and the
// status is Timeout. `cancel` (optional) requests early termination.
inline ExternalRun run_external(const CnfFormula& f, const std::string& solver_command,
                                double time_limit_s = -1.0,
                                const std::atomic<bool>* cancel = nullptr) {
    auto argv = detail::split_command(solver_command);
    if (argv.empty()) throw ExternalSolverError("empty solver command");

    detail::TempCnfFile cnf(f);
    argv.push_back(cnf.path);

    auto start = std::chrono::steady_clock::now();
    detail::ChildProcess child = detail::spawn(argv);

    std::string output;
    char buf[4096];
    bool timed_out = false;
    while (true) {
        if (cancel && cancel->load()) {
            kill(child.pid, SIGKILL);
            timed_out = true;
        }
        int wait_ms = 200;
        if (time_limit_s >= 0) {
            double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            double left = time_limit_s - elapsed;
            if (left <= 0 && !timed_out) {
                kill(child.pid, SIGKILL);
                timed_out = true;
            }
            wait_ms = std::min(wait_ms, std::max(1, static_cast<int>(left * 1000)));
        }
        struct pollfd pfd{child.out_fd, POLLIN, 0};
        int pr = poll(&pfd, 1, wait_ms);
        if (pr > 0) {
            ssize_t n = ::read(child.out_fd, buf, sizeof(buf));
            if (n > 0) {
                output.append(buf, static_cast<size_t>(n));
                continue;
            }
            break;  // EOF
        }
    }
    int status = 0;
    waitpid(child.pid, &status, 0);

    ExternalRun run;
    run.raw_output = output;
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    if (timed_out) {
        run.result.status = SolveStatus::Timeout;
        return run;
    }

    ParsedModelText parsed = parse_model_text(output);
    if (parsed.status == ModelTextStatus::Unknown) {
        if (run.exit_code == 10)
            parsed.status = ModelTextStatus::Sat;
        else if (run.exit_code == 20)
            parsed.status = ModelTextStatus::Unsat;
    }
    switch (parsed.status) {
        case ModelTextStatus::Unsat:
            run.result.status = SolveStatus::Unsat;
            return run;
        case ModelTextStatus::Unknown:
            throw ExternalSolverError("unparseable output from '" + solver_command +
                                      "' (exit code " + std::to_string(run.exit_code) + ")");
        case ModelTextStatus::Sat: break;
    }

    if (parsed.literals.empty())
        throw ExternalSolverError("solver claimed SAT but printed no model");
    run.result.model = assignment_from_literals(parsed.literals, f.num_vars);
    auto bad = violated_clauses(f, run.result.model);
    if (!bad.empty())
        throw ExternalSolverError("external solver fault: model violates " +
                                  std::to_string(bad.size()) + " clauses");
    run.result.status = SolveStatus::Sat;
    return run;
}

struct PortfolioOutcome {
    SolveResult result;
    std::string winner;  // command of the first definitive answer
};

// Runs every command on the same formula concurrently; the first SAT/UNSAT
// wins and the others are cancelled. All failing is an error.
inline PortfolioOutcome solve_portfolio(const CnfFormula& f,
                                        const std::vector<std::string>& commands,
                                        double time_limit_s = -1.0) {
    if (commands.empty()) throw std::invalid_argument("portfolio needs at least one command");

    std::mutex mtx;
    std::condition_variable cv;
    std::atomic<bool> cancel{false};
    PortfolioOutcome outcome;
    bool decided = false;
    size_t finished = 0;
    std::vector<std::string> errors;

    std::vector<std::thread> workers;
    workers.reserve(commands.size());
    for (const std::string& cmd : commands) {
        workers.emplace_back([&, cmd]() {
            try {
                ExternalRun run = run_external(f, cmd, time_limit_s, &cancel);
                std::lock_guard<std::mutex> lock(mtx);
                ++finished;
                if (!decided && run.result.status != SolveStatus::Timeout) {
                    decided = true;
                    outcome.result = run.result;
                    outcome.winner = cmd;
                    cancel.store(true);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mtx);
                ++finished;
                errors.push_back(cmd + ": " + e.what());
            }
            cv.notify_all();
        });
    }
    {
        std::unique_lock<std::mutex> lock(mtx);
        cv.wait(lock, [&] { return decided || finished == commands.size(); });
        if (!decided) cancel.store(true);
    }
    for (auto& t : workers) t.join();

    if (!decided) {
        if (!errors.empty()) {
            std::string msg = "all portfolio solvers failed:";
            for (const auto& e : errors) msg += "\n  " + e;
            throw ExternalSolverError(msg);
        }
        outcome.result.status = SolveStatus::Timeout;
    }
    return outcome;
}

}  // namespace brentforge
