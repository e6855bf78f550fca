#include "patchscout/process.hpp"

#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "patchscout/errors.hpp"

namespace patchscout {

namespace {

struct Pipe {
    int fds[2] = {-1, -1};

    Pipe() {
        if (pipe2(fds, O_CLOEXEC) != 0) {
            throw ProcessError(std::string("pipe failed: ") + std::strerror(errno));
        }
    }

    ~Pipe() {
        close_read();
        close_write();
    }

    int read_fd() const { return fds[0]; }
    int write_fd() const { return fds[1]; }

    void close_read() {
        if (fds[0] >= 0) {
            ::close(fds[0]);
            fds[0] = -1;
        }
    }

    void close_write() {
        if (fds[1] >= 0) {
            ::close(fds[1]);
            fds[1] = -1;
        }
    }
};

// Writes the current errno into the status pipe so the parent can tell an
// exec failure apart from the child program exiting on its own.
[[noreturn]] void child_abort(int status_fd, int saved_errno) {
    while (write(status_fd, &saved_errno, sizeof saved_errno) < 0 && errno == EINTR) {
    }
    _exit(127);
}

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& working_dir) {
    if (argv.empty()) {
        throw ProcessError("run_process requires a program name");
    }

    Pipe out_pipe;
    Pipe err_pipe;
    Pipe status_pipe;

    pid_t pid = fork();
    if (pid < 0) {
        throw ProcessError(std::string("fork failed: ") + std::strerror(errno));
    }

    if (pid == 0) {
        if (!working_dir.empty() && chdir(working_dir.c_str()) != 0) {
            child_abort(status_pipe.write_fd(), errno);
        }
        if (dup2(out_pipe.write_fd(), STDOUT_FILENO) < 0 ||
            dup2(err_pipe.write_fd(), STDERR_FILENO) < 0) {
            child_abort(status_pipe.write_fd(), errno);
        }

        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& arg : argv) {
            args.push_back(const_cast<char*>(arg.c_str()));
        }
        args.push_back(nullptr);

        execvp(args[0], args.data());
        child_abort(status_pipe.write_fd(), errno);
    }

    out_pipe.close_write();
    err_pipe.close_write();
    status_pipe.close_write();

    ProcessResult result;
    struct Stream {
        int fd;
        std::string* sink;
        bool open = true;
    };
    Stream streams[2] = {
        {out_pipe.read_fd(), &result.output},
        {err_pipe.read_fd(), &result.diagnostics},
    };

    char buffer[65536];
    while (streams[0].open || streams[1].open) {
        pollfd fds[2];
        nfds_t count = 0;
        for (auto& stream : streams) {
            if (stream.open) {
                fds[count].fd = stream.fd;
                fds[count].events = POLLIN;
                ++count;
            }
        }
        int ready = poll(fds, count, -1);
        if (ready < 0) {
            if (errno == EINTR) continue;
            throw ProcessError(std::string("poll failed: ") + std::strerror(errno));
        }
        for (nfds_t i = 0; i < count; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            for (auto& stream : streams) {
                if (stream.open && stream.fd == fds[i].fd) {
                    ssize_t n = read(stream.fd, buffer, sizeof buffer);
                    if (n > 0) {
                        stream.sink->append(buffer, static_cast<size_t>(n));
                    } else if (n == 0 || (n < 0 && errno != EINTR)) {
                        stream.open = false;
                    }
                    break;
                }
            }
        }
    }

    int spawn_errno = 0;
    ssize_t got = read(status_pipe.read_fd(), &spawn_errno, sizeof spawn_errno);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) {
            throw ProcessError(std::string("waitpid failed: ") + std::strerror(errno));
        }
    }

    if (got == static_cast<ssize_t>(sizeof spawn_errno)) {
        throw ProcessError("failed to run " + argv[0] + ": " +
                           std::strerror(spawn_errno));
    }

    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

} // namespace patchscout
