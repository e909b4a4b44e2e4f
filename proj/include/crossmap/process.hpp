#ifndef CROSSMAP_PROCESS_HPP
#define CROSSMAP_PROCESS_HPP

#include <cerrno>
#include <cstring>
#include <string>
#include <string_view>

#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "crossmap/error.hpp"

namespace crossmap {

struct CommandResult {
  int exit_code = -1;  // -1 when the child was killed by a signal
  std::string out;
  std::string err;
};

namespace detail {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& other) noexcept : fd_(other.release()) {}
  Fd& operator=(Fd&& other) noexcept {
    reset(other.release());
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  int release() {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

inline void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

}  // namespace detail

/// Runs `command` through /bin/sh, feeding `input` on standard input and
/// collecting standard output and standard error.
///
/// Standard input is a socket so that a child exiting early cannot raise
/// SIGPIPE in the caller. Safe to call from several threads at once.
inline CommandResult run_command(const std::string& command, std::string_view input) {
  int in_pair[2];
  int out_pipe[2];
  int err_pipe[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0) {
    throw Error(std::string("socketpair failed: ") + std::strerror(errno));
  }
  detail::Fd in_parent(in_pair[0]), in_child(in_pair[1]);
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    throw Error(std::string("pipe failed: ") + std::strerror(errno));
  }
  detail::Fd out_read(out_pipe[0]), out_write(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw Error(std::string("pipe failed: ") + std::strerror(errno));
  }
  detail::Fd err_read(err_pipe[0]), err_write(err_pipe[1]);

  const pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_child.get(), STDIN_FILENO);
    ::dup2(out_write.get(), STDOUT_FILENO);
    ::dup2(err_write.get(), STDERR_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  in_child.reset();
  out_write.reset();
  err_write.reset();
  detail::set_nonblocking(in_parent.get());
  detail::set_nonblocking(out_read.get());
  detail::set_nonblocking(err_read.get());

  CommandResult result;
  std::size_t written = 0;
  if (input.empty()) in_parent.reset();
  char buffer[65536];
  while (out_read.get() >= 0 || err_read.get() >= 0) {
    pollfd fds[3];
    nfds_t n = 0;
    const auto watch = [&](int fd, short events) {
      if (fd >= 0) fds[n++] = pollfd{fd, events, 0};
    };
    watch(in_parent.get(), POLLOUT);
    watch(out_read.get(), POLLIN);
    watch(err_read.get(), POLLIN);
    if (::poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (nfds_t i = 0; i < n; ++i) {
      if (fds[i].revents == 0) continue;
      const int fd = fds[i].fd;
      if (fd == in_parent.get()) {
        const ssize_t k = ::send(fd, input.data() + written, input.size() - written, MSG_NOSIGNAL);
        if (k > 0) written += static_cast<std::size_t>(k);
        if (k < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
        if (written == input.size()) in_parent.reset();
      } else {
        const ssize_t k = ::read(fd, buffer, sizeof buffer);
        if (k > 0) {
          (fd == out_read.get() ? result.out : result.err).append(buffer, static_cast<std::size_t>(k));
        } else if (k == 0 || (errno != EAGAIN && errno != EINTR)) {
          (fd == out_read.get() ? out_read : err_read).reset();
        }
      }
    }
  }
  in_parent.reset();

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace crossmap

#endif  // CROSSMAP_PROCESS_HPP
