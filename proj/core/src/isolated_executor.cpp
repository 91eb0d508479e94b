#include "norec/isolated_executor.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "norec/serialize.hpp"

namespace norec {

namespace {

bool write_all(int fd, const void* data, size_t n) {
  const char* p = static_cast<const char*>(data);
  while (n > 0) {
    ssize_t w = ::send(fd, p, n, MSG_NOSIGNAL);
    if (w <= 0) return false;
    p += w;
    n -= static_cast<size_t>(w);
  }
  return true;
}

bool read_all(int fd, void* data, size_t n) {
  char* p = static_cast<char*>(data);
  while (n > 0) {
    ssize_t r = ::read(fd, p, n);
    if (r <= 0) return false;
    p += r;
    n -= static_cast<size_t>(r);
  }
  return true;
}

bool send_message(int fd, const std::string& s) {
  std::uint64_t n = s.size();
  return write_all(fd, &n, sizeof n) && write_all(fd, s.data(), s.size());
}

bool receive_message(int fd, std::string& out) {
  std::uint64_t n = 0;
  if (!read_all(fd, &n, sizeof n)) return false;
  out.resize(n);
  return read_all(fd, out.data(), n);
}

}  // namespace

IsolatedExecutor::IsolatedExecutor(ExecutorFactory inner, DialectProfile dialect, std::string version)
    : inner_(std::move(inner)), dialect_(std::move(dialect)), version_(std::move(version)) {}

IsolatedExecutor::~IsolatedExecutor() {
  if (fd_ >= 0) {
    send_message(fd_, "");
    ::close(fd_);
  }
  if (child_ > 0) {
    ::kill(child_, SIGKILL);
    ::waitpid(child_, nullptr, 0);
  }
}

void IsolatedExecutor::child_main(int fd) {
  auto engine = inner_();
  engine->set_timeout(timeout_);
  std::string msg;
  while (receive_message(fd, msg) && !msg.empty()) {
    EngineResult r;
    try {
      r = engine->execute(deserialize_statement(msg));
    } catch (const std::exception& e) {
      r = EngineResult::error(e.what());
    }
    ExecutorStats s = engine->stats();
    std::ostringstream reply;
    reply << s.issued << ' ' << s.rejectedAtPrepare << ' ' << s.errors << '\n' << serialize_result(r);
    if (!send_message(fd, reply.str())) break;
  }
  ::_exit(0);
}

void IsolatedExecutor::spawn() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) throw std::runtime_error("socketpair failed");
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    ::close(fds[0]);
    child_main(fds[1]);
  }
  ::close(fds[1]);
  child_ = pid;
  fd_ = fds[0];
  childBase_ = stats_;
}

void IsolatedExecutor::reap() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  child_ = -1;
}

EngineResult IsolatedExecutor::execute(const Statement& stmt) {
  if (child_ < 0) spawn();
  std::string reply;
  bool ok = send_message(fd_, serialize_statement(stmt));
  if (ok) {
    pollfd p{fd_, POLLIN, 0};
    int budget = static_cast<int>(timeout_.count()) * 2 + 1000;
    if (::poll(&p, 1, budget) == 0) {
      ::kill(child_, SIGKILL);
      ::waitpid(child_, nullptr, 0);
      reap();
      ++stats_.issued;
      return EngineResult::timeout();
    }
    ok = receive_message(fd_, reply);
  }
  if (!ok) {
    int status = 0;
    ::waitpid(child_, &status, 0);
    reap();
    ++stats_.issued;
    std::string why = WIFSIGNALED(status) ? "killed by signal " + std::to_string(WTERMSIG(status))
                                          : "exited with status " + std::to_string(WEXITSTATUS(status));
    return EngineResult::crash("engine process " + why);
  }
  size_t nl = reply.find('\n');
  std::istringstream head(reply.substr(0, nl));
  ExecutorStats s;
  head >> s.issued >> s.rejectedAtPrepare >> s.errors;
  stats_.issued = childBase_.issued + s.issued;
  stats_.rejectedAtPrepare = childBase_.rejectedAtPrepare + s.rejectedAtPrepare;
  stats_.errors = childBase_.errors + s.errors;
  return deserialize_result(reply.substr(nl + 1));
}

}  // namespace norec
