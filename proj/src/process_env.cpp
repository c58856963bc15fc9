#include "affordance/process_env.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <regex>
#include <sys/wait.h>
#include <unistd.h>

namespace affordance {

long parse_score(std::string_view output, long previous, std::string_view pattern) {
  const std::regex re{std::string(pattern)};
  long score = previous;
  const std::string s(output);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const std::string digits = m.size() > 1 ? m[1].str() : m[0].str();
    try {
      score = std::stol(digits);
    } catch (const std::exception&) {
      // non-numeric capture: ignore this match
    }
  }
  return score;
}

ProcessEnv::ProcessEnv(ProcessEnvConfig config) : config_(std::move(config)) {
  if (config_.executable.empty()) throw std::invalid_argument("external game: executable not set");
  std::signal(SIGPIPE, SIG_IGN);
}

ProcessEnv::~ProcessEnv() { stop(); }

void ProcessEnv::stop() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

void ProcessEnv::spawn() {
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0)
    throw SpawnError("pipe() failed", std::strerror(errno));

  std::vector<std::string> argv_store{config_.executable};
  argv_store.insert(argv_store.end(), config_.args.begin(), config_.args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) throw SpawnError("fork() failed", std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(out_pipe[1], STDERR_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[0]);
    ::execvp(argv[0], argv.data());
    const int err = errno;
    [[maybe_unused]] auto n = ::write(err_pipe[1], &err, sizeof err);
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  int exec_errno = 0;
  const auto n = ::read(err_pipe[0], &exec_errno, sizeof exec_errno);
  ::close(err_pipe[0]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  if (n == static_cast<ssize_t>(sizeof exec_errno)) {
    stop();
    throw SpawnError("cannot start " + config_.executable, std::strerror(exec_errno));
  }
}

ProcessEnv::ReadResult ProcessEnv::read_response() {
  ReadResult result;
  const std::regex prompt("(" + config_.prompt_pattern + R"()\s*$)");
  const auto deadline = std::chrono::steady_clock::now() + config_.timeout;
  char buf[4096];
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) break;
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      result.eof = true;
      break;
    }
    if (rc == 0) break;
    const auto n = ::read(from_child_, buf, sizeof buf);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      result.eof = true;
      break;
    }
    result.text.append(buf, static_cast<std::size_t>(n));
    std::smatch m;
    if (std::regex_search(result.text, m, prompt)) {
      result.text.erase(static_cast<std::size_t>(m.position(0)));
      result.prompt_seen = true;
      break;
    }
  }
  return result;
}

EnvObservation ProcessEnv::reset() {
  stop();
  spawn();
  score_ = 0;
  auto r = read_response();
  if (!r.prompt_seen && r.eof) {
    stop();
    throw SpawnError(config_.executable + " exited before its first prompt", r.text);
  }
  score_ = parse_score(r.text, 0, config_.score_pattern);
  return {std::move(r.text), score_, false, false};
}

EnvObservation ProcessEnv::step(const std::string& command) {
  if (pid_ <= 0) return {"interpreter is not running", score_, true, true};
  const std::string line = command + "\n";
  if (::write(to_child_, line.data(), line.size()) != static_cast<ssize_t>(line.size())) {
    stop();
    return {"interpreter closed its input", score_, true, true};
  }
  auto r = read_response();
  score_ = parse_score(r.text, score_, config_.score_pattern);
  if (r.eof && !r.prompt_seen) {
    stop();
    return {std::move(r.text), score_, true, true};
  }
  return {std::move(r.text), score_, false, false};
}

}  // namespace affordance
