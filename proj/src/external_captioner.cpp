#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "semkg/error.hpp"
#include "semkg/pipeline.hpp"

namespace semkg {

using json = nlohmann::json;

std::string make_caption_request(const Clip& clip) {
  json frames = json::array();
  for (const auto& f : clip.frames) frames.push_back(f.payload);
  json request = {{"clip", {{"start", clip.start_index}, {"end", clip.end_index}, {"frames", frames}}}};
  return request.dump();
}

CaptionResult parse_caption_response(std::string_view line, TimeInterval span,
                                     std::size_t max_tokens) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed response: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("malformed response: not an object");
  if (auto err = doc.find("error"); err != doc.end()) {
    throw ProtocolError("captioner reported: " + (err->is_string() ? err->get<std::string>()
                                                                   : err->dump()));
  }
  auto tokens = doc.find("tokens");
  if (tokens == doc.end() || !tokens->is_array()) {
    throw ProtocolError("malformed response: missing 'tokens' array");
  }

  CaptionResult result;
  for (const auto& t : *tokens) {
    if (!t.is_string()) throw ProtocolError("malformed response: non-string token");
    result.tokens.push_back(t.get<std::string>());
  }
  if (auto att = doc.find("attention"); att != doc.end() && !att->is_null()) {
    if (!att->is_array()) throw ProtocolError("malformed response: 'attention' is not an array");
    std::vector<AttentionMap> maps;
    maps.reserve(att->size());
    for (const auto& row : *att) {
      if (!row.is_array()) throw ProtocolError("malformed response: attention row is not an array");
      AttentionMap map;
      map.weights.reserve(row.size());
      for (const auto& w : row) {
        if (!w.is_number()) throw ProtocolError("malformed response: non-numeric attention weight");
        map.weights.push_back(w.get<double>());
      }
      maps.push_back(std::move(map));
    }
    result.attention = std::move(maps);
  }
  validate_caption(result, span, max_tokens);
  return result;
}

ExternalCaptioner::ExternalCaptioner(std::string command_line, double timeout_seconds,
                                     std::size_t max_tokens)
    : command_(std::move(command_line)), timeout_(timeout_seconds), max_tokens_(max_tokens) {
  if (command_.empty()) throw ConfigError("captioner command is empty");
  if (!(timeout_ > 0.0)) throw ConfigError("captioner timeout must be positive");
}

ExternalCaptioner::~ExternalCaptioner() { terminate(); }

void ExternalCaptioner::spawn() {
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw Error(std::string("socketpair: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw Error(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    // Own process group, so a kill reaches anything the shell started.
    ::setpgid(0, 0);
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(sv[1]);
  ::setpgid(pid, pid);
  pid_ = pid;
  fd_ = sv[0];
  buffer_.clear();
}

void ExternalCaptioner::terminate() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    // Closing the socket gives a well-behaved child EOF; wait briefly.
    int status = 0;
    bool reaped = false;
    for (int i = 0; i < 20 && !reaped; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        reaped = true;
      } else {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
    }
    if (!reaped) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    ::kill(-pid_, SIGKILL);
    pid_ = -1;
  }
  buffer_.clear();
}

std::string ExternalCaptioner::read_line(double timeout_seconds) {
  using clock = std::chrono::steady_clock;
  const auto deadline =
      clock::now() + std::chrono::duration_cast<clock::duration>(
                         std::chrono::duration<double>(timeout_seconds));
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (remaining <= 0) throw TimeoutError("captioner did not answer within the timeout");
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("poll: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("recv: ") + std::strerror(errno));
    }
    if (n == 0) throw ProtocolError("captioner closed the connection");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

CaptionResult ExternalCaptioner::caption(const Clip& clip) {
  if (fd_ < 0) spawn();
  const std::string request = make_caption_request(clip) + "\n";
  std::size_t sent = 0;
  while (sent < request.size()) {
    const ssize_t n = ::send(fd_, request.data() + sent, request.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string reason = std::strerror(errno);
      terminate();
      throw Error("cannot write to captioner: " + reason);
    }
    sent += static_cast<std::size_t>(n);
  }

  std::string line;
  try {
    line = read_line(timeout_);
  } catch (...) {
    // The stream is out of step with our requests; start over next time.
    terminate();
    throw;
  }
  return parse_caption_response(line, clip.span(), max_tokens_);
}

std::unique_ptr<Captioner> make_captioner(const CaptionerBinding& binding, std::size_t max_tokens) {
  if (binding.variant == CaptionerBinding::Variant::Replay) {
    return std::make_unique<ReplayCaptioner>(AnnotationTrack::load(binding.target));
  }
  return std::make_unique<ExternalCaptioner>(binding.target, binding.timeout_seconds, max_tokens);
}

}  // namespace semkg
