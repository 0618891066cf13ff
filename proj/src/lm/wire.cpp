#include "pred/lm/wire.hpp"

#include <cerrno>
#include <cstring>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "pred/error.hpp"
#include "pred/lm/base64.hpp"

namespace pred::lm {

using nlohmann::json;

std::string StreamTransport::roundtrip(const std::string& line) {
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw ProtocolError("cannot write request");
  std::string reply;
  if (!std::getline(in_, reply)) throw ProtocolError("server closed the stream");
  return reply;
}

ProcessTransport::ProcessTransport(const std::vector<std::string>& argv) {
  if (argv.empty()) throw ProtocolError("empty server command");
  int down[2];
  int up[2];
  if (::pipe2(down, O_CLOEXEC) != 0 || ::pipe2(up, O_CLOEXEC) != 0) {
    throw ProtocolError(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_ = ::fork();
  if (pid_ < 0) throw ProtocolError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    ::dup2(down[0], STDIN_FILENO);
    ::dup2(up[1], STDOUT_FILENO);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(down[0]);
  ::close(up[1]);
  to_child_ = down[1];
  from_child_ = up[0];
  // A dead server should surface as an error reply, not kill the client.
  ::signal(SIGPIPE, SIG_IGN);
}

ProcessTransport::~ProcessTransport() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

std::string ProcessTransport::roundtrip(const std::string& line) {
  const std::string msg = line + "\n";
  for (std::size_t sent = 0; sent < msg.size();) {
    const auto n = ::write(to_child_, msg.data() + sent, msg.size() - sent);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("write to server: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string reply = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return reply;
    }
    char chunk[65536];
    const auto n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw ProtocolError("server closed the stream");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

WireProvider::WireProvider(Segmentation segmentation, std::unique_ptr<Transport> transport)
    : segmentation_(std::move(segmentation)), transport_(std::move(transport)) {
  if (!transport_) throw ProtocolError("no transport");
}

std::string WireProvider::request(const std::string& op, std::span<const TokenId> prefix,
                                  const std::vector<TokenId>* cont, std::int64_t& id) const {
  json req = {{"op", op}, {"prefix", std::vector<TokenId>(prefix.begin(), prefix.end())}};
  if (cont) req["cont"] = *cont;
  std::lock_guard lock(mutex_);
  id = next_id_++;
  req["id"] = id;
  return transport_->roundtrip(req.dump());
}

namespace {

json parse_reply(const std::string& line, std::int64_t id) {
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("unreadable reply: ") + e.what());
  }
  if (!reply.is_object() || !reply.contains("id") || !reply["id"].is_number_integer() ||
      reply["id"].get<std::int64_t>() != id) {
    throw ProtocolError("reply does not answer request " + std::to_string(id));
  }
  if (reply.contains("error")) {
    throw ProtocolError("server error: " + reply["error"].dump());
  }
  return reply;
}

}  // namespace

TokenDistribution WireProvider::next_distribution(std::span<const TokenId> prefix) const {
  std::int64_t id = 0;
  const auto line = request("dist", prefix, nullptr, id);
  const auto reply = parse_reply(line, id);
  if (!reply.contains("logprobs") || !reply["logprobs"].is_string()) {
    throw ProtocolError("dist reply without logprobs");
  }
  std::vector<float> values;
  try {
    values = decode_f32(reply["logprobs"].get<std::string>());
  } catch (const FormatError& e) {
    throw ProtocolError(e.what());
  }
  if (values.size() != vocab().size()) {
    throw ProtocolError("dist reply has " + std::to_string(values.size()) + " entries, vocabulary has " +
                        std::to_string(vocab().size()));
  }
  TokenDistribution d;
  d.logprobs.assign(values.begin(), values.end());
  return d;
}

double WireProvider::score(std::span<const TokenId> prefix,
                           std::span<const TokenId> continuation) const {
  const std::vector<TokenId> cont(continuation.begin(), continuation.end());
  std::int64_t id = 0;
  const auto line = request("score", prefix, &cont, id);
  const auto reply = parse_reply(line, id);
  if (!reply.contains("logprob") || !reply["logprob"].is_number()) {
    throw ProtocolError("score reply without logprob");
  }
  return reply["logprob"].get<double>();
}

std::string handle_request(const DistributionProvider& provider, const std::string& line) {
  json id = nullptr;
  try {
    const auto req = json::parse(line);
    if (!req.is_object()) throw ProtocolError("request is not an object");
    if (req.contains("id")) id = req["id"];
    if (!id.is_number_integer()) throw ProtocolError("request id must be an integer");
    const auto op = req.value("op", "");
    const auto ids = [&](const char* key) {
      std::vector<TokenId> v = req.at(key).get<std::vector<TokenId>>();
      for (TokenId t : v) {
        if (t < 0 || static_cast<std::size_t>(t) >= provider.vocab().size()) {
          throw ProtocolError("token id " + std::to_string(t) + " out of range");
        }
      }
      return v;
    };
    const auto prefix = ids("prefix");
    if (op == "dist") {
      const auto d = provider.next_distribution(prefix);
      const std::vector<float> f(d.logprobs.begin(), d.logprobs.end());
      return json{{"id", id}, {"logprobs", encode_f32(f)}}.dump();
    }
    if (op == "score") {
      return json{{"id", id}, {"logprob", provider.score(prefix, ids("cont"))}}.dump();
    }
    throw ProtocolError("unknown op '" + op + "'");
  } catch (const std::exception& e) {
    return json{{"id", id}, {"error", e.what()}}.dump();
  }
}

std::size_t serve(const DistributionProvider& provider, std::istream& in, std::ostream& out) {
  std::size_t handled = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << handle_request(provider, line) << '\n';
    out.flush();
    ++handled;
  }
  return handled;
}

}  // namespace pred::lm
