#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "pred/lm/provider.hpp"

namespace pred::lm {

// Line-delimited JSON requests and replies:
//   {"id":1,"op":"dist","prefix":[ids]}             -> {"id":1,"logprobs":"<b64 f32>"}
//   {"id":2,"op":"score","prefix":[ids],"cont":[ids]} -> {"id":2,"logprob":-3.2}
//   anything the server cannot answer                -> {"id":n,"error":"..."}
// The id of an unparseable request is echoed as null.

// Carries one request line to a server and returns its reply line.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string roundtrip(const std::string& line) = 0;
};

class StreamTransport final : public Transport {
 public:
  StreamTransport(std::istream& replies, std::ostream& requests)
      : in_(replies), out_(requests) {}
  std::string roundtrip(const std::string& line) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

// Spawns argv[0] with the given arguments and talks to it over its
// standard input and output. The child is reaped on destruction.
class ProcessTransport final : public Transport {
 public:
  explicit ProcessTransport(const std::vector<std::string>& argv);
  ~ProcessTransport() override;
  ProcessTransport(const ProcessTransport&) = delete;
  ProcessTransport& operator=(const ProcessTransport&) = delete;

  std::string roundtrip(const std::string& line) override;

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Client side. Requests are serialized: one in flight at a time. Server
// error replies raise ProtocolError, as do malformed or mismatched replies.
class WireProvider final : public DistributionProvider {
 public:
  WireProvider(Segmentation segmentation, std::unique_ptr<Transport> transport);

  const Segmentation& segmentation() const override { return segmentation_; }
  TokenDistribution next_distribution(std::span<const TokenId> prefix) const override;
  double score(std::span<const TokenId> prefix,
               std::span<const TokenId> continuation) const override;

 private:
  std::string request(const std::string& op, std::span<const TokenId> prefix,
                      const std::vector<TokenId>* cont, std::int64_t& id) const;

  Segmentation segmentation_;
  std::unique_ptr<Transport> transport_;
  mutable std::mutex mutex_;
  mutable std::int64_t next_id_ = 1;
};

// Answers requests read from `in` until end of input, one reply line per
// request line. Returns the number of requests handled.
std::size_t serve(const DistributionProvider& provider, std::istream& in, std::ostream& out);

// Reply to a single request line (no trailing newline).
std::string handle_request(const DistributionProvider& provider, const std::string& line);

}  // namespace pred::lm
