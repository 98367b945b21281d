// Copyright 2026 The nlwm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Concrete transports and the matching server loops.
//
// Fixture archives are directories of "<digest>.json" files, each holding
// {"request": ..., "response": ...} where digest = RequestDigest(request).

#ifndef NLWM_TRANSPORT_H_
#define NLWM_TRANSPORT_H_

#include <cstdio>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"
#include "nlwm/backend.h"
#include "nlwm/toy_model.h"

namespace nlwm {

inline constexpr char kSidecarAddressEnv[] = "NLWM_SIDECAR_ADDR";

using Handler = std::function<Json(const Json&)>;

// In-process toy model.
class ToyTransport : public Transport {
 public:
  absl::StatusOr<Json> Call(const Json& request) override;

 private:
  ToyModel model_;
};

// Replays a fixture archive; a request with no recorded reply is
// BackendUnavailable. Loads the whole directory up front.
class FixtureTransport : public Transport {
 public:
  static absl::StatusOr<std::unique_ptr<FixtureTransport>> Open(
      const std::string& dir);

  absl::StatusOr<Json> Call(const Json& request) override;

  size_t size() const { return responses_.size(); }
  long misses() const;

 private:
  FixtureTransport() = default;

  std::unordered_map<std::string, Json> responses_;
  mutable std::mutex mu_;
  long misses_ = 0;
};

// Forwards to `inner` and writes every successful exchange into `dir`.
class RecordingTransport : public Transport {
 public:
  RecordingTransport(std::shared_ptr<Transport> inner, std::string dir);

  absl::StatusOr<Json> Call(const Json& request) override;

  long written() const;

 private:
  std::shared_ptr<Transport> inner_;
  std::string dir_;
  mutable std::mutex mu_;
  long written_ = 0;
};

// POSTs each request to http://<address>/rpc.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string address);

  absl::StatusOr<Json> Call(const Json& request) override;

 private:
  std::string host_;
  int port_ = 80;
};

// Speaks framed messages to a child process over its stdin/stdout.
class ProcessTransport : public Transport {
 public:
  // Runs `command` through /bin/sh -c.
  static absl::StatusOr<std::unique_ptr<ProcessTransport>> Spawn(
      const std::string& command);
  ~ProcessTransport() override;

  absl::StatusOr<Json> Call(const Json& request) override;

 private:
  ProcessTransport() = default;

  std::mutex mu_;
  int pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

// Reads one "<length>\n<payload>" frame. Returns nullopt on clean EOF.
absl::StatusOr<std::optional<std::string>> ReadFrame(std::FILE* in);
absl::Status WriteFrame(std::FILE* out, std::string_view payload);

// Answers framed requests from `in` until EOF. Unparseable messages get an
// error reply and the loop continues.
absl::Status ServeStream(std::FILE* in, std::FILE* out, const Handler& handler);

// Serves POST /rpc. Bind() then Run() blocks until Stop() is called from
// another thread.
class HttpServer {
 public:
  explicit HttpServer(Handler handler);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  absl::Status Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Handler wrapper: parses the body, applies `handler`, serializes.
std::string HandleText(const Handler& handler, const std::string& body);

struct FixtureRecord {
  std::string digest;
  Json request;
  Json response;
};

// All records of an archive, sorted by digest.
absl::StatusOr<std::vector<FixtureRecord>> ReadFixtureArchive(
    const std::string& dir);

absl::Status WriteFixture(const std::string& dir, const Json& request,
                          const Json& response);

// Backend selection used by the command line:
//   "toy", "fixtures:<dir>", "http://host:port" or "host:port",
//   "exec:<command>".
absl::StatusOr<std::shared_ptr<Transport>> OpenTransport(const std::string& spec);

}  // namespace nlwm

#endif  // NLWM_TRANSPORT_H_
