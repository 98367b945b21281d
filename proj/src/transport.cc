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

#include "nlwm/transport.h"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "nlwm/status.h"

namespace nlwm {
namespace {

namespace fs = std::filesystem;

absl::Status Unavailable(const std::string& message) {
  return MakeError(ErrorKind::kBackendUnavailable, message);
}

absl::StatusOr<Json> ParseJson(const std::string& text,
                               const std::string& what) {
  Json value = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) {
    return MakeError(ErrorKind::kProtocolViolation, what + " is not JSON");
  }
  return absl::StatusOr<Json>(absl::in_place, std::move(value));
}

}  // namespace

absl::StatusOr<Json> ToyTransport::Call(const Json& request) {
  return absl::StatusOr<Json>(absl::in_place, model_.Handle(request));
}

absl::StatusOr<std::vector<FixtureRecord>> ReadFixtureArchive(
    const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    return MakeError(ErrorKind::kIo, "fixture directory " + dir + " not found");
  }
  std::vector<FixtureRecord> records;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir, ec)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::stringstream buffer;
    buffer << in.rdbuf();
    NLWM_ASSIGN_OR_RETURN(Json record,
                          ParseJson(buffer.str(), entry.path().string()));
    if (!record.is_object() || record.size() != 2 ||
        !record.contains("request") || !record.contains("response")) {
      return MakeError(ErrorKind::kProtocolViolation,
                       entry.path().string() + " is not a fixture record");
    }
    const std::string digest = RequestDigest(record["request"]);
    if (entry.path().stem().string() != digest) {
      return MakeError(ErrorKind::kProtocolViolation,
                       entry.path().string() + " does not match digest " +
                           digest);
    }
    records.push_back(
        {digest, std::move(record["request"]), std::move(record["response"])});
  }
  std::sort(records.begin(), records.end(),
            [](const FixtureRecord& a, const FixtureRecord& b) {
              return a.digest < b.digest;
            });
  return records;
}

absl::Status WriteFixture(const std::string& dir, const Json& request,
                          const Json& response) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string digest = RequestDigest(request);
  const fs::path path = fs::path(dir) / (digest + ".json");
  if (fs::exists(path, ec)) return absl::OkStatus();
  const fs::path tmp = fs::path(dir) / (digest + ".tmp" +
                                        std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary);
    out << CanonicalJson(Json{{"request", request}, {"response", response}})
        << "\n";
    if (!out) return MakeError(ErrorKind::kIo, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) return MakeError(ErrorKind::kIo, "cannot rename " + tmp.string());
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<FixtureTransport>> FixtureTransport::Open(
    const std::string& dir) {
  NLWM_ASSIGN_OR_RETURN(std::vector<FixtureRecord> records,
                        ReadFixtureArchive(dir));
  std::unique_ptr<FixtureTransport> transport(new FixtureTransport);
  for (FixtureRecord& r : records) {
    transport->responses_.emplace(r.digest, std::move(r.response));
  }
  return transport;
}

absl::StatusOr<Json> FixtureTransport::Call(const Json& request) {
  auto it = responses_.find(RequestDigest(request));
  if (it == responses_.end()) {
    std::lock_guard<std::mutex> lock(mu_);
    ++misses_;
    return Unavailable("no fixture for " + std::string(request.value("op", "?")) +
                       " request " + request.value("id", ""));
  }
  Json response = it->second;
  // Ids are derived from the digest, so a replayed reply always matches.
  response["id"] = request["id"];
  return absl::StatusOr<Json>(absl::in_place, std::move(response));
}

long FixtureTransport::misses() const {
  std::lock_guard<std::mutex> lock(mu_);
  return misses_;
}

RecordingTransport::RecordingTransport(std::shared_ptr<Transport> inner,
                                       std::string dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {}

absl::StatusOr<Json> RecordingTransport::Call(const Json& request) {
  NLWM_ASSIGN_OR_RETURN(Json response, inner_->Call(request));
  if (response.is_object() && response.value("ok", false)) {
    std::lock_guard<std::mutex> lock(mu_);
    NLWM_RETURN_IF_ERROR(WriteFixture(dir_, request, response));
    ++written_;
  }
  return absl::StatusOr<Json>(absl::in_place, std::move(response));
}

long RecordingTransport::written() const {
  std::lock_guard<std::mutex> lock(mu_);
  return written_;
}

HttpTransport::HttpTransport(std::string address) {
  constexpr std::string_view kScheme = "http://";
  if (address.rfind(kScheme, 0) == 0) address.erase(0, kScheme.size());
  while (!address.empty() && address.back() == '/') address.pop_back();
  const size_t colon = address.rfind(':');
  if (colon == std::string::npos) {
    host_ = address;
  } else {
    host_ = address.substr(0, colon);
    port_ = std::atoi(address.c_str() + colon + 1);
  }
}

absl::StatusOr<Json> HttpTransport::Call(const Json& request) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(120, 0);
  httplib::Result res =
      client.Post("/rpc", CanonicalJson(request), "application/json");
  if (!res) {
    return Unavailable("sidecar at " + host_ + ":" + std::to_string(port_) +
                       " unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    return Unavailable("sidecar HTTP status " + std::to_string(res->status));
  }
  return ParseJson(res->body, "sidecar reply");
}

absl::StatusOr<std::optional<std::string>> ReadFrame(std::FILE* in) {
  std::string header;
  int c;
  while ((c = std::fgetc(in)) != EOF && c != '\n') {
    if (c < '0' || c > '9' || header.size() > 12) {
      return MakeError(ErrorKind::kProtocolViolation, "bad frame header");
    }
    header.push_back(static_cast<char>(c));
  }
  if (c == EOF) {
    if (header.empty()) return std::optional<std::string>();
    return MakeError(ErrorKind::kProtocolViolation, "truncated frame header");
  }
  if (header.empty()) {
    return MakeError(ErrorKind::kProtocolViolation, "empty frame header");
  }
  std::string payload(std::stoull(header), '\0');
  if (!payload.empty() &&
      std::fread(payload.data(), 1, payload.size(), in) != payload.size()) {
    return MakeError(ErrorKind::kProtocolViolation, "truncated frame");
  }
  return std::optional<std::string>(std::move(payload));
}

absl::Status WriteFrame(std::FILE* out, std::string_view payload) {
  const std::string frame = Frame(payload);
  if (std::fwrite(frame.data(), 1, frame.size(), out) != frame.size() ||
      std::fflush(out) != 0) {
    return MakeError(ErrorKind::kIo, "frame write failed");
  }
  return absl::OkStatus();
}

std::string HandleText(const Handler& handler, const std::string& body) {
  Json request = Json::parse(body, nullptr, false);
  if (request.is_discarded()) {
    return CanonicalJson(ErrorResponse("", "BadRequest", "body is not JSON"));
  }
  return CanonicalJson(handler(request));
}

absl::Status ServeStream(std::FILE* in, std::FILE* out,
                         const Handler& handler) {
  while (true) {
    NLWM_ASSIGN_OR_RETURN(std::optional<std::string> frame, ReadFrame(in));
    if (!frame.has_value()) return absl::OkStatus();
    NLWM_RETURN_IF_ERROR(WriteFrame(out, HandleText(handler, *frame)));
  }
}

struct HttpServer::Impl {
  Handler handler;
  httplib::Server server;
};

HttpServer::HttpServer(Handler handler) : impl_(new Impl) {
  impl_->handler = std::move(handler);
  Impl* impl = impl_.get();
  impl_->server.Post("/rpc", [impl](const httplib::Request& req,
                                    httplib::Response& res) {
    res.set_content(HandleText(impl->handler, req.body), "application/json");
  });
}

HttpServer::~HttpServer() { impl_->server.stop(); }

absl::StatusOr<int> HttpServer::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    return MakeError(ErrorKind::kIo,
                     "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

absl::Status HttpServer::Run() {
  if (!impl_->server.listen_after_bind()) {
    return MakeError(ErrorKind::kIo, "server stopped with an error");
  }
  return absl::OkStatus();
}

void HttpServer::Stop() { impl_->server.stop(); }

absl::StatusOr<std::unique_ptr<ProcessTransport>> ProcessTransport::Spawn(
    const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    return Unavailable("pipe() failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) return Unavailable("fork() failed");
  if (pid == 0) {
    ::dup2(to_child[0], 0);
    ::dup2(from_child[1], 1);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  std::unique_ptr<ProcessTransport> transport(new ProcessTransport);
  transport->pid_ = pid;
  transport->to_child_ = ::fdopen(to_child[1], "w");
  transport->from_child_ = ::fdopen(from_child[0], "r");
  return transport;
}

ProcessTransport::~ProcessTransport() {
  if (to_child_ != nullptr) std::fclose(to_child_);
  if (from_child_ != nullptr) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

absl::StatusOr<Json> ProcessTransport::Call(const Json& request) {
  std::lock_guard<std::mutex> lock(mu_);
  absl::Status sent = WriteFrame(to_child_, CanonicalJson(request));
  if (!sent.ok()) return Unavailable("sidecar process closed its input");
  auto frame = ReadFrame(from_child_);
  if (!frame.ok()) return frame.status();
  if (!frame->has_value()) return Unavailable("sidecar process exited");
  return ParseJson(**frame, "sidecar reply");
}

absl::StatusOr<std::shared_ptr<Transport>> OpenTransport(
    const std::string& spec) {
  if (spec == "toy") return std::shared_ptr<Transport>(new ToyTransport);
  if (spec.rfind("fixtures:", 0) == 0) {
    NLWM_ASSIGN_OR_RETURN(std::unique_ptr<FixtureTransport> fixtures,
                          FixtureTransport::Open(spec.substr(9)));
    return std::shared_ptr<Transport>(std::move(fixtures));
  }
  if (spec.rfind("exec:", 0) == 0) {
    NLWM_ASSIGN_OR_RETURN(std::unique_ptr<ProcessTransport> process,
                          ProcessTransport::Spawn(spec.substr(5)));
    return std::shared_ptr<Transport>(std::move(process));
  }
  if (spec.empty()) {
    return MakeError(ErrorKind::kDegenerateConfig, "empty backend spec");
  }
  return std::shared_ptr<Transport>(new HttpTransport(spec));
}

}  // namespace nlwm
