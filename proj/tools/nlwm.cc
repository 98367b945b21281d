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

// Command-line front end.
//
// Exit codes: 0 ok, 1 other failure, 2 configuration, 3 backend, 4 I/O.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "nlwm/anchor.h"
#include "nlwm/codec.h"
#include "nlwm/config.h"
#include "nlwm/corrupt.h"
#include "nlwm/eval.h"
#include "nlwm/status.h"
#include "nlwm/toy_model.h"
#include "nlwm/transport.h"

namespace nlwm {
namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitIo = 4;

void Log(std::string_view level, std::string_view message,
         Json fields = Json::object()) {
  fields["level"] = std::string(level);
  fields["msg"] = std::string(message);
  std::cerr << fields.dump(-1, ' ', false, Json::error_handler_t::replace)
            << std::endl;
}

int ExitCodeFor(const absl::Status& status) {
  const auto kind = ErrorKindOf(status);
  if (!kind) return kExitOther;
  switch (*kind) {
    case ErrorKind::kDegenerateConfig:
    case ErrorKind::kProductTooLarge:
    case ErrorKind::kEmptyTruth:
      return kExitConfig;
    case ErrorKind::kBackendUnavailable:
    case ErrorKind::kProtocolViolation:
      return kExitBackend;
    case ErrorKind::kIo:
      return kExitIo;
    default:
      return kExitOther;
  }
}

int Fail(const absl::Status& status) {
  const auto kind = ErrorKindOf(status);
  Log("error", std::string(status.message()),
      {{"kind", kind ? std::string(ErrorKindName(*kind)) : "Unknown"}});
  return ExitCodeFor(status);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorKind::kIo, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return absl::OkStatus();
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return MakeError(ErrorKind::kIo, "cannot write " + path);
  out << content;
  out.close();
  if (!out) return MakeError(ErrorKind::kIo, "write failed for " + path);
  return absl::OkStatus();
}

// One sentence per nonblank line. A run file (.jsonl) contributes its
// watermarked sentences.
absl::StatusOr<std::vector<TokenizedSentence>> ReadCorpus(
    const std::string& path) {
  NLWM_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  std::vector<std::string> lines;
  if (path.size() > 6 && path.substr(path.size() - 6) == ".jsonl") {
    NLWM_ASSIGN_OR_RETURN(WatermarkRun run, WatermarkRun::FromJsonl(text));
    for (const SentenceRecord& r : run.records) lines.push_back(r.watermarked);
  } else {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) {
        lines.push_back(line);
      }
    }
  }
  std::vector<TokenizedSentence> out;
  for (const std::string& line : lines) {
    auto s = TokenizeAllowEmpty(line);
    if (!s.ok()) {
      return MakeError(ErrorKind::kIo, path + ": " + std::string(s.status().message()));
    }
    out.push_back(*std::move(s));
  }
  return out;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

// Options shared by commands that talk to a backend.
struct Common {
  std::string config_path;
  std::string preset;
  std::string backend;
  std::string fixtures;
  std::string sidecar;
  std::string record;
  int jobs = 1;
  // Overrides.
  std::string component;
  double keyword_ratio = -1;
  int k1 = -1;
  int k2 = -1;
  std::string ordering;
  std::string stopwords;
  std::string stopwords_sha256;
  bool discard_coordination = false;
  long long seed = -1;

  void AddBackendFlags(CLI::App* app) {
    app->add_option("--backend", backend,
                    "toy, fixtures:<dir>, exec:<cmd> or host:port");
    app->add_option("--fixtures", fixtures, "replay a fixture archive");
    app->add_option("--sidecar", sidecar, "sidecar address host:port");
    app->add_option("--record", record, "write every exchange to this archive");
  }

  void AddConfigFlags(CLI::App* app) {
    app->add_option("--config", config_path, "JSON run configuration");
    app->add_option("--preset", preset, "named preset, e.g. imdb-keyword");
    app->add_option("--component", component, "keyword, syntactic or random");
    app->add_option("--kr", keyword_ratio, "keyword ratio");
    app->add_option("--k1", k1, "infill fan-out");
    app->add_option("--k2", k2, "candidates kept per mask");
    app->add_option("--ordering", ordering, "dependency ordering JSON file");
    app->add_flag("--discard-cc", discard_coordination,
                  "drop the coordination label from the ordering");
    app->add_option("--stopwords", stopwords, "candidate stopword file");
    app->add_option("--stopwords-sha256", stopwords_sha256,
                    "expected hash of the stopword file");
    app->add_option("--seed", seed, "message seed and random-baseline key");
    app->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    AddBackendFlags(app);
  }

  absl::StatusOr<RunConfig> Config() const {
    RunConfig c;
    if (!preset.empty()) {
      NLWM_ASSIGN_OR_RETURN(c, PresetConfig(preset));
    }
    if (!config_path.empty()) {
      NLWM_ASSIGN_OR_RETURN(c, RunConfig::Load(config_path, c));
    }
    if (!component.empty()) {
      NLWM_ASSIGN_OR_RETURN(c.component, ParseComponent(component));
    }
    if (keyword_ratio >= 0) c.keyword_ratio = keyword_ratio;
    if (k1 >= 0) c.k1 = k1;
    if (k2 >= 0) c.k2 = k2;
    if (!ordering.empty()) c.ordering_file = ordering;
    if (discard_coordination) c.discard_coordination = true;
    if (!stopwords.empty()) c.stopword_file = stopwords;
    if (!stopwords_sha256.empty()) c.stopword_sha256 = stopwords_sha256;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    return c;
  }

  // Precedence: --backend, --fixtures, --sidecar, config, environment, toy.
  std::string BackendSpec(const RunConfig& config) const {
    if (!backend.empty()) return backend;
    if (!fixtures.empty()) return "fixtures:" + fixtures;
    if (!sidecar.empty()) return sidecar;
    if (!config.backend.empty()) return config.backend;
    if (const char* env = std::getenv(kSidecarAddressEnv); env && *env) {
      return env;
    }
    return "toy";
  }

  absl::StatusOr<std::shared_ptr<Transport>> Open(
      const RunConfig& config) const {
    const std::string spec = BackendSpec(config);
    NLWM_ASSIGN_OR_RETURN(std::shared_ptr<Transport> t,
                          OpenTransport(spec));
    Log("info", "backend", {{"spec", spec}});
    if (!record.empty()) {
      t = std::make_shared<RecordingTransport>(t, record);
    }
    return t;
  }
};

void LogCounters(const Backend& backend) {
  const Backend::Counters c = backend.counters();
  Json fields = Json::object();
  for (int op = 0; op < kOpCount; ++op) {
    fields[std::string(OpName(static_cast<Op>(op)))] = c.calls[op];
  }
  fields["cache_hits"] = c.cache_hits;
  Log("info", "backend calls", fields);
}

absl::Status CmdEmbed(const Common& common, const std::string& in,
                      std::string message, const std::string& message_file,
                      const std::string& out, const std::string& text_out) {
  NLWM_ASSIGN_OR_RETURN(RunConfig run_config, common.Config());
  NLWM_ASSIGN_OR_RETURN(CodecConfig config, run_config.ToCodecConfig());
  if (!message_file.empty()) {
    NLWM_ASSIGN_OR_RETURN(message, ReadFile(message_file));
    while (!message.empty() && std::isspace(static_cast<unsigned char>(message.back()))) {
      message.pop_back();
    }
  }
  if (!IsMessage(message)) {
    return MakeError(ErrorKind::kDegenerateConfig, "message must be 0/1");
  }
  NLWM_ASSIGN_OR_RETURN(std::vector<TokenizedSentence> corpus, ReadCorpus(in));
  NLWM_ASSIGN_OR_RETURN(auto transport, common.Open(run_config));
  Backend backend(transport);
  NLWM_ASSIGN_OR_RETURN(WatermarkRun run,
                        EmbedCorpus(corpus, message, config, backend, common.jobs));
  NLWM_RETURN_IF_ERROR(WriteFile(out, run.ToJsonl()));
  if (!text_out.empty()) {
    std::vector<std::string> lines;
    for (const SentenceRecord& r : run.records) lines.push_back(r.watermarked);
    NLWM_RETURN_IF_ERROR(WriteFile(text_out, JoinLines(lines)));
  }
  const std::string bits = run.Bits();
  Log("info", "embedded",
      {{"sentences", run.records.size()},
       {"bits", bits.size()},
       {"message_bits", message.size()},
       {"capacity", run.TotalCapacity()},
       {"bpw", BitsPerWord(run)}});
  if (bits.size() < message.size()) {
    Log("warning", "message longer than corpus capacity",
        {{"dropped_bits", message.size() - bits.size()}});
  }
  LogCounters(backend);
  return absl::OkStatus();
}

absl::Status CmdExtract(const Common& common, const std::string& in,
                        const std::string& out, const std::string& bits_out) {
  NLWM_ASSIGN_OR_RETURN(RunConfig run_config, common.Config());
  NLWM_ASSIGN_OR_RETURN(CodecConfig config, run_config.ToCodecConfig());
  NLWM_ASSIGN_OR_RETURN(std::vector<TokenizedSentence> corpus, ReadCorpus(in));
  NLWM_ASSIGN_OR_RETURN(auto transport, common.Open(run_config));
  Backend backend(transport);
  NLWM_ASSIGN_OR_RETURN(WatermarkRun run,
                        ExtractCorpus(corpus, config, backend, common.jobs));
  if (!out.empty()) NLWM_RETURN_IF_ERROR(WriteFile(out, run.ToJsonl()));
  NLWM_RETURN_IF_ERROR(WriteFile(bits_out, run.Bits() + "\n"));
  Log("info", "extracted",
      {{"sentences", run.records.size()}, {"bits", run.Bits().size()}});
  LogCounters(backend);
  return absl::OkStatus();
}

absl::Status CmdCorrupt(const Common& common, const std::string& spec_text,
                        const std::string& in, const std::string& out,
                        int replicate, bool contextual, int retries) {
  NLWM_ASSIGN_OR_RETURN(CorruptionSpec spec, ParseCorruptionSpec(spec_text));
  spec.contextual = contextual;
  spec.retries = retries;
  NLWM_ASSIGN_OR_RETURN(std::vector<TokenizedSentence> corpus, ReadCorpus(in));
  std::unique_ptr<Backend> backend;
  if (spec.similarity_floor || spec.contextual) {
    NLWM_ASSIGN_OR_RETURN(RunConfig run_config, common.Config());
    NLWM_ASSIGN_OR_RETURN(auto transport, common.Open(run_config));
    backend = std::make_unique<Backend>(transport);
  }
  const int n = static_cast<int>(corpus.size());
  std::vector<std::string> lines(n);
  std::vector<char> edited(n, 0), below(n, 0);
  NLWM_RETURN_IF_ERROR(ParallelFor(n, common.jobs, [&](int i) -> absl::Status {
    absl::StatusOr<Corruption> c =
        Corrupt(corpus[i], spec, i, replicate, backend.get());
    if (IsKind(c.status(), ErrorKind::kNothingToCorrupt) ||
        IsKind(c.status(), ErrorKind::kEmptyInput)) {
      c = Unchanged(corpus[i]);
    }
    if (!c.ok()) return c.status();
    lines[i] = c->text.text();
    edited[i] = c->edits > 0;
    below[i] = !c->passed_floor;
    return absl::OkStatus();
  }));
  NLWM_RETURN_IF_ERROR(WriteFile(out, JoinLines(lines)));
  Log("info", "corrupted",
      {{"spec", spec.ToString()},
       {"sentences", n},
       {"edited", std::count(edited.begin(), edited.end(), 1)},
       {"below_floor", std::count(below.begin(), below.end(), 1)}});
  return absl::OkStatus();
}

absl::Status CmdEvaluate(const Common& common, const std::string& in,
                         const std::string& specs, const std::string& report_path,
                         const std::string& csv_path, int replicates,
                         bool semantic) {
  NLWM_ASSIGN_OR_RETURN(RunConfig run_config, common.Config());
  NLWM_ASSIGN_OR_RETURN(CodecConfig config, run_config.ToCodecConfig());
  NLWM_ASSIGN_OR_RETURN(std::vector<TokenizedSentence> corpus, ReadCorpus(in));
  ExperimentOptions options;
  NLWM_ASSIGN_OR_RETURN(options.specs, ParseCorruptionSpecs(specs));
  options.message_seed = run_config.seed;
  options.replicates = replicates;
  options.jobs = common.jobs;
  options.semantic_scores = semantic;
  options.config_echo = run_config.ToJson();
  options.config_echo.erase("backend");
  NLWM_ASSIGN_OR_RETURN(auto transport, common.Open(run_config));
  Backend backend(transport);
  NLWM_ASSIGN_OR_RETURN(EvaluationReport report,
                        RunExperiment(corpus, config, options, backend));
  Json json = report.ToJson();
  NLWM_RETURN_IF_ERROR(WriteFile(report_path, json.dump(2) + "\n"));
  if (!csv_path.empty()) NLWM_RETURN_IF_ERROR(WriteFile(csv_path, report.ToCsv()));
  Log("info", "evaluated",
      {{"rows", report.rows.size()}, {"bpw", report.bpw},
       {"message_bits", report.message_bits}});
  LogCounters(backend);
  return absl::OkStatus();
}

absl::Status CmdOrderDeps(const Common& common, const std::string& in,
                          const std::string& out, const std::string& scores_out) {
  NLWM_ASSIGN_OR_RETURN(RunConfig run_config, common.Config());
  NLWM_ASSIGN_OR_RETURN(std::vector<TokenizedSentence> corpus, ReadCorpus(in));
  std::erase_if(corpus, [](const TokenizedSentence& s) {
    return s.word_count() == 0;
  });
  NLWM_ASSIGN_OR_RETURN(auto transport, common.Open(run_config));
  Backend backend(transport);
  NLWM_ASSIGN_OR_RETURN(NliOrderingResult result,
                        OrderDependenciesNli(corpus, backend, run_config.k1));
  result.ordering.discard_coordination = run_config.discard_coordination;
  NLWM_RETURN_IF_ERROR(WriteFile(out, result.ordering.ToJson().dump(2) + "\n"));
  if (!scores_out.empty()) {
    Json scores = Json::array();
    for (const LabelScore& s : result.scores) {
      scores.push_back({{"label", s.label}, {"mean", s.mean}, {"count", s.count}});
    }
    NLWM_RETURN_IF_ERROR(WriteFile(scores_out, scores.dump(2) + "\n"));
  }
  Log("info", "ordered", {{"labels", result.ordering.labels.size()}});
  LogCounters(backend);
  return absl::OkStatus();
}

absl::Status CmdFixturesVerify(const Common& common, const std::string& dir) {
  NLWM_ASSIGN_OR_RETURN(std::vector<FixtureRecord> records,
                        ReadFixtureArchive(dir));
  RunConfig run_config;
  std::string spec = common.backend.empty() ? common.sidecar : common.backend;
  if (spec.empty()) spec = "toy";
  NLWM_ASSIGN_OR_RETURN(std::shared_ptr<Transport> transport, OpenTransport(spec));
  int mismatches = 0;
  for (const FixtureRecord& r : records) {
    NLWM_ASSIGN_OR_RETURN(Json got, transport->Call(r.request));
    Json expected = r.response;
    expected["id"] = got.value("id", Json());
    if (CanonicalJson(got) != CanonicalJson(expected)) {
      ++mismatches;
      Log("error", "fixture mismatch",
          {{"digest", r.digest}, {"op", r.request.value("op", "")}});
    }
  }
  Log("info", "verified",
      {{"records", records.size()}, {"mismatches", mismatches}, {"backend", spec}});
  if (mismatches > 0) {
    return MakeError(ErrorKind::kProtocolViolation,
                     std::to_string(mismatches) + " fixtures differ");
  }
  return absl::OkStatus();
}

absl::Status CmdFixturesStats(const std::string& dir) {
  NLWM_ASSIGN_OR_RETURN(std::vector<FixtureRecord> records,
                        ReadFixtureArchive(dir));
  std::map<std::string, int> per_op;
  for (const FixtureRecord& r : records) {
    ++per_op[r.request.value("op", "?")];
  }
  Json out = {{"records", records.size()}, {"ops", per_op}};
  std::cout << out.dump() << std::endl;
  return absl::OkStatus();
}

absl::Status CmdServe(bool stdio, const std::string& http) {
  auto model = std::make_shared<ToyModel>();
  Handler handler = [model](const Json& request) {
    return model->Handle(request);
  };
  if (stdio) return ServeStream(stdin, stdout, handler);
  std::string host = "127.0.0.1";
  int port = 0;
  const size_t colon = http.rfind(':');
  if (colon == std::string::npos) {
    return MakeError(ErrorKind::kDegenerateConfig, "--http expects host:port");
  }
  host = http.substr(0, colon);
  try {
    port = std::stoi(http.substr(colon + 1));
  } catch (const std::exception&) {
    return MakeError(ErrorKind::kDegenerateConfig, "bad port in " + http);
  }
  HttpServer server(handler);
  NLWM_ASSIGN_OR_RETURN(int bound, server.Bind(host, port));
  Log("info", "listening", {{"host", host}, {"port", bound}});
  std::cout << bound << std::endl;
  return server.Run();
}

int Main(int argc, char** argv) {
  CLI::App app{"Lexical-substitution text watermarking"};
  app.require_subcommand(1);
  Common common;

  std::string in, out, message, message_file, text_out, bits_out, spec_text,
      specs, report_path = "-", csv_path, scores_out, dir, http;
  int replicate = 0, replicates = 5, retries = kDefaultCorruptionRetries;
  bool semantic = false, contextual = false, stdio = false;

  CLI::App* embed = app.add_subcommand("embed", "embed a message");
  common.AddConfigFlags(embed);
  embed->add_option("--in", in, "corpus, one sentence per line")->required();
  auto* msg = embed->add_option("--message", message, "bits, e.g. 1011");
  embed->add_option("--message-file", message_file, "file holding the bits")
      ->excludes(msg);
  embed->add_option("--out", out, "run records (JSONL)")->required();
  embed->add_option("--text-out", text_out, "watermarked sentences");

  CLI::App* extract = app.add_subcommand("extract", "extract bits");
  common.AddConfigFlags(extract);
  extract->add_option("--in", in, "sentences or a run .jsonl")->required();
  extract->add_option("--out", out, "per-sentence records (JSONL)");
  extract->add_option("--bits-out", bits_out, "extracted bits (default stdout)");

  CLI::App* corrupt = app.add_subcommand("corrupt", "corrupt sentences");
  common.AddConfigFlags(corrupt);
  corrupt->add_option("--spec", spec_text, "kind:cr:seed[:floor]")->required();
  corrupt->add_option("--in", in, "sentences")->required();
  corrupt->add_option("--out", out, "corrupted sentences")->required();
  corrupt->add_option("--replicate", replicate, "replicate index");
  corrupt->add_option("--retries", retries, "similarity-floor retries");
  corrupt->add_flag("--contextual", contextual,
                    "draw words from the infill model");

  CLI::App* evaluate = app.add_subcommand("evaluate", "corruption experiment");
  common.AddConfigFlags(evaluate);
  evaluate->add_option("--in", in, "corpus")->required();
  evaluate->add_option("--specs", specs, "comma-separated corruption specs");
  evaluate->add_option("--report", report_path, "report JSON (default stdout)");
  evaluate->add_option("--csv", csv_path, "report table CSV");
  evaluate->add_option("--replicates", replicates, "samples per sentence")
      ->check(CLI::PositiveNumber);
  evaluate->add_flag("--semantic", semantic, "entailment and similarity scores");

  CLI::App* order = app.add_subcommand("order-deps", "order dependency labels");
  common.AddConfigFlags(order);
  order->add_option("--in", in, "corpus")->required();
  order->add_option("--out", out, "ordering JSON")->required();
  order->add_option("--scores-out", scores_out, "per-label scores JSON");

  CLI::App* fixtures = app.add_subcommand("fixtures", "fixture archives");
  fixtures->require_subcommand(1);
  CLI::App* verify = fixtures->add_subcommand("verify", "replay against a backend");
  verify->add_option("--dir", dir, "archive directory")->required();
  verify->add_option("--backend", common.backend, "backend spec (default toy)");
  verify->add_option("--sidecar", common.sidecar, "sidecar address");
  CLI::App* stats = fixtures->add_subcommand("stats", "count records per op");
  stats->add_option("--dir", dir, "archive directory")->required();
  CLI::App* record = fixtures->add_subcommand(
      "record", "run an experiment and archive every exchange");
  common.AddConfigFlags(record);
  record->add_option("--in", in, "corpus")->required();
  record->add_option("--dir", dir, "archive directory")->required();
  record->add_option("--specs", specs, "corruption specs");
  record->add_option("--replicates", replicates, "samples per sentence")
      ->check(CLI::PositiveNumber);

  CLI::App* serve = app.add_subcommand("serve", "serve the toy model");
  auto* stdio_flag = serve->add_flag("--stdio", stdio, "framed stdin/stdout");
  serve->add_option("--http", http, "host:port")->excludes(stdio_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  absl::Status status;
  if (*embed) {
    status = CmdEmbed(common, in, message, message_file, out, text_out);
  } else if (*extract) {
    status = CmdExtract(common, in, out, bits_out);
  } else if (*corrupt) {
    status = CmdCorrupt(common, spec_text, in, out, replicate, contextual, retries);
  } else if (*evaluate) {
    status = CmdEvaluate(common, in, specs, report_path, csv_path, replicates,
                         semantic);
  } else if (*order) {
    status = CmdOrderDeps(common, in, out, scores_out);
  } else if (*verify) {
    status = CmdFixturesVerify(common, dir);
  } else if (*stats) {
    status = CmdFixturesStats(dir);
  } else if (*record) {
    // Both anchoring components, so parse and NER replies are archived.
    common.record = dir;
    for (const char* component : {"keyword", "syntactic"}) {
      common.component = component;
      status = CmdEvaluate(common, in, specs, "/dev/null", "", replicates, true);
      if (!status.ok()) break;
    }
  } else if (*serve) {
    if (!stdio && http.empty()) {
      status = MakeError(ErrorKind::kDegenerateConfig, "serve needs --stdio or --http");
    } else {
      status = CmdServe(stdio, http);
    }
  }
  if (!status.ok()) return Fail(status);
  return 0;
}

}  // namespace
}  // namespace nlwm

int main(int argc, char** argv) { return nlwm::Main(argc, argv); }
