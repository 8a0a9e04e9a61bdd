/*
 * Copyright 2026 The fairmpc Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "fairmpc_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "fairmpc/attest.hpp"
#include "fairmpc/dataset.hpp"
#include "fairmpc/fairtrain.hpp"
#include "fairmpc/fpsh.hpp"
#include "fairmpc/pipeline.hpp"
#include "fairmpc/reference.hpp"
#include "fairmpc/transport.hpp"
#include "fairmpc_cli/manifest.hpp"

namespace fairmpc::cli {

namespace fs = std::filesystem;

Exit exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return Exit::kIo;
    case ErrorCode::kPeerDesync:
    case ErrorCode::kBadTag: return Exit::kPeerDesync;
    case ErrorCode::kTripleExhausted: return Exit::kTripleExhausted;
    case ErrorCode::kOverflow: return Exit::kOverflow;
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kSameParty:
    case ErrorCode::kBadShape:
    case ErrorCode::kParseError:
    case ErrorCode::kNonBinaryLabel:
    case ErrorCode::kEmptyFile:
    case ErrorCode::kZeroVariance:
    case ErrorCode::kBadCorrelation:
    case ErrorCode::kBadFormat: return Exit::kData;
    case ErrorCode::kPeerAborted: return Exit::kPeerAborted;
    case ErrorCode::kNoCommitment: return Exit::kNoCommitment;
    case ErrorCode::kInfeasibleIterate: return Exit::kInfeasibleIterate;
    case ErrorCode::kBadBlockSize:
    case ErrorCode::kInvalidArgument: return Exit::kUsage;
    case ErrorCode::kInsufficientEntropy:
    case ErrorCode::kSingularProjection: return Exit::kOther;
  }
  return Exit::kOther;
}

namespace {

constexpr const char* kConsumedMarker = "CONSUMED";

struct TrainFlags {
  TrainConfig cfg;
  int frac_bits = kDefaultFracBits;
  std::vector<double> slack = {1e-3};
  bool deterministic = false;

  void add_to(CLI::App* app, bool with_slack = true) {
    app->add_option("--frac-bits", frac_bits, "Fractional bits of the fixed-point encoding")
        ->capture_default_str()->check(CLI::Range(1, 30));
    app->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    app->add_option("--batch-log2", cfg.batch_log2, "log2 of the minibatch size")->capture_default_str();
    app->add_option("--eta-theta", cfg.eta_theta, "Model learning rate")->capture_default_str();
    app->add_option("--eta-lambda", cfg.eta_lambda, "Multiplier learning rate")->capture_default_str();
    app->add_option("--block", cfg.block, "Block size of the constraint product")->capture_default_str();
    if (with_slack) {
      app->add_option("--slack", slack, "Constraint slack c, one per sensitive attribute")
          ->capture_default_str()->delimiter(',');
    }
  }

  SessionOptions session(bool audit = false) const {
    SessionOptions o;
    o.frac_bits = frac_bits;
    o.truncation = deterministic ? TruncationMode::kDeterministic : TruncationMode::kProbabilistic;
    o.audit = audit;
    return o;
  }

  void describe(RunManifest& m) const {
    m.set("frac_bits", std::to_string(frac_bits));
    m.set("epochs", std::to_string(cfg.epochs));
    m.set("batch_log2", std::to_string(cfg.batch_log2));
    m.set("eta_theta", fmt_double(cfg.eta_theta));
    m.set("eta_lambda", fmt_double(cfg.eta_lambda));
    m.set("block", std::to_string(cfg.block));
    m.set("order_seed", std::to_string(cfg.seed));
    std::string s;
    for (std::size_t i = 0; i < slack.size(); ++i) s += (i ? "," : "") + fmt_double(slack[i]);
    m.set("slack", s);
    m.set("truncation", deterministic ? "deterministic" : "probabilistic");
  }

  static std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

struct PartyFlags {
  std::string role;
  std::string listen;
  std::string connect;
  int timeout_ms = 10000;
  std::string manifest;

  void add_to(CLI::App* app) {
    app->add_option("--role", role, "modeler or regulator")
        ->required()->check(CLI::IsMember({"modeler", "regulator"}));
    auto* l = app->add_option("--listen", listen, "host:port to accept the peer on");
    auto* c = app->add_option("--connect", connect, "host:port of the listening peer");
    l->excludes(c);
    app->add_option("--timeout-ms", timeout_ms, "Connect timeout")->capture_default_str();
    app->add_option("--manifest", manifest, "Run manifest path");
  }

  Party party() const { return role == "modeler" ? Party::kModeler : Party::kRegulator; }

  fs::path manifest_path(const std::string& command) const {
    return manifest.empty() ? fs::path(command + "." + role + ".manifest") : fs::path(manifest);
  }

  std::unique_ptr<Transport> open_transport() const {
    if (!listen.empty()) {
      const auto [host, port] = parse_endpoint(listen);
      return tcp_listen(host, port);
    }
    if (!connect.empty()) {
      const auto [host, port] = parse_endpoint(connect);
      return tcp_connect(host, port, std::chrono::milliseconds(timeout_ms));
    }
    throw Error(ErrorCode::kInvalidArgument, "one of --listen or --connect is required");
  }
};

// Pools are single use: a marker file is written as soon as a pool is loaded
// so that a second run cannot reuse the same correlated randomness.
TripleSet load_pool(const fs::path& dir, Party party) {
  if (fs::exists(dir / kConsumedMarker)) {
    throw Error(ErrorCode::kTripleExhausted, "pool " + dir.string() + " was already used");
  }
  TripleSet set = load_triple_set(dir, party);
  std::ofstream(dir / kConsumedMarker) << "consumed\n";
  return set;
}

Share load_party_share(const fs::path& path, Party party) {
  Share s = load_share(path);
  if (s.party != party) {
    throw Error(ErrorCode::kSameParty, path.string() + " belongs to the other party");
  }
  return s;
}

struct PartyRun {
  std::string transcript;
  std::uint64_t steps = 0;
};

// Connects, then loads the pool (so a failed connection does not burn it),
// runs `body` as `party` and aborts the peer on a local error.
PartyRun run_party(const PartyFlags& flags, const fs::path& pool_dir, const SessionOptions& options,
                   const std::function<void(Session&)>& body) {
  auto transport = flags.open_transport();
  Channel channel(*transport);
  try {
    TripleSet pool = load_pool(pool_dir, flags.party());
    Session session(flags.party(), channel, pool, options);
    body(session);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPeerAborted && e.code() != ErrorCode::kIo) channel.abort(e.code());
    throw;
  } catch (...) {
    channel.abort(ErrorCode::kInvalidArgument);
    throw;
  }
  return {channel.transcript_digest(), channel.step()};
}

void write_model(const fs::path& prefix, const RingMatrix& theta, int frac_bits) {
  write_container(fs::path(prefix.string() + ".fpsh"),
                  Container{Party::kModeler, ObjectType::kModel, {}, theta});
  std::ofstream txt(prefix.string() + ".txt");
  for (Ring v : theta.data()) txt << TrainFlags::fmt_double(decode_raw(v, frac_bits)) << "\n";
  if (!txt) throw Error(ErrorCode::kIo, "cannot write " + prefix.string() + ".txt");
}

RingMatrix read_model(const fs::path& path) {
  Container c = read_container(path);
  if (c.type != ObjectType::kModel || c.body.cols() != 1) {
    throw Error(ErrorCode::kBadFormat, path.string() + " is not a model file");
  }
  return c.body;
}

const Split& pick_split(const Dataset& d, const std::string& name) {
  return name == "train" ? d.train : d.test;
}

std::string bool_str(std::optional<bool> b) {
  return b ? (*b ? "true" : "false") : "unknown";
}

// ---- single-process commands ----

int cmd_synth(std::size_t n, double rho, std::uint64_t seed, const fs::path& out,
              const std::vector<std::string>& argv) {
  RunManifest m{"synth", "", seed, argv, {}, {}, {}};
  m.set("n", std::to_string(n));
  m.set("rho", TrainFlags::fmt_double(rho));
  m.output("data", out);
  const Dataset d = synth(n, rho, seed);
  m.write(out.string() + ".manifest");
  write_dataset(out, d);
  std::printf("wrote %zu training and %zu test rows to %s\n", d.train.n, d.test.n, out.c_str());
  return 0;
}

int cmd_share(const fs::path& data, std::uint64_t seed, int frac_bits, const fs::path& out_dir,
              const std::vector<std::string>& argv) {
  RunManifest m{"share", "", seed, argv, {}, {}, {}};
  m.set("frac_bits", std::to_string(frac_bits));
  m.input("data", data);
  m.output("dir", out_dir);
  const Dataset d = read_dataset(data);
  const Split& s = d.train;
  fs::create_directories(out_dir);
  m.write(out_dir / "share.manifest");
  const RingMatrix x = encode_features(s, frac_bits), y = encode_labels(s, frac_bits);
  Prg rng(seed);
  auto [z1, z2] = share_sensitive(s, rng, frac_bits);
  for (Party p : {Party::kModeler, Party::kRegulator}) {
    const fs::path dir = out_dir / (p == Party::kModeler ? "modeler" : "regulator");
    fs::create_directories(dir);
    // The modeler is the data holder for training; the regulator holds the
    // features used for certification.
    save_share(dir / "x.fpsh", trivial_share(p, Party::kModeler, x));
    save_share(dir / "y.fpsh", trivial_share(p, Party::kModeler, y));
    save_share(dir / "z.fpsh", p == Party::kModeler ? z1 : z2);
    save_share(dir / "cert_x.fpsh", trivial_share(p, Party::kRegulator, x));
  }
  std::printf("shared %zu rows (%zu sensitive attributes) into %s\n", s.n, s.p, out_dir.c_str());
  return 0;
}

int cmd_dealer(const fs::path& data, const std::string& stage, std::uint64_t seed,
               const TrainFlags& tf, const fs::path& out_dir,
               const std::vector<std::string>& argv) {
  RunManifest m{"dealer", "", seed, argv, {}, {}, {}};
  tf.describe(m);
  m.set("stage", stage);
  m.input("data", data);
  m.output("dir", out_dir);
  const Dataset d = read_dataset(data);
  const Split& s = d.train;
  DealSpec spec;
  if (stage == "train") {
    spec = training_consumption(s.n, s.d, s.p, tf.cfg);
  } else if (stage == "certify") {
    spec = certify_consumption(s.n, s.d, s.p, tf.cfg);
  } else {
    spec = verify_consumption(s.d);
  }
  fs::create_directories(out_dir);
  m.write(out_dir / ("dealer." + stage + ".manifest"));
  Prg rng(seed);
  auto [p1, p2] = deal(spec, rng);
  for (const TripleSet* set : {&p1, &p2}) {
    const fs::path dir = out_dir / (set->party() == Party::kModeler ? "modeler" : "regulator") / stage;
    fs::create_directories(dir);
    fs::remove(dir / kConsumedMarker);
    save_triple_set(dir, *set);
  }
  std::printf("dealt %s pools: %zu hadamard, %zu comparisons, %zu odd masks, %zu matrix shapes\n",
              stage.c_str(), spec.hadamard, spec.comparisons, spec.odd_masks, spec.matrix.size());
  return 0;
}

int cmd_baseline(const fs::path& data, const std::string& method, const std::string& arithmetic,
                 const TrainFlags& tf, const fs::path& out, const std::vector<std::string>& argv) {
  RunManifest m{"baseline", "", tf.cfg.seed, argv, {}, {}, {}};
  tf.describe(m);
  m.set("method", method);
  m.set("arithmetic", arithmetic);
  m.input("data", data);
  if (!out.empty()) m.output("theta", out);
  const Dataset d = read_dataset(data);
  m.write(out.empty() ? fs::path("baseline.manifest") : fs::path(out.string() + ".manifest"));
  const Method which = parse_method(method);
  std::vector<double> theta;
  switch (which) {
    case Method::kLagrangian:
      theta = train_lagrangian(d.train, tf.slack, tf.cfg,
                               arithmetic == "fixed" ? Arithmetic::kFixed : Arithmetic::kFloat);
      break;
    case Method::kProjected: {
      auto r = train_projected(d.train, tf.slack, tf.cfg);
      if (r.fallbacks) std::printf("pseudo-inverse fallbacks: %zu\n", r.fallbacks);
      theta = std::move(r.theta);
      break;
    }
    case Method::kIplb: theta = train_iplb(d.train, tf.slack, tf.cfg); break;
    case Method::kUnconstrained: theta = train_unconstrained(d.train, tf.cfg); break;
    case Method::kMpc:
      throw Error(ErrorCode::kInvalidArgument, "use the train command for MPC training");
  }
  for (const auto* split : {&d.train, &d.test}) {
    const auto r = evaluate(theta, *split, tf.slack);
    std::printf("%s accuracy=%.4f frac_pos_z0=%.4f frac_pos_z1=%.4f p_percent=%.2f constraint_max=%.3g\n",
                split == &d.train ? "train" : "test", r.accuracy, r.frac_pos_z0, r.frac_pos_z1,
                r.p_percent, r.constraint_max);
  }
  if (!out.empty()) {
    std::ofstream f(out);
    for (double v : theta) f << TrainFlags::fmt_double(v) << "\n";
  }
  return 0;
}

int cmd_sweep(const fs::path& data, const std::vector<std::string>& methods, std::size_t points,
              double lo, double hi, unsigned threads, const TrainFlags& tf, const fs::path& out,
              const std::vector<std::string>& argv) {
  RunManifest m{"sweep", "", tf.cfg.seed, argv, {}, {}, {}};
  tf.describe(m);
  m.set("points", std::to_string(points));
  m.set("lo", TrainFlags::fmt_double(lo));
  m.set("hi", TrainFlags::fmt_double(hi));
  m.input("data", data);
  if (!out.empty()) m.output("csv", out);
  std::vector<Method> which;
  for (const auto& name : methods) which.push_back(parse_method(name));
  const Dataset d = read_dataset(data);
  m.write(out.empty() ? fs::path("sweep.manifest") : fs::path(out.string() + ".manifest"));
  const auto grid = slack_grid(points, lo, hi);
  const auto rows = run_sweep(d, grid, which, tf.cfg, threads);
  if (out.empty()) {
    write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream f(out);
    write_sweep_csv(f, rows);
    if (!f) throw Error(ErrorCode::kIo, "cannot write " + out.string());
  }
  return 0;
}

int cmd_bench(std::size_t n, double rho, std::uint64_t seed, const TrainFlags& tf,
              const std::vector<std::string>& argv) {
  RunManifest m{"bench", "", seed, argv, {}, {}, {}};
  tf.describe(m);
  m.set("n", std::to_string(n));
  m.set("rho", TrainFlags::fmt_double(rho));
  m.write("bench.manifest");
  const Dataset d = synth(n, rho, seed);
  const SessionOptions options = tf.session();
  const auto trained = train_local(d.train, tf.slack, tf.cfg, options, seed + 1, seed + 2);
  const auto cert = certify_local(trained.theta_raw, d.train, tf.slack, tf.cfg, options, seed + 3);
  const std::size_t updates = static_cast<std::size_t>(tf.cfg.epochs) * (n / tf.cfg.batch());
  std::printf("%-9s %6s %3s %8s %10s %10s %14s\n", "phase", "n", "d", "updates", "exchanges",
              "seconds", "bytes_per_party");
  std::printf("%-9s %6zu %3zu %8zu %10llu %10.3f %14llu\n", "train", n, d.train.d, updates,
              static_cast<unsigned long long>(trained.stats.steps), trained.seconds,
              static_cast<unsigned long long>(trained.stats.bytes_modeler));
  std::printf("%-9s %6zu %3zu %8d %10llu %10.3f %14llu\n", "certify", n, d.train.d, 0,
              static_cast<unsigned long long>(cert.stats.steps), cert.seconds,
              static_cast<unsigned long long>(cert.stats.bytes_modeler));
  append_result("bench.manifest", {{"train_seconds", TrainFlags::fmt_double(trained.seconds)},
                                   {"certify_seconds", TrainFlags::fmt_double(cert.seconds)}});
  return 0;
}

// ---- two-party commands ----

int cmd_train(const PartyFlags& pf, const TrainFlags& tf, const fs::path& shares,
              const fs::path& triples, const fs::path& model_out,
              const std::vector<std::string>& argv) {
  const Party party = pf.party();
  RunManifest m{"train", pf.role, tf.cfg.seed, argv, {}, {}, {}};
  tf.describe(m);
  m.input("shares", shares);
  m.input("triples", triples);
  if (party == Party::kModeler) {
    m.output("model_fpsh", model_out.string() + ".fpsh");
    m.output("model_txt", model_out.string() + ".txt");
  }
  const fs::path manifest = pf.manifest_path("train");
  m.write(manifest);

  const SharedData data{load_party_share(shares / "x.fpsh", party),
                        load_party_share(shares / "y.fpsh", party),
                        load_party_share(shares / "z.fpsh", party)};
  std::optional<RingMatrix> model;
  const auto run = run_party(pf, triples, tf.session(), [&](Session& s) {
    model = train(s, data, tf.slack, tf.cfg).model;
  });
  if (model) {
    write_model(model_out, *model, tf.frac_bits);
    std::printf("model written to %s.fpsh and %s.txt\n", model_out.c_str(), model_out.c_str());
  } else {
    std::printf("training finished\n");
  }
  std::printf("exchanges=%llu transcript=%s\n", static_cast<unsigned long long>(run.steps),
              run.transcript.c_str());
  append_result(manifest, {{"status", "ok"}, {"steps", std::to_string(run.steps)},
                           {"transcript", run.transcript}});
  return 0;
}

int cmd_certify(const PartyFlags& pf, const TrainFlags& tf, const fs::path& shares,
                const fs::path& triples, const fs::path& model_path, const fs::path& commitment,
                std::uint64_t session_id, std::uint64_t seed, const std::vector<std::string>& argv) {
  const Party party = pf.party();
  RunManifest m{"certify", pf.role, seed, argv, {}, {}, {}};
  tf.describe(m);
  m.set("session_id", std::to_string(session_id));
  m.input("shares", shares);
  m.input("triples", triples);
  if (party == Party::kModeler) m.input("model", model_path);
  m.output("commitment", commitment);
  const fs::path manifest = pf.manifest_path("certify");
  m.write(manifest);

  const Share x = load_party_share(shares / "cert_x.fpsh", party);
  const Share z = load_party_share(shares / "z.fpsh", party);
  std::optional<RingMatrix> theta;
  if (party == Party::kModeler) {
    if (model_path.empty()) throw Error(ErrorCode::kInvalidArgument, "the modeler needs --model");
    theta = read_model(model_path);
  }
  Prg rng(seed);
  CertifyResult result;
  const auto run = run_party(pf, triples, tf.session(), [&](Session& s) {
    result = certify(s, theta ? &*theta : nullptr, x.cols(), x, z, tf.slack, tf.cfg, session_id, rng);
  });
  if (result.commitment) {
    fs::create_directories(commitment.parent_path().empty() ? fs::path(".") : commitment.parent_path());
    save_commitment(commitment, *result.commitment);
  }
  if (party == Party::kRegulator) {
    std::printf("fair=%s violations=%llu\n", bool_str(result.fair).c_str(),
                static_cast<unsigned long long>(result.violations.value_or(0)));
    std::printf(result.commitment ? "commitment written to %s\n" : "no commitment stored%s\n",
                result.commitment ? commitment.c_str() : "");
  } else {
    std::printf("companion share written to %s\n", commitment.c_str());
  }
  std::printf("exchanges=%llu transcript=%s\n", static_cast<unsigned long long>(run.steps),
              run.transcript.c_str());
  std::vector<std::pair<std::string, std::string>> res = {
      {"status", "ok"}, {"steps", std::to_string(run.steps)}, {"transcript", run.transcript}};
  if (result.fair) res.emplace_back("fair", bool_str(result.fair));
  append_result(manifest, res);
  return 0;
}

int cmd_verify(const PartyFlags& pf, int frac_bits, const fs::path& triples,
               const fs::path& model_path, const fs::path& commitment, const fs::path& data,
               const std::string& split, std::size_t row, std::optional<int> claim,
               std::uint64_t seed, const std::vector<std::string>& argv) {
  const Party party = pf.party();
  const Commitment committed = load_commitment(commitment);
  RunManifest m{"verify", pf.role, seed, argv, {}, {}, {}};
  m.set("frac_bits", std::to_string(frac_bits));
  m.input("triples", triples);
  m.input("commitment", commitment);
  if (party == Party::kModeler) {
    m.input("model", model_path);
  } else {
    m.input("data", data);
    m.set("split", split);
    m.set("row", std::to_string(row));
  }
  const fs::path manifest = pf.manifest_path("verify");
  m.write(manifest);

  std::optional<RingMatrix> theta, x;
  if (party == Party::kModeler) {
    if (model_path.empty()) throw Error(ErrorCode::kInvalidArgument, "the modeler needs --model");
    theta = read_model(model_path);
  } else {
    if (data.empty() || !claim) {
      throw Error(ErrorCode::kInvalidArgument, "the regulator needs --data, --row and --claim");
    }
    const Dataset d = read_dataset(data);
    const Split& s = pick_split(d, split);
    if (row >= s.n) throw Error(ErrorCode::kInvalidArgument, "--row out of range");
    x = encode_matrix(1, s.d, std::span<const double>(s.x.data() + row * s.d, s.d), frac_bits);
  }
  Prg rng(seed);
  SessionOptions options;
  options.frac_bits = frac_bits;
  VerifyResult result;
  const auto run = run_party(pf, triples, options, [&](Session& s) {
    result = verify(s, theta ? &*theta : nullptr, committed, x ? &*x : nullptr, claim, rng);
  });
  if (party == Party::kRegulator) {
    std::printf("model_match=%s decision_match=%s\n", bool_str(result.model_match).c_str(),
                bool_str(result.decision_match).c_str());
  } else {
    std::printf("verification finished\n");
  }
  append_result(manifest, {{"status", "ok"},
                           {"steps", std::to_string(run.steps)},
                           {"transcript", run.transcript},
                           {"model_match", bool_str(result.model_match)},
                           {"decision_match", bool_str(result.decision_match)}});
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"fairmpc: two-server training, certification and verification of fair classifiers"};
  app.require_subcommand(1);
  std::vector<std::string> argv = args;

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic dataset");
  std::size_t synth_n = 4096;
  double synth_rho = 0.8;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  synth_cmd->add_option("--n", synth_n, "Training rows (power of two)")->capture_default_str();
  synth_cmd->add_option("--rho", synth_rho, "Correlation knob in [0, 1]")->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output CSV")->required();

  // share
  auto* share_cmd = app.add_subcommand("share", "Split the data into per-party share files");
  std::string share_data, share_out;
  std::uint64_t share_seed = 1;
  int share_frac = kDefaultFracBits;
  share_cmd->add_option("--data", share_data, "Processed dataset CSV")->required();
  share_cmd->add_option("--seed", share_seed, "Seed for the users' share randomness")->capture_default_str();
  share_cmd->add_option("--frac-bits", share_frac)->capture_default_str()->check(CLI::Range(1, 30));
  share_cmd->add_option("--out-dir", share_out, "Output directory")->required();

  // dealer
  auto* dealer_cmd = app.add_subcommand("dealer", "Deal correlated randomness for one run");
  std::string dealer_data, dealer_stage = "train", dealer_out;
  std::uint64_t dealer_seed = 1;
  TrainFlags dealer_tf;
  dealer_cmd->add_option("--data", dealer_data, "Processed dataset CSV (for shapes)")->required();
  dealer_cmd->add_option("--stage", dealer_stage)
      ->capture_default_str()->check(CLI::IsMember({"train", "certify", "verify"}));
  dealer_cmd->add_option("--seed", dealer_seed)->capture_default_str();
  dealer_cmd->add_option("--out-dir", dealer_out)->required();
  dealer_tf.add_to(dealer_cmd, false);

  // train
  auto* train_cmd = app.add_subcommand("train", "Two-party fair training");
  PartyFlags train_pf;
  TrainFlags train_tf;
  std::string train_shares, train_triples, train_model = "model";
  train_pf.add_to(train_cmd);
  train_tf.add_to(train_cmd);
  train_cmd->add_option("--seed", train_tf.cfg.seed, "Minibatch order seed")->capture_default_str();
  train_cmd->add_flag("--deterministic-trunc", train_tf.deterministic,
                      "Exact rounding hook (one extra exchange per truncation batch)");
  train_cmd->add_option("--shares", train_shares, "This party's share directory")->required();
  train_cmd->add_option("--triples", train_triples, "This party's pool directory")->required();
  train_cmd->add_option("--model-out", train_model, "Model path prefix (modeler)")->capture_default_str();

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "Two-party fairness certification");
  PartyFlags cert_pf;
  TrainFlags cert_tf;
  std::string cert_shares, cert_triples, cert_model, cert_commit;
  std::uint64_t cert_session = 1, cert_seed = 1;
  cert_pf.add_to(certify_cmd);
  cert_tf.add_to(certify_cmd);
  certify_cmd->add_flag("--deterministic-trunc", cert_tf.deterministic);
  certify_cmd->add_option("--shares", cert_shares)->required();
  certify_cmd->add_option("--triples", cert_triples)->required();
  certify_cmd->add_option("--model", cert_model, "Model .fpsh (modeler)");
  certify_cmd->add_option("--commitment", cert_commit, "Where to store this party's half")->required();
  certify_cmd->add_option("--session-id", cert_session)->capture_default_str();
  certify_cmd->add_option("--seed", cert_seed)->capture_default_str();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Two-party decision verification");
  PartyFlags ver_pf;
  int ver_frac = kDefaultFracBits;
  std::string ver_triples, ver_model, ver_commit, ver_data, ver_split = "test";
  std::size_t ver_row = 0;
  std::optional<int> ver_claim;
  std::uint64_t ver_seed = 1;
  ver_pf.add_to(verify_cmd);
  verify_cmd->add_option("--frac-bits", ver_frac)->capture_default_str()->check(CLI::Range(1, 30));
  verify_cmd->add_option("--triples", ver_triples)->required();
  verify_cmd->add_option("--commitment", ver_commit, "This party's certified half")->required();
  verify_cmd->add_option("--model", ver_model, "Model .fpsh to present (modeler)");
  verify_cmd->add_option("--data", ver_data, "Dataset holding the user's features (regulator)");
  verify_cmd->add_option("--split", ver_split)->capture_default_str()->check(CLI::IsMember({"train", "test"}));
  verify_cmd->add_option("--row", ver_row)->capture_default_str();
  verify_cmd->add_option("--claim", ver_claim, "Decision the user received (0 or 1)")->check(CLI::Range(0, 1));
  verify_cmd->add_option("--seed", ver_seed)->capture_default_str();

  // baseline
  auto* base_cmd = app.add_subcommand("baseline", "Plaintext reference training");
  std::string base_data, base_method = "lagrangian", base_arith = "float", base_out;
  TrainFlags base_tf;
  base_cmd->add_option("--data", base_data)->required();
  base_cmd->add_option("--method", base_method)
      ->capture_default_str()->check(CLI::IsMember({"lagrangian", "projected", "iplb", "unconstrained"}));
  base_cmd->add_option("--arithmetic", base_arith)
      ->capture_default_str()->check(CLI::IsMember({"float", "fixed"}));
  base_cmd->add_option("--seed", base_tf.cfg.seed, "Minibatch order seed")->capture_default_str();
  base_cmd->add_option("--out", base_out, "Write theta, one value per line");
  base_tf.add_to(base_cmd);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Plaintext sweep over the slack grid");
  std::string sweep_data, sweep_out;
  std::vector<std::string> sweep_methods = {"lagrangian", "projected", "iplb", "unconstrained"};
  std::size_t sweep_points = 20;
  double sweep_lo = 1e-4, sweep_hi = 1.0;
  unsigned sweep_threads = 1;
  TrainFlags sweep_tf;
  sweep_cmd->add_option("--data", sweep_data)->required();
  sweep_cmd->add_option("--methods", sweep_methods)->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--points", sweep_points)->capture_default_str();
  sweep_cmd->add_option("--lo", sweep_lo)->capture_default_str();
  sweep_cmd->add_option("--hi", sweep_hi)->capture_default_str();
  sweep_cmd->add_option("--threads", sweep_threads)->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_tf.cfg.seed, "Minibatch order seed")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "CSV path (stdout if omitted)");
  sweep_tf.add_to(sweep_cmd, false);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Online timing of training and certification");
  std::size_t bench_n = 4096;
  double bench_rho = 0.8;
  std::uint64_t bench_seed = 1;
  TrainFlags bench_tf;
  bench_cmd->add_option("--n", bench_n)->capture_default_str();
  bench_cmd->add_option("--rho", bench_rho)->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed)->capture_default_str();
  bench_cmd->add_flag("--deterministic-trunc", bench_tf.deterministic);
  bench_tf.add_to(bench_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(Exit::kUsage);
  }

  argv.insert(argv.begin(), "fairmpc");
  try {
    if (*synth_cmd) return cmd_synth(synth_n, synth_rho, synth_seed, synth_out, argv);
    if (*share_cmd) return cmd_share(share_data, share_seed, share_frac, share_out, argv);
    if (*dealer_cmd) return cmd_dealer(dealer_data, dealer_stage, dealer_seed, dealer_tf, dealer_out, argv);
    if (*train_cmd) return cmd_train(train_pf, train_tf, train_shares, train_triples, train_model, argv);
    if (*certify_cmd) {
      return cmd_certify(cert_pf, cert_tf, cert_shares, cert_triples, cert_model, cert_commit,
                         cert_session, cert_seed, argv);
    }
    if (*verify_cmd) {
      return cmd_verify(ver_pf, ver_frac, ver_triples, ver_model, ver_commit, ver_data, ver_split,
                        ver_row, ver_claim, ver_seed, argv);
    }
    if (*base_cmd) return cmd_baseline(base_data, base_method, base_arith, base_tf, base_out, argv);
    if (*sweep_cmd) {
      return cmd_sweep(sweep_data, sweep_methods, sweep_points, sweep_lo, sweep_hi, sweep_threads,
                       sweep_tf, sweep_out, argv);
    }
    if (*bench_cmd) return cmd_bench(bench_n, bench_rho, bench_seed, bench_tf, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(exit_for(e.code()));
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(Exit::kIo);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(Exit::kOther);
  }
  return static_cast<int>(Exit::kUsage);
}

}  // namespace fairmpc::cli
