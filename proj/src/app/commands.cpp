#include "footfall/app/commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "footfall/analytics/rollup.hpp"
#include "footfall/ingest/wire.hpp"
#include "footfall/service/http_service.hpp"

namespace footfall::app {
namespace {

void report(std::ostream& err, const Error& e) { err << "error: " << e.what() << '\n'; }

void print_recovery(const service::Pipeline& pipeline, std::ostream& err) {
  for (const auto& w : pipeline.recovery().warnings) err << "warning: " << w << '\n';
}

void print_record(std::ostream& out, const analytics::DailyRecord& r) {
  out << r.date.to_string() << " people_counted=" << r.people_counted << " traffic=" << r.traffic
      << " unpaired=" << r.unpaired << " transactions=";
  if (r.transactions) out << *r.transactions;
  out << " conversion_rate=";
  if (r.conversion_rate) out << r.conversion_rate->format_2dp();
  out << '\n';
}

std::optional<std::int64_t> parse_count(const std::string& text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kInvalidField:
    case ErrorCode::kOutOfOrderFrame:
    case ErrorCode::kInvalidCount:
    case ErrorCode::kBadRange:
    case ErrorCode::kInvalidScenario:
    case ErrorCode::kUnsatisfiable:
      return kExitBadInput;
    case ErrorCode::kStorageFailure:
    case ErrorCode::kCorruptEntry:
      return kExitStorage;
    case ErrorCode::kUnknownDate:
      return kExitUnknownDate;
    default:
      return kExitUsage;
  }
}

service::Config resolve_config(const ConfigOverrides& flags, const service::EnvLookup& env) {
  service::Config config;
  if (flags.config_file) {
    config = service::load_config_file(*flags.config_file, config);
  } else if (auto path = env("FOOTFALL_CONFIG")) {
    config = service::load_config_file(*path, config);
  }
  config = service::apply_env(config, env);
  if (flags.data_dir) config.data_dir = *flags.data_dir;
  if (flags.timezone) config.timezone = *flags.timezone;
  if (flags.bind) config.bind = *flags.bind;
  if (flags.strict) config.strict = *flags.strict;
  config.validate();
  return config;
}

int cmd_replay(const service::Config& config, std::istream& input, std::ostream& out, std::ostream& err) {
  try {
    service::Pipeline pipeline(config);
    print_recovery(pipeline, err);
    pipeline.start();
    ingest::FrameReader reader(input, config.strict ? ingest::ParseMode::kStrict : ingest::ParseMode::kLenient);
    try {
      while (auto frame = reader.next()) pipeline.process(*frame);
    } catch (const Error& e) {
      report(err, e);
      return exit_code_for(e.code());
    }
    pipeline.finish();

    const service::RunTotals totals = pipeline.totals();
    const analytics::TrafficSplit split = analytics::traffic_from_count(totals.people_counted);
    out << "frames " << totals.frames << '\n'
        << "people_counted " << totals.people_counted << '\n'
        << "traffic " << split.traffic << '\n'
        << "unpaired " << split.unpaired << '\n';
    return kExitOk;
  } catch (const Error& e) {
    report(err, e);
    return exit_code_for(e.code());
  }
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const simulate::Scenario scenario = simulate::random_scenario(options.seed, options.people, options.params);
    const simulate::GeneratedStream generated = simulate::generate(scenario);
    simulate::write_files(generated, options.out);
    out << "frames " << generated.frames.size() << '\n'
        << "persons " << generated.truth.person_count << '\n'
        << "stream " << options.out.string() << '\n'
        << "truth " << simulate::truth_path_for(options.out).string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    report(err, e);
    return exit_code_for(e.code());
  }
}

int cmd_transactions(const service::Config& config, const std::string& date, const std::string& count,
                     std::ostream& out, std::ostream& err, service::Clock clock) {
  const auto parsed_date = analytics::parse_date(date);
  if (!parsed_date) {
    err << "error: bad date '" << date << "', expected YYYY-MM-DD\n";
    return kExitBadInput;
  }
  const auto parsed_count = parse_count(count);
  if (!parsed_count || *parsed_count < 0) {
    err << "error: count must be a non-negative integer, got '" << count << "'\n";
    return kExitBadInput;
  }
  try {
    service::Pipeline pipeline(config, std::move(clock));
    print_recovery(pipeline, err);
    print_record(out, pipeline.set_transactions(*parsed_date, *parsed_count));
    return kExitOk;
  } catch (const Error& e) {
    report(err, e);
    return exit_code_for(e.code());
  }
}

int cmd_export(const service::Config& config, const std::optional<std::filesystem::path>& out_path,
               std::ostream& out, std::ostream& err) {
  try {
    service::Pipeline pipeline(config);
    print_recovery(pipeline, err);
    const std::string csv = pipeline.export_csv();
    if (!out_path) {
      out << csv;
      return kExitOk;
    }
    std::ofstream file(*out_path, std::ios::binary | std::ios::trunc);
    file << csv;
    file.flush();
    if (!file) {
      err << "error: cannot write " << out_path->string() << '\n';
      return kExitStorage;
    }
    return kExitOk;
  } catch (const Error& e) {
    report(err, e);
    return exit_code_for(e.code());
  }
}

int cmd_serve(const service::Config& config, const std::optional<std::string>& input, std::ostream& out,
              std::ostream& err) {
  // Signals are taken synchronously by a watcher thread; block them before
  // any other thread starts so they inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    service::Pipeline pipeline(config);
    print_recovery(pipeline, err);
    pipeline.start();
    service::HttpService http(pipeline);
    const service::BindAddress addr = service::parse_bind(config.bind);
    const int port = http.start(addr.host, addr.port);
    out << "listening on " << addr.host << ':' << port << std::endl;

    std::thread ingest;
    if (input) {
      ingest = std::thread([&pipeline, &err, path = *input, strict = config.strict] {
        std::ifstream file;
        std::istream* in = &std::cin;
        if (path != "-") {
          file.open(path);
          if (!file) {
            err << "error: cannot read " << path << '\n';
            return;
          }
          in = &file;
        }
        ingest::FrameReader reader(*in, strict ? ingest::ParseMode::kStrict : ingest::ParseMode::kLenient);
        try {
          while (auto frame = reader.next()) pipeline.process(*frame);
          pipeline.finish();
        } catch (const Error& e) {
          report(err, e);
        }
      });
    }

    int sig = 0;
    sigwait(&signals, &sig);
    http.stop();
    // A blocked stdin reader cannot be interrupted portably; let it die with the process.
    if (ingest.joinable()) ingest.detach();
    return kExitOk;
  } catch (const Error& e) {
    report(err, e);
    return exit_code_for(e.code());
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge people counting and retail conversion analytics", "footfall"};
  app.require_subcommand(1);

  ConfigOverrides flags;
  std::string config_file, data_dir, timezone, bind;
  bool lenient = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON config file");
    sub->add_option("--data-dir", data_dir, "Directory holding the event log");
    sub->add_option("--timezone", timezone, "IANA timezone for day boundaries");
  };

  auto* serve = app.add_subcommand("serve", "Run the HTTP API (and optionally ingest a stream)");
  add_common(serve);
  std::string serve_input;
  serve->add_option("--input", serve_input, "Detection stream file, or - for stdin");
  serve->add_option("--bind", bind, "host:port to listen on");
  serve->add_flag("--lenient", lenient, "Ignore unknown fields in detection records");

  auto* replay = app.add_subcommand("replay", "Count people in a recorded detection stream");
  add_common(replay);
  std::string replay_input = "-";
  replay->add_option("--input", replay_input, "Detection stream file, or - for stdin");
  replay->add_flag("--lenient", lenient, "Ignore unknown fields in detection records");

  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic stream with ground truth");
  SimulateOptions sim;
  std::string sim_out;
  simulate_cmd->add_option("--seed", sim.seed, "PRNG seed")->required();
  simulate_cmd->add_option("--people", sim.people, "Number of crossings to place")->required();
  simulate_cmd->add_option("--out", sim_out, "Stream output path (truth goes to <stem>.truth)")->required();
  simulate_cmd->add_option("--start-ms", sim.params.start_ms, "Timestamp of frame 0, epoch ms UTC");
  simulate_cmd->add_option("--frame-rate", sim.params.frame_rate, "Frames per second");
  simulate_cmd->add_option("--stream-id", sim.params.stream_id, "stream_id of emitted frames");
  simulate_cmd->add_option("--jitter", sim.params.noise.jitter_sigma, "Center jitter sigma");
  simulate_cmd->add_option("--dropout", sim.params.noise.dropout_prob, "Per-frame dropout probability");
  simulate_cmd->add_option("--max-dropouts", sim.params.noise.max_consecutive_dropouts,
                           "Cap on consecutive dropouts per person");

  auto* tx = app.add_subcommand("transactions", "Enter the transaction count for a day");
  add_common(tx);
  std::string tx_date, tx_count;
  tx->add_option("--date", tx_date, "YYYY-MM-DD")->required();
  tx->add_option("--count", tx_count, "Non-negative integer")->required();

  auto* exp = app.add_subcommand("export", "Write the daily table as CSV");
  add_common(exp);
  std::string export_out;
  exp->add_option("--out", export_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!config_file.empty()) flags.config_file = config_file;
  if (!data_dir.empty()) flags.data_dir = data_dir;
  if (!timezone.empty()) flags.timezone = timezone;
  if (!bind.empty()) flags.bind = bind;
  if (lenient) flags.strict = false;

  if (*simulate_cmd) {
    if (sim.people < 0) {
      err << "error: --people must be >= 0\n";
      return kExitBadInput;
    }
    sim.out = sim_out;
    return cmd_simulate(sim, out, err);
  }

  service::Config config;
  try {
    config = resolve_config(flags);
  } catch (const Error& e) {
    report(err, e);
    return exit_code_for(e.code());
  }

  if (*replay) {
    if (replay_input == "-") return cmd_replay(config, std::cin, out, err);
    std::ifstream file(replay_input);
    if (!file) {
      err << "error: cannot read " << replay_input << '\n';
      return kExitBadInput;
    }
    return cmd_replay(config, file, out, err);
  }
  if (*tx) return cmd_transactions(config, tx_date, tx_count, out, err);
  if (*exp) return cmd_export(config, export_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(export_out), out, err);
  return cmd_serve(config, serve_input.empty() ? std::nullopt : std::optional<std::string>(serve_input), out, err);
}

}  // namespace footfall::app
