// Copyright 2026 The lsgrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsgrec/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "lsgrec/evaluation.hpp"
#include "lsgrec/format.hpp"
#include "lsgrec/params.hpp"

namespace lsgrec::cli {

namespace fs = std::filesystem;

namespace {

const char* CommandName(Command c) {
  switch (c) {
    case Command::kEvaluate:
      return "evaluate";
    case Command::kSearch:
      return "search";
    case Command::kInspect:
      return "inspect";
  }
  return "?";
}

ColumnMap ParseColumns(const std::string& text) {
  std::vector<int> cols;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      cols.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--columns expects comma-separated column indices, got '" + text + "'");
    }
  }
  if (cols.size() != 3 && cols.size() != 4) {
    throw ConfigError("--columns expects user,item,timestamp[,rating] indices");
  }
  return {cols[0], cols[1], cols[2], cols.size() == 4 ? cols[3] : -1};
}

Timestamp ParseTimeFlag(const std::string& flag, const std::string& text) {
  const auto t = ParseTimestamp(text);
  if (!t) throw ConfigError(flag + " is not a timestamp or ISO-8601 date: '" + text + "'");
  return *t;
}

Timestamp DaysToSeconds(double days) {
  if (!(days > 0.0)) throw ConfigError("session durations must be positive");
  return static_cast<Timestamp>(std::llround(days * kSecondsPerDay));
}

}  // namespace

RunConfig ParseArgs(int argc, const char* const* argv, std::string* help) {
  CLI::App app{"Temporal graph recommenders (BIP, STG, LSG) with time-windowed evaluation",
               "lsgrec"};
  app.set_config("--config", "", "Flat key=value configuration file; flags override it");
  app.require_subcommand(1, 1);
  app.fallthrough();
  auto* evaluate = app.add_subcommand("evaluate", "Run the windowed protocol for one setting");
  auto* search = app.add_subcommand("search", "Randomized search over a parameter grid");
  auto* inspect = app.add_subcommand("inspect", "Print stream and graph statistics");

  RunConfig cfg;
  std::string format;
  std::string columns;
  std::string start;
  std::string end;
  std::string graph;
  std::string objective = "f1";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> delta_days;
  std::optional<double> eta_s;
  std::vector<double> grid_delta;
  std::vector<double> grid_beta;
  std::vector<double> grid_eta;
  std::vector<double> grid_alpha;
  std::string export_graph;

  app.add_option("--input", cfg.input, "Interaction file (user item timestamp [rating])");
  app.add_option("--format", format, "tsv or csv (default: from the file extension)")
      ->check(CLI::IsMember({"tsv", "csv"}));
  app.add_option("--columns", columns, "0-based indices user,item,timestamp[,rating]");
  app.add_option("--start", start, "Observation start (epoch seconds or ISO date)");
  app.add_option("--end", end, "Observation end (epoch seconds or ISO date)");
  app.add_option("--sigma-u", cfg.filter.sigma_u, "Minimum events per user")->capture_default_str();
  app.add_option("--sigma-i", cfg.filter.sigma_i, "Minimum events per item")->capture_default_str();
  app.add_option("--rating-floor", cfg.filter.rating_floor, "Positive-filter rating floor")
      ->capture_default_str();
  app.add_flag("--positive-filter", cfg.positive_filter,
               "Keep ratings >= floor and >= the user's mean rating");
  app.add_option("--windows", cfg.windows, "Number of equal time windows")->capture_default_str();
  app.add_option("--n", cfg.n, "Recommendation list length")->capture_default_str();
  app.add_option("--graph", graph, "bip, stg or lsg")->check(CLI::IsMember({"bip", "stg", "lsg"}));
  app.add_option("--alpha", alpha, "Damping factor");
  app.add_option("--beta", beta, "STG long-term preference");
  app.add_option("--delta", delta_days, "STG session duration in days");
  app.add_option("--eta-s", eta_s, "Weight of edges towards the past");
  app.add_option("--grid-delta", grid_delta, "Search grid for delta (days)")->delimiter(',');
  app.add_option("--grid-beta", grid_beta, "Search grid for beta")->delimiter(',');
  app.add_option("--grid-eta-s", grid_eta, "Search grid for eta_s")->delimiter(',');
  app.add_option("--grid-alpha", grid_alpha, "Search grid for alpha")->delimiter(',');
  app.add_option("--count", cfg.count, "Number of sampled settings")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  app.add_option("--objective", objective, "Leaderboard order: f1, hr or map")
      ->check(CLI::IsMember({"f1", "hr", "map"}))
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "PageRank L1 tolerance")->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter, "PageRank iteration cap")->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "Directory for reports")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads")
      ->envname("LSGREC_WORKERS")
      ->capture_default_str();
  app.add_option("--export-graph", export_graph, "inspect: write the --graph edge list here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (help) *help = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (evaluate->parsed()) cfg.command = Command::kEvaluate;
  if (search->parsed()) cfg.command = Command::kSearch;
  if (inspect->parsed()) cfg.command = Command::kInspect;

  if (cfg.input.empty()) throw ConfigError("--input is required");
  if (!format.empty()) cfg.format = format == "csv" ? InputFormat::kCsv : InputFormat::kTsv;
  if (!columns.empty()) cfg.columns = ParseColumns(columns);
  if (start.empty() != end.empty()) throw ConfigError("--start and --end must be given together");
  if (!start.empty()) {
    cfg.start = ParseTimeFlag("--start", start);
    cfg.end = ParseTimeFlag("--end", end);
    if (*cfg.start > *cfg.end) throw ConfigError("--start is after --end");
  }
  if (cfg.filter.sigma_u < 0 || cfg.filter.sigma_i < 0) {
    throw ConfigError("--sigma-u and --sigma-i must be non-negative");
  }
  if (cfg.windows < 2) throw ConfigError("--windows must be at least 2");
  if (cfg.n < 1) throw ConfigError("--n must be at least 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (cfg.max_iter < 1) throw ConfigError("--max-iter must be at least 1");
  if (cfg.workers < 1) throw ConfigError("--workers must be at least 1");
  cfg.objective = *ParseObjective(objective);
  if (!graph.empty()) cfg.graph = ParseFlavor(graph);
  if (!export_graph.empty()) cfg.export_graph = export_graph;

  const bool single = alpha || beta || delta_days || eta_s;
  const bool gridded =
      !grid_delta.empty() || !grid_beta.empty() || !grid_eta.empty() || !grid_alpha.empty();

  if (cfg.command == Command::kEvaluate) {
    if (!cfg.graph) throw ConfigError("evaluate requires --graph");
    if (gridded) throw ConfigError("evaluate takes a single setting, not --grid-* values");
    ParamSetting s;
    if (!alpha) throw ConfigError("evaluate requires --alpha");
    s.alpha = *alpha;
    s.n = cfg.n;
    if (*cfg.graph == GraphFlavor::kStg) {
      if (!delta_days) throw ConfigError("--graph stg requires --delta");
      if (!beta) throw ConfigError("--graph stg requires --beta");
      s.delta = DaysToSeconds(*delta_days);
      s.beta = beta;
    }
    if (*cfg.graph != GraphFlavor::kBip) {
      if (!eta_s) throw ConfigError(std::string("--graph ") + graph + " requires --eta-s");
      s.eta_s = eta_s;
    }
    try {
      ValidateSetting(s, *cfg.graph);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    cfg.setting = s;
  } else if (cfg.command == Command::kSearch) {
    if (!cfg.graph) throw ConfigError("search requires --graph");
    if (single) throw ConfigError("search takes a grid (--grid-*), not a single setting");
    if (cfg.count < 1) throw ConfigError("--count must be at least 1");
    ParamGrid g = ParamGrid::Defaults();
    if (!grid_delta.empty()) {
      g.deltas.clear();
      for (const double d : grid_delta) g.deltas.push_back(DaysToSeconds(d));
    }
    if (!grid_beta.empty()) g.betas = grid_beta;
    if (!grid_eta.empty()) g.eta_s = grid_eta;
    if (!grid_alpha.empty()) g.alphas = grid_alpha;
    try {
      g.Validate(*cfg.graph);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    cfg.grid = g;
  } else {
    if (cfg.export_graph && !cfg.graph) throw ConfigError("--export-graph requires --graph");
    ParamSetting s;
    s.n = cfg.n;
    s.alpha = alpha.value_or(0.15);
    s.delta = DaysToSeconds(delta_days.value_or(30.0));
    s.beta = beta.value_or(0.5);
    s.eta_s = eta_s.value_or(1.0);
    cfg.setting = s;
  }
  return cfg;
}

nlohmann::json ConfigToJson(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = CommandName(c.command);
  j["input"] = c.input;
  const InputFormat fmt = c.format.value_or(
      fs::path(c.input).extension() == ".csv" ? InputFormat::kCsv : InputFormat::kTsv);
  j["format"] = fmt == InputFormat::kCsv ? "csv" : "tsv";
  if (c.columns) {
    j["columns"] = {{"user", c.columns->user},
                    {"item", c.columns->item},
                    {"timestamp", c.columns->timestamp},
                    {"rating", c.columns->rating}};
  } else {
    j["columns"] = "header or positional";
  }
  j["start"] = c.start ? nlohmann::json(*c.start) : nlohmann::json(nullptr);
  j["end"] = c.end ? nlohmann::json(*c.end) : nlohmann::json(nullptr);
  j["sigma_u"] = c.filter.sigma_u;
  j["sigma_i"] = c.filter.sigma_i;
  j["rating_floor"] = c.filter.rating_floor;
  j["positive_filter"] = c.positive_filter;
  j["windows"] = c.windows;
  j["n"] = c.n;
  j["graph"] = c.graph ? nlohmann::json(FlavorName(*c.graph)) : nlohmann::json(nullptr);
  if (c.setting && c.graph) j["setting"] = SettingToJson(*c.setting, *c.graph);
  if (c.grid) {
    std::vector<double> days;
    for (const auto d : c.grid->deltas) days.push_back(static_cast<double>(d) / kSecondsPerDay);
    j["grid"] = {{"delta_days", days},
                 {"beta", c.grid->betas},
                 {"eta_s", c.grid->eta_s},
                 {"alpha", c.grid->alphas}};
    j["count"] = c.count;
    j["seed"] = c.seed;
    j["objective"] = ObjectiveName(c.objective);
  }
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["workers"] = c.workers;
  return j;
}

LinkStream LoadStream(const RunConfig& config) {
  if (!fs::exists(config.input)) throw std::runtime_error("input file not found: " + config.input);
  ParseOptions options;
  options.format = config.format.value_or(
      fs::path(config.input).extension() == ".csv" ? InputFormat::kCsv : InputFormat::kTsv);
  options.columns = config.columns;
  if (config.start) options.span = TimeSpan{*config.start, *config.end};
  LinkStream stream = ReadLinkStream(config.input, options);
  if (config.positive_filter) stream = FilterPositive(stream, config.filter.rating_floor);
  return FilterMinActivity(stream, config.filter);
}

namespace {

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

fs::path PrepareOutDir(const RunConfig& config) {
  fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  return dir;
}

std::string Percent(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << 100.0 * v << '%';
  return s.str();
}

}  // namespace

int CmdEvaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const LinkStream stream = LoadStream(config);
  ProtocolOptions options;
  options.n_windows = config.windows;
  options.pagerank = {config.tol, config.max_iter};
  options.workers = config.workers;
  const auto report = RunProtocol(stream, *config.graph, *config.setting, options);

  auto json = ReportToJson(report);
  json["config"] = ConfigToJson(config);
  json["stream"] = {{"events", stream.size()},
                    {"distinct_pairs", stream.distinct_pairs()},
                    {"users", stream.users().size()},
                    {"items", stream.items().size()}};
  std::ostringstream csv;
  WriteReportCsv(report, csv);
  const auto dir = PrepareOutDir(config);
  WriteFile(dir / "report.json", json.dump(2) + "\n");
  WriteFile(dir / "report.csv", csv.str());

  if (!report.averaged) {
    err << "nothing evaluated: no window had a user with new items\n";
    return kNothingEvaluated;
  }
  out << FlavorName(*config.graph) << ' ' << Describe(*config.setting, *config.graph)
      << " TA F1=" << Percent(report.averaged->f1) << " HR=" << Percent(report.averaged->hr)
      << " MAP=" << Percent(report.averaged->map) << '\n';
  return kOk;
}

int CmdSearch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const LinkStream stream = LoadStream(config);
  SearchOptions options;
  options.objective = config.objective;
  options.n = config.n;
  options.protocol.n_windows = config.windows;
  options.protocol.pagerank = {config.tol, config.max_iter};
  options.protocol.workers = config.workers;
  options.workers = config.workers;
  const auto result = Search(stream, *config.graph, *config.grid, config.count, config.seed, options);
  const auto& board = result.leaderboard;

  const auto dir = PrepareOutDir(config);
  std::ostringstream csv;
  WriteLeaderboardCsv(board, csv);
  WriteFile(dir / "leaderboard.csv", csv.str());

  if (result.exhausted) {
    err << "notice: the " << FlavorName(*config.graph) << " grid has only " << result.sampled
        << " combinations; all were evaluated\n";
  }
  for (const auto& f : board.failed) {
    err << "setting " << f.sample_index << " failed: " << f.status << '\n';
  }
  if (board.entries.empty()) {
    err << "nothing evaluated: every setting failed\n";
    return kNothingEvaluated;
  }
  for (const Objective o : {Objective::kF1, Objective::kHitRatio, Objective::kMap}) {
    const auto& best = board.best(o);
    nlohmann::json j;
    j["objective"] = ObjectiveName(o);
    j["flavor"] = FlavorName(*config.graph);
    j["sample_index"] = best.sample_index;
    j["setting"] = SettingToJson(best.setting, *config.graph);
    j["time_averaged"] = {{"f1", best.metrics->f1}, {"hr", best.metrics->hr}, {"map", best.metrics->map}};
    j["sampled"] = result.sampled;
    j["failed"] = board.failed.size();
    j["exhausted"] = result.exhausted;
    j["config"] = ConfigToJson(config);
    WriteFile(dir / (std::string("best_") + ObjectiveName(o) + ".json"), j.dump(2) + "\n");
    out << "best " << ObjectiveName(o) << ": " << Describe(best.setting, *config.graph)
        << " -> " << Percent(ObjectiveValue(*best.metrics, o)) << '\n';
  }
  out << "evaluated " << board.entries.size() << " of " << result.sampled << " settings\n";
  return kOk;
}

int CmdInspect(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const LinkStream stream = LoadStream(config);
  if (stream.empty()) {
    out << "events: 0 (every event was filtered out)\n";
    return kOk;
  }
  const double users = static_cast<double>(stream.users().size());
  const double items = static_cast<double>(stream.items().size());
  const double pairs = static_cast<double>(stream.distinct_pairs());
  out << "events: " << stream.size() << '\n'
      << "user-item pairs: " << stream.distinct_pairs() << '\n'
      << "users: " << stream.users().size() << '\n'
      << "items: " << stream.items().size() << '\n'
      << "sparsity: " << Percent(1.0 - pairs / (users * items)) << '\n'
      << "span: " << FormatTimestamp(stream.span().begin) << " .. "
      << FormatTimestamp(stream.span().end) << " ("
      << FormatReal(static_cast<double>(stream.span().length()) / kSecondsPerDay) << " days)\n";

  const auto& s = *config.setting;
  const auto bip = BuildBip(stream);
  out << "bip: nodes=" << bip.num_nodes() << " edges=" << bip.num_edges() << '\n';
  const auto stg = BuildStg(stream, *s.delta, *s.eta_s);
  std::size_t sessions = 0;
  for (const auto& id : stg.nodes()) sessions += id.kind == NodeKind::kSession ? 1 : 0;
  out << "stg(delta=" << FormatReal(static_cast<double>(*s.delta) / kSecondsPerDay)
      << "d, eta_s=" << FormatReal(*s.eta_s) << "): nodes=" << stg.num_nodes()
      << " sessions=" << sessions << " edges=" << stg.num_edges() << '\n';
  const auto lsg = BuildLsg(stream, *s.eta_s);
  out << "lsg(eta_s=" << FormatReal(*s.eta_s) << "): nodes=" << lsg.num_nodes()
      << " edges=" << lsg.num_edges() << '\n';

  if (config.export_graph) {
    const RecGraph& g = *config.graph == GraphFlavor::kBip   ? bip
                        : *config.graph == GraphFlavor::kStg ? stg
                                                             : lsg;
    std::ostringstream edges;
    g.WriteEdgeList(edges);
    WriteFile(*config.export_graph, edges.str());
  }
  return kOk;
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    std::string help;
    config = ParseArgs(argc, argv, &help);
    if (!help.empty()) {
      out << help;
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    switch (config.command) {
      case Command::kEvaluate:
        return CmdEvaluate(config, out, err);
      case Command::kSearch:
        return CmdSearch(config, out, err);
      case Command::kInspect:
        return CmdInspect(config, out, err);
    }
  } catch (const NothingEvaluatedError& e) {
    err << e.what() << '\n';
    return kNothingEvaluated;
  } catch (const ParseError& e) {
    err << "input error: " << config.input << ": " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

}  // namespace lsgrec::cli
