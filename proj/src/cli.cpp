#include "fuelcast/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "fuelcast/chart.hpp"
#include "fuelcast/errors.hpp"
#include "fuelcast/features.hpp"
#include "fuelcast/forecast.hpp"
#include "fuelcast/learn.hpp"
#include "fuelcast/model_io.hpp"
#include "fuelcast/panel.hpp"
#include "fuelcast/revenue.hpp"
#include "fuelcast/synth.hpp"

namespace fuelcast::cli {

namespace fs = std::filesystem;

namespace {

constexpr KeySpec kKeys[] = {
    {"out", "out", "output directory; inputs default to files under it"},
    {"panel", "", "fuel panel CSV (default OUT/data/panel.csv)"},
    {"tax", "", "tax schedule CSV (default OUT/data/tax.csv)"},
    {"population", "", "population CSV (default OUT/data/population.csv)"},
    {"model", "", "model JSON (default OUT/models/model.json)"},
    {"projection", "", "projection CSV (default OUT/reports/projection.csv)"},
    {"include_dc", "false", "model DC alongside the 50 states"},
    {"target", "gasoline", "target fuel: gasoline or special_fuel"},
    {"seed", "42", "seed for the split, the forest and the MLP"},
    {"split_fraction", "0.7", "training fraction"},
    {"split_mode", "random", "random or chronological"},
    {"learner", "forest", "learner for train: linear, tree, forest or mlp"},
    {"linear_lambda", "0.000001", "ridge penalty"},
    {"tree_max_depth", "12", "decision tree depth limit (0 = unlimited)"},
    {"tree_min_leaf", "5", "decision tree minimum leaf size"},
    {"tree_min_split", "10", "decision tree minimum node size to split"},
    {"forest_trees", "200", "number of trees"},
    {"forest_m_features", "0", "features tried per split (0 = ceil(p/3))"},
    {"forest_bootstrap", "true", "bootstrap resampling"},
    {"forest_max_depth", "12", "forest tree depth limit (0 = unlimited)"},
    {"forest_min_leaf", "5", "forest minimum leaf size"},
    {"forest_min_split", "10", "forest minimum node size to split"},
    {"forest_workers", "1", "threads for forest fitting (0 = all cores)"},
    {"mlp_hidden", "64", "hidden layer sizes, comma-separated (empty = linear network)"},
    {"mlp_epochs", "200", "training epochs"},
    {"mlp_learning_rate", "0.001", "gradient descent step size"},
    {"mlp_batch_size", "64", "mini-batch size"},
    {"horizon", "2024-12", "last forecast month, YYYY-MM"},
    {"clock_policy", "cap", "pandemic clock past the data: cap, cap:K, continue, zero_after:YYYY-MM"},
    {"population_rule", "hold", "population past the last known year: hold or linear"},
    {"tax_override", "", "forecast-period rate changes, e.g. NJ:gasoline+9.3 or CA:special_fuel=40 (comma-separated)"},
    {"baseline_year", "2019", "pre-pandemic reference year"},
    {"gap_series", "blended", "blended (actual where observed) or predicted"},
    {"fuel", "gasoline", "fuel for changes: gasoline, special_fuel or both"},
    {"from", "2019-08", "first month of the change window, YYYY-MM"},
    {"to", "2021-08", "second month of the change window, YYYY-MM"},
    {"range_from", "", "validation range start (default: panel start)"},
    {"range_to", "", "validation range end (default: panel end)"},
    {"states", "", "states to chart, comma-separated (default: all)"},
    {"synth_start", "2012-01", "first synthetic month"},
    {"synth_end", "2021-08", "last synthetic month"},
    {"synth_amplitude", "0.06", "seasonal amplitude"},
    {"synth_growth", "0.01", "annual consumption growth"},
    {"synth_dip", "0.12", "pandemic dip depth"},
    {"synth_halflife", "6", "dip recovery half-life in months"},
    {"synth_onset", "2020-04", "dip onset month"},
    {"synth_noise", "0.03", "relative noise sigma"},
    {"synth_seed", "20200401", "generator seed"},
    {"synth_population_growth", "0.005", "annual population growth"},
};

struct Subcommand {
  std::string_view name;
  std::string_view help;
  std::vector<std::string_view> keys;
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> kSubcommands = {
      {"synth", "write a synthetic panel with matching tax and population files to OUT/data",
       {"out", "include_dc", "synth_start", "synth_end", "synth_amplitude", "synth_growth", "synth_dip",
        "synth_halflife", "synth_onset", "synth_noise", "synth_seed", "synth_population_growth"}},
      {"validate", "report missing and zero-consumption months", {"out", "panel", "range_from", "range_to"}},
      {"changes", "write per-state consumption changes between two months to OUT/reports/changes.csv",
       {"out", "panel", "from", "to", "fuel", "include_dc"}},
      {"train", "fit one learner; writes OUT/models/model.json and OUT/reports/fit.csv",
       {"out", "panel", "tax", "population", "include_dc", "target", "seed", "split_fraction", "split_mode", "learner",
        "linear_lambda", "tree_max_depth", "tree_min_leaf", "tree_min_split", "forest_trees", "forest_m_features",
        "forest_bootstrap", "forest_max_depth", "forest_min_leaf", "forest_min_split", "forest_workers", "mlp_hidden",
        "mlp_epochs", "mlp_learning_rate", "mlp_batch_size"}},
      {"evaluate", "fit all four learners and print the comparison",
       {"out", "panel", "tax", "population", "include_dc", "target", "seed", "split_fraction", "split_mode",
        "linear_lambda", "tree_max_depth", "tree_min_leaf", "tree_min_split", "forest_trees", "forest_m_features",
        "forest_bootstrap", "forest_max_depth", "forest_min_leaf", "forest_min_split", "forest_workers", "mlp_hidden",
        "mlp_epochs", "mlp_learning_rate", "mlp_batch_size"}},
      {"forecast", "project consumption through the horizon; writes OUT/reports/projection.csv",
       {"out", "panel", "tax", "population", "model", "include_dc", "target", "horizon", "clock_policy",
        "population_rule", "tax_override"}},
      {"revenue", "revenue gap against the baseline year; writes OUT/reports/gap.csv and gap_summary.csv",
       {"out", "panel", "tax", "projection", "target", "baseline_year", "gap_series", "tax_override"}},
      {"report", "write OUT/charts/<state>.svg overlaying actual and predicted series",
       {"out", "projection", "target", "states"}},
  };
  return kSubcommands;
}

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : kKeys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::string flag_name(std::string_view key) {
  std::string out = "--";
  for (char c : key) out += c == '_' ? '-' : c;
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << contents;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

MonthKey month_setting(const RunConfig& c, std::string_view key) {
  try {
    return MonthKey::parse(c.get(key));
  } catch (const DataError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

std::size_t depth_setting(const RunConfig& c, std::string_view key) {
  auto v = c.get_size(key);
  return v == 0 ? kUnlimitedDepth : v;
}

// Resolved paths and shared inputs.
struct Context {
  const RunConfig& config;
  fs::path out;

  fs::path input(std::string_view key, const fs::path& fallback) const {
    const auto& v = config.get(key);
    return v.empty() ? out / fallback : fs::path(v);
  }
  std::vector<StateId> modeling() const { return modeling_set(config.get_bool("include_dc")); }
  FeatureSpec spec() const {
    FeatureSpec s;
    s.states = modeling();
    try {
      s.target = parse_fuel_kind(config.get("target"));
    } catch (const DataError& e) {
      throw ConfigError(std::string("target: ") + e.what());
    }
    return s;
  }
  FuelPanel panel() const { return parse_fuel_csv(read_file(input("panel", "data/panel.csv"))); }
  TaxSchedule tax() const {
    auto required = modeling();
    return parse_tax_csv(read_file(input("tax", "data/tax.csv")), required);
  }
  PopulationSeries population() const { return parse_population_csv(read_file(input("population", "data/population.csv"))); }
  Projection projection() const {
    return parse_projection_csv(read_file(input("projection", "reports/projection.csv")), spec().target);
  }
  std::map<StateId, TaxOverride> overrides(const TaxSchedule& tax) const {
    std::map<StateId, TaxOverride> out;
    for (const auto& item : config.get_list("tax_override")) apply_tax_override(out, tax, item);
    return out;
  }
};

LearnConfig learn_config(const RunConfig& c) {
  LearnConfig lc;
  lc.seed = static_cast<std::uint64_t>(c.get_int("seed"));
  lc.linear.lambda = c.get_double("linear_lambda");
  lc.tree = {depth_setting(c, "tree_max_depth"), c.get_size("tree_min_leaf"), c.get_size("tree_min_split")};
  lc.forest.n_trees = c.get_size("forest_trees");
  lc.forest.m_features = c.get_size("forest_m_features");
  lc.forest.bootstrap = c.get_bool("forest_bootstrap");
  lc.forest.max_depth = depth_setting(c, "forest_max_depth");
  lc.forest.min_leaf = c.get_size("forest_min_leaf");
  lc.forest.min_split = c.get_size("forest_min_split");
  lc.forest.workers = c.get_size("forest_workers");
  lc.mlp.hidden.clear();
  for (const auto& h : c.get_list("mlp_hidden")) {
    std::size_t units = 0;
    auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(), units);
    if (ec != std::errc{} || ptr != h.data() + h.size() || units == 0) {
      throw ConfigError("mlp_hidden: expected positive layer sizes, got '" + h + "'");
    }
    lc.mlp.hidden.push_back(units);
  }
  lc.mlp.epochs = c.get_size("mlp_epochs");
  lc.mlp.learning_rate = c.get_double("mlp_learning_rate");
  lc.mlp.batch_size = c.get_size("mlp_batch_size");
  return lc;
}

SplitMode split_mode(const RunConfig& c) {
  const auto& v = c.get("split_mode");
  if (v == "random") return SplitMode::random;
  if (v == "chronological") return SplitMode::chronological;
  throw ConfigError("split_mode must be random or chronological");
}

DesignMatrix load_design(const Context& ctx, const FeatureSpec& spec) {
  return build_design(ctx.panel(), ctx.tax(), ctx.population(), spec);
}

int cmd_synth(const Context& ctx, std::ostream& out) {
  const auto& c = ctx.config;
  SynthConfig sc = default_synth_config();
  if (c.get_bool("include_dc")) {
    sc.states = modeling_set(true);
    auto defaults = default_synth_config();
    sc.base_kgal.clear();
    for (StateId s : sc.states) {
      auto it = std::find(defaults.states.begin(), defaults.states.end(), s);
      sc.base_kgal.push_back(it != defaults.states.end()
                                 ? defaults.base_kgal[static_cast<std::size_t>(it - defaults.states.begin())]
                                 : std::round(static_cast<double>(s.info().population_2020) * 0.03));
    }
  }
  sc.first = month_setting(c, "synth_start");
  sc.last = month_setting(c, "synth_end");
  sc.seasonal_amplitude = c.get_double("synth_amplitude");
  sc.annual_growth = c.get_double("synth_growth");
  sc.dip_depth = c.get_double("synth_dip");
  sc.recovery_halflife = c.get_double("synth_halflife");
  sc.dip_onset = month_setting(c, "synth_onset");
  sc.noise_sigma = c.get_double("synth_noise");
  sc.seed = static_cast<std::uint64_t>(c.get_int("synth_seed"));

  FuelPanel panel = generate(sc);
  PopulationSeries population = synth_population(sc.states, sc.first.year(), sc.last.year(),
                                                 c.get_double("synth_population_growth"));
  write_file(ctx.out / "data/panel.csv", to_csv(panel));
  write_file(ctx.out / "data/tax.csv", to_csv(bundled_tax_schedule()));
  write_file(ctx.out / "data/population.csv", to_csv(population));
  out << "wrote " << panel.size() << " records for " << sc.states.size() << " states to " << (ctx.out / "data").string()
      << "\n";
  return kOk;
}

int cmd_validate(const Context& ctx, std::ostream& out) {
  FuelPanel panel = ctx.panel();
  MonthKey from = ctx.config.get("range_from").empty() ? panel.first_month() : month_setting(ctx.config, "range_from");
  MonthKey to = ctx.config.get("range_to").empty() ? panel.last_month() : month_setting(ctx.config, "range_to");
  auto issues = validate_panel(panel, from, to);
  std::size_t warnings = 0;
  for (const auto& issue : issues) {
    out << (issue.is_warning() ? "warning: " : "issue: ") << issue.describe() << "\n";
    warnings += issue.is_warning() ? 1 : 0;
  }
  out << panel.size() << " records, " << panel.states().size() << " states, " << from.to_string() << " to "
      << to.to_string() << ": " << issues.size() - warnings << " missing months, " << warnings << " warnings\n";
  return kOk;
}

int cmd_changes(const Context& ctx, std::ostream& out) {
  FuelPanel panel = ctx.panel();
  MonthKey from = month_setting(ctx.config, "from");
  MonthKey to = month_setting(ctx.config, "to");
  const auto& fuel = ctx.config.get("fuel");
  std::vector<FuelKind> kinds;
  if (fuel == "both") {
    kinds = {FuelKind::gasoline, FuelKind::special_fuel};
  } else {
    try {
      kinds = {parse_fuel_kind(fuel)};
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
  }
  auto modeling = ctx.modeling();
  std::vector<ChangeEntry> all;
  for (FuelKind kind : kinds) {
    auto part = change_report(panel, from, to, kind, modeling);
    all.insert(all.end(), part.begin(), part.end());
  }
  write_file(ctx.out / "reports/changes.csv", to_csv(all));
  out << "wrote " << all.size() << " change entries (" << from.to_string() << " vs " << to.to_string() << ") to "
      << (ctx.out / "reports/changes.csv").string() << "\n";
  return kOk;
}

void print_reports(std::ostream& out, std::span<const FitReport> reports) {
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %10s %10s %9s\n", "model", "r2_train", "r2_test", "seconds");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-8s %10.4f %10.4f %9.2f\n", std::string(to_string(r.kind)).c_str(), r.r2_train,
                  r.r2_test, r.wall_seconds);
    out << line;
  }
}

int cmd_train(const Context& ctx, std::ostream& out) {
  FeatureSpec spec = ctx.spec();
  LearnerKind kind = parse_learner_kind(ctx.config.get("learner"));
  LearnConfig lc = learn_config(ctx.config);
  SplitMode mode = split_mode(ctx.config);
  DesignMatrix design = load_design(ctx, spec);
  auto sidx = split(design, ctx.config.get_double("split_fraction"), lc.seed, mode);
  auto [model, report] = fit_and_score(kind, design, sidx, lc);
  auto fitted = bind_model(std::move(model), spec, report.hyperparameters);
  write_file(ctx.out / "models/model.json", to_json(fitted));
  std::vector<FitReport> reports{report};
  write_file(ctx.out / "reports/fit.csv", to_csv(reports));
  print_reports(out, reports);
  return kOk;
}

int cmd_evaluate(const Context& ctx, std::ostream& out) {
  FeatureSpec spec = ctx.spec();
  LearnConfig lc = learn_config(ctx.config);
  SplitMode mode = split_mode(ctx.config);
  DesignMatrix design = load_design(ctx, spec);
  auto sidx = split(design, ctx.config.get_double("split_fraction"), lc.seed, mode);
  auto reports = fit_all(design, sidx, lc);
  out << design.rows() << " rows (" << sidx.train.size() << " train / " << sidx.test.size() << " test), "
      << spec.width() << " features\n";
  print_reports(out, reports);
  return kOk;
}

// Everything but the tax overrides, which need the schedule.
Scenario scenario_from(const Context& ctx) {
  Scenario s;
  s.horizon_end = month_setting(ctx.config, "horizon");
  s.clock = parse_clock_policy(ctx.config.get("clock_policy"));
  s.population_rule = parse_population_rule(ctx.config.get("population_rule"));
  return s;
}

int cmd_forecast(const Context& ctx, std::ostream& out) {
  FeatureSpec spec = ctx.spec();
  Scenario scenario = scenario_from(ctx);
  FittedModel fitted = model_from_json(read_file(ctx.input("model", "models/model.json")));
  FuelPanel panel = ctx.panel();
  TaxSchedule tax = ctx.tax();
  scenario.tax_overrides = ctx.overrides(tax);
  Projection projection = project(fitted, panel, tax, ctx.population(), scenario, spec);
  write_file(ctx.out / "reports/projection.csv", to_csv(projection));
  out << "projection " << projection.first_month().to_string() << " to " << projection.last_month().to_string() << ": "
      << projection.count(Source::actual) << " actual, " << projection.count(Source::predicted)
      << " predicted entries (clock " << to_string(scenario.clock) << ")\n";
  return kOk;
}

int cmd_revenue(const Context& ctx, std::ostream& out) {
  FuelPanel panel = ctx.panel();
  TaxSchedule tax = ctx.tax();
  Projection projection = ctx.projection();
  GapOptions options;
  options.baseline_year = static_cast<int>(ctx.config.get_int("baseline_year"));
  options.tax_overrides = ctx.overrides(tax);
  const auto& series = ctx.config.get("gap_series");
  if (series == "blended") {
    options.series = GapSeries::blended;
  } else if (series == "predicted") {
    options.series = GapSeries::predicted;
  } else {
    throw ConfigError("gap_series must be blended or predicted");
  }
  GapReport report = gap_report(projection, panel, tax, options);
  write_file(ctx.out / "reports/gap.csv", months_to_csv(report));
  write_file(ctx.out / "reports/gap_summary.csv", summary_to_csv(report));
  std::size_t flagged = 0;
  for (const auto& s : report.summary) {
    if (!s.flagged) continue;
    ++flagged;
    out << "flagged " << s.state.code() << ": trailing 12-month gap " << std::fixed << std::setprecision(2)
        << *s.trailing12_gap_pct << "%\n";
  }
  out << flagged << " of " << report.summary.size() << " states inside the [-15%, -10%] band\n";
  return kOk;
}

int cmd_report(const Context& ctx, std::ostream& out) {
  Projection projection = ctx.projection();
  std::vector<StateId> states;
  for (const auto& code : ctx.config.get_list("states")) states.push_back(StateId::parse(code));
  if (states.empty()) states = projection.states();
  for (StateId s : states) {
    write_file(ctx.out / "charts" / (std::string(s.code()) + ".svg"), render_state_chart(projection, s));
  }
  out << "wrote " << states.size() << " charts to " << (ctx.out / "charts").string() << "\n";
  return kOk;
}

using Handler = int (*)(const Context&, std::ostream&);

Handler handler_for(std::string_view name) {
  if (name == "synth") return cmd_synth;
  if (name == "validate") return cmd_validate;
  if (name == "changes") return cmd_changes;
  if (name == "train") return cmd_train;
  if (name == "evaluate") return cmd_evaluate;
  if (name == "forecast") return cmd_forecast;
  if (name == "revenue") return cmd_revenue;
  return cmd_report;
}

}  // namespace

std::span<const KeySpec> known_keys() { return kKeys; }

RunConfig::RunConfig() {
  for (const auto& k : kKeys) values_.emplace(std::string(k.key), std::string(k.default_value));
}

void RunConfig::set(std::string_view key, std::string value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown setting '" + std::string(key) + "'");
  it->second = std::move(value);
}

void RunConfig::merge_file_text(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string content = trim(line);
    if (content.empty()) continue;
    auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    if (!values_.contains(key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    set(key, trim(std::string_view(content).substr(eq + 1)));
  }
}

const std::string& RunConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown setting '" + std::string(key) + "'");
  return it->second;
}

double RunConfig::get_double(std::string_view key) const {
  const auto& v = get(key);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + v + "'");
  }
  return out;
}

long long RunConfig::get_int(std::string_view key) const {
  const auto& v = get(key);
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::size_t RunConfig::get_size(std::string_view key) const {
  auto v = get_int(key);
  if (v < 0) throw ConfigError(std::string(key) + ": must not be negative");
  return static_cast<std::size_t>(v);
}

bool RunConfig::get_bool(std::string_view key) const {
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> RunConfig::get_list(std::string_view key) const {
  std::vector<std::string> out;
  std::string_view rest = get(key);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string item = trim(rest.substr(0, comma));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuel consumption modeling, forecasting and fuel-tax revenue gap reports", "fuelcast"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);
  app.footer("Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.");

  std::string config_path;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  std::map<std::string, CLI::App*> subs;
  for (const auto& sc : subcommands()) {
    CLI::App* sub = app.add_subcommand(std::string(sc.name), std::string(sc.help));
    sub->add_option("--config", config_path, "key=value settings file; flags override it");
    for (auto key : sc.keys) {
      const KeySpec* spec = find_key(key);
      std::string help = std::string(spec->help) + " [config key " + std::string(key) + ", default '" +
                         std::string(spec->default_value) + "']";
      auto* opt = sub->add_option(flag_name(key), flag_values[std::string(sc.name) + "." + std::string(key)], help);
      flag_options[std::string(sc.name) + "." + std::string(key)] = opt;
    }
    subs[std::string(sc.name)] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const Subcommand* chosen = nullptr;
  for (const auto& sc : subcommands()) {
    if (subs[std::string(sc.name)]->parsed()) chosen = &sc;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw ConfigError("cannot read config file " + config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      config.merge_file_text(buf.str());
    }
    for (auto key : chosen->keys) {
      std::string id = std::string(chosen->name) + "." + std::string(key);
      if (flag_options[id]->count() > 0) config.set(key, flag_values[id]);
    }
    Context ctx{config, fs::path(config.get("out"))};
    return handler_for(chosen->name)(ctx, out);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n" << subs[std::string(chosen->name)]->help();
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kModelError;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace fuelcast::cli
