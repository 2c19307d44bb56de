#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cair/automaton.hpp"
#include "cair/baselines.hpp"
#include "cair/detect.hpp"
#include "cair/dominance.hpp"
#include "cair/ingest.hpp"
#include "cair/report.hpp"
#include "cair/synth.hpp"

namespace {

using namespace cair;

constexpr int kExitIo = 2;
constexpr int kExitAlerts = 3;

class Timer {
 public:
  explicit Timer(std::string what) : what_(std::move(what)), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0_;
    std::cerr << "[" << what_ << "] " << dt.count() << " s\n";
  }

 private:
  std::string what_;
  std::chrono::steady_clock::time_point t0_;
};

struct Options {
  std::string output = "table";
  std::string format = "simple";
  bool collapse = false;
  std::string input;
  std::string snapshot;
  std::string snapshot_b;
  std::string out_path;
  std::size_t top = 10;
  std::size_t min_segment = 3;
  std::vector<std::string> siblings;
  bool non_strict = false;
  double gain = 500.0;
  double churn = 0.05;
  std::size_t top_k = 5;
  std::string label_a;
  std::string label_b;
  std::string prefix;
  std::uint32_t asn = 0;
  std::string spec_path;
  std::string canned;
  std::string out_dir = ".";
};

report::Mode mode_of(const Options& o) { return *report::parse_mode(o.output); }

InputFormat format_of(const Options& o) { return *parse_input_format(o.format); }

std::string label_or_path(const std::string& label, const std::string& path) {
  return label.empty() ? std::filesystem::path(path).filename().string() : label;
}

RouteAutomaton load_snapshot(const std::string& path) {
  Timer t("load");
  return RouteAutomaton::load(path);
}

int cmd_build(const Options& o) {
  IngestResult in;
  {
    Timer t("parse");
    in = ingest_file(o.input, format_of(o), {o.collapse});
  }
  RouteAutomaton a;
  {
    Timer t("construct");
    a = RouteAutomaton::build(in.routes);
  }
  if (!o.out_path.empty()) {
    Timer t("save");
    a.save(o.out_path);
  }
  report::write_ingest(std::cout, mode_of(o), in.report);
  if (mode_of(o) == report::Mode::Table) std::cout << '\n';
  report::write_stats(std::cout, mode_of(o), a.stats());
  return 0;
}

int cmd_detect(const Options& o) {
  const auto a = load_snapshot(o.snapshot);
  DetectorConfig config;
  config.min_segment_length = o.min_segment;
  config.require_strict_subprefix = !o.non_strict;
  for (const auto& group : o.siblings) {
    std::set<AsNumber> members;
    std::stringstream in(group);
    for (std::string item; std::getline(in, item, ',');) {
      auto asn = parse_asn(item);
      if (!asn) throw Error(ErrorCode::Malformed, "bad AS number in --siblings: " + item);
      members.insert(*asn);
    }
    config.sibling_groups.push_back(std::move(members));
  }
  DetectionReport r;
  {
    Timer t("detect");
    r = detect(a, config);
  }
  report::write_detection(std::cout, mode_of(o), r);
  return r.alerts.empty() ? 0 : kExitAlerts;
}

int cmd_dominance(const Options& o) {
  const auto a = load_snapshot(o.snapshot);
  DominanceReport r;
  {
    Timer t("dominance");
    r = dominance(a, label_or_path(o.label_a, o.snapshot));
  }
  report::write_dominance(std::cout, mode_of(o), r, o.top);
  return 0;
}

int cmd_diff(const Options& o) {
  const auto before = dominance(load_snapshot(o.snapshot), label_or_path(o.label_a, o.snapshot));
  const auto after = dominance(load_snapshot(o.snapshot_b), label_or_path(o.label_b, o.snapshot_b));
  const auto d = diff(before, after);
  const auto verdict = assess_leak(d, {o.gain, o.churn, o.top_k});
  report::write_diff(std::cout, mode_of(o), d, o.top, verdict);
  return 0;
}

int cmd_compare(const Options& o) {
  const auto in = ingest_file(o.input, format_of(o), {o.collapse});
  SizeComparison c;
  {
    Timer t("compare");
    c = compare_sizes(in.routes);
  }
  report::write_comparison(std::cout, mode_of(o), c);
  return 0;
}

int cmd_export_dot(const Options& o) {
  const auto a = load_snapshot(o.snapshot);
  DotFilter filter;
  if (!o.prefix.empty()) {
    filter.prefix = IpPrefix::parse(o.prefix);
    if (!filter.prefix) throw Error(ErrorCode::Malformed, "bad prefix: " + o.prefix);
  }
  if (o.asn) filter.asn = AsNumber{o.asn};
  const std::string dot = a.export_dot(filter);
  if (o.out_path.empty()) {
    std::cout << dot;
    return 0;
  }
  std::ofstream out(o.out_path);
  if (!(out << dot)) throw Error(ErrorCode::IoError, "cannot write " + o.out_path);
  return 0;
}

void write_routes_file(const std::filesystem::path& path, const RouteSet& routes) {
  std::ofstream out(path);
  write_simple(out, routes);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  std::cout << path.string() << '\n';
}

int cmd_synth(const Options& o) {
  ScenarioSpec spec;
  if (!o.canned.empty()) {
    if (o.canned == "defcon") spec = defcon_spec();
    else if (o.canned == "defcon-control") spec = defcon_control_spec();
    else if (o.canned == "leak") spec = leak_spec();
    else throw Error(ErrorCode::InvalidSpec, "unknown canned scenario " + o.canned);
  } else {
    spec = ScenarioSpec::load(o.spec_path);
  }
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  if (spec.attack) {
    const auto s = gen_interception(spec);
    write_routes_file(dir / (spec.name + ".routes"), s.routes);
    const auto alert_path = dir / (spec.name + ".alert");
    std::ofstream out(alert_path);
    report::write_expected_alert(out, s.expected);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + alert_path.string());
    std::cout << alert_path.string() << '\n';
  } else if (spec.leak) {
    const auto [before, after] = gen_leak(spec, gen_benign(spec));
    write_routes_file(dir / (spec.name + ".before.routes"), before);
    write_routes_file(dir / (spec.name + ".after.routes"), after);
  } else {
    write_routes_file(dir / (spec.name + ".routes"), gen_benign(spec));
  }
  return 0;
}

int cmd_routes(const Options& o) {
  const auto a = load_snapshot(o.snapshot);
  a.for_each_route([](const Route& r) { std::cout << r.to_simple() << '\n'; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Route automata for BGP routing analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--output", o.output, "Output mode")
      ->check(CLI::IsMember({"table", "records"}))
      ->capture_default_str();

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Input format")
        ->check(CLI::IsMember({"simple", "bgpdump-m"}))
        ->capture_default_str();
    sub->add_flag("--collapse-prepends", o.collapse, "Reduce prepend runs to one AS");
  };

  auto* build = app.add_subcommand("build", "Ingest routes and write an automaton snapshot");
  build->add_option("input", o.input, "Route file")->required();
  build->add_option("-o,--snapshot", o.out_path, "Snapshot to write");
  add_format(build);

  auto* det = app.add_subcommand("detect", "Search a snapshot for interception alerts (exit 3 on alerts)");
  det->add_option("snapshot", o.snapshot, "Snapshot file")->required();
  det->add_option("--min-segment-length", o.min_segment, "Minimum AS hops in the artificial segment")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  det->add_option("--siblings", o.siblings, "Comma-separated ASes of one organization (repeatable)");
  det->add_flag("--non-strict", o.non_strict, "Accept equal prefixes, not only strict subprefixes");

  auto* dom = app.add_subcommand("dominance", "Rank ASes by reachable states |Q(u)|");
  dom->add_option("snapshot", o.snapshot, "Snapshot file")->required();
  dom->add_option("--top", o.top, "Rows to print")->capture_default_str();
  dom->add_option("--label", o.label_a, "Snapshot label");

  auto* dif = app.add_subcommand("diff", "Compare dominance of two snapshots and assess route leaks");
  dif->add_option("before", o.snapshot, "Earlier snapshot")->required();
  dif->add_option("after", o.snapshot_b, "Later snapshot")->required();
  dif->add_option("--top", o.top, "Movers to print")->capture_default_str();
  dif->add_option("--gain-threshold", o.gain, "Originator gain in percent")->capture_default_str();
  dif->add_option("--churn-threshold", o.churn, "Fraction of ASes that changed")->capture_default_str();
  dif->add_option("--top-k", o.top_k, "Absolute gainers considered for the originator")
      ->capture_default_str();
  dif->add_option("--before-label", o.label_a, "Label of the earlier snapshot");
  dif->add_option("--after-label", o.label_b, "Label of the later snapshot");

  auto* cmp = app.add_subcommand("compare", "Size of automaton, trie and AS graph for one route file");
  cmp->add_option("input", o.input, "Route file")->required();
  add_format(cmp);

  auto* dot = app.add_subcommand("export-dot", "Write Graphviz DOT for a snapshot");
  dot->add_option("snapshot", o.snapshot, "Snapshot file")->required();
  dot->add_option("--prefix", o.prefix, "Keep paths announcing this prefix");
  dot->add_option("--asn", o.asn, "Keep paths through this AS");
  dot->add_option("-o,--out", o.out_path, "Output file (default stdout)");

  auto* syn = app.add_subcommand("synth", "Generate scenario route files");
  auto* spec_opt = syn->add_option("spec", o.spec_path, "Scenario spec file");
  auto* canned_opt = syn->add_option("--canned", o.canned, "Built-in scenario: defcon, defcon-control, leak");
  spec_opt->excludes(canned_opt);
  syn->add_option("--out-dir", o.out_dir, "Directory for generated files")->capture_default_str();

  auto* rts = app.add_subcommand("routes", "Enumerate the routes of a snapshot");
  rts->add_option("snapshot", o.snapshot, "Snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (syn->parsed() && o.spec_path.empty() && o.canned.empty()) {
    std::cerr << "synth: give a spec file or --canned\n";
    return 1;
  }

  try {
    if (build->parsed()) return cmd_build(o);
    if (det->parsed()) return cmd_detect(o);
    if (dom->parsed()) return cmd_dominance(o);
    if (dif->parsed()) return cmd_diff(o);
    if (cmp->parsed()) return cmd_compare(o);
    if (dot->parsed()) return cmd_export_dot(o);
    if (syn->parsed()) return cmd_synth(o);
    if (rts->parsed()) return cmd_routes(o);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: IoError: " << e.what() << '\n';
    return kExitIo;
  }
  return 1;
}
