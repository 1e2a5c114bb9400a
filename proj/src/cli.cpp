#include "semkg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "semkg/error.hpp"
#include "semkg/eval_metrics.hpp"
#include "semkg/ontology.hpp"
#include "semkg/pipeline.hpp"
#include "semkg/run_config.hpp"
#include "semkg/stream_sampler.hpp"

namespace semkg::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string pad3(std::size_t n) {
  std::ostringstream s;
  s << std::setw(3) << std::setfill('0') << n;
  return s.str();
}

/// Flags that map one-to-one onto RunConfig keys.
struct RunFlags {
  std::string config;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> options;
  bool concurrent = false;
  CLI::Option* concurrent_flag = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "flat key = value config file");
    for (auto key : RunConfig::keys()) {
      if (key == "concurrent") continue;
      const std::string name(key);
      options[name] = app.add_option("--" + name, raw[name]);
    }
    concurrent_flag = app.add_flag("--concurrent", concurrent, "caption on a worker thread");
  }

  RunConfig resolve() const {
    RunConfig cfg = config.empty() ? RunConfig{} : RunConfig::load(config);
    // A source given on the command line replaces the config's alternative.
    auto given = [&](const char* key) { return options.at(key)->count() > 0; };
    if (given("captioner") && !given("annotations")) cfg.annotations.clear();
    if (given("annotations") && !given("captioner")) cfg.captioner.clear();
    if (given("frames") && !given("frames-dir")) cfg.frames_dir.clear();
    if (given("frames-dir") && !given("frames")) cfg.frames.clear();
    for (const auto& [name, option] : options) {
      if (option->count() > 0) cfg.set(name, raw.at(name));
    }
    if (concurrent_flag->count() > 0) cfg.concurrent = concurrent;
    cfg.validate();
    return cfg;
  }
};

RunResult execute(const RunConfig& cfg, std::ostream& err, bool with_side_outputs) {
  const Ontology onto = Ontology::load(cfg.ontology);
  const auto frames = cfg.read_frames();
  StreamSampler sampler(cfg.window, cfg.hop);
  auto captioner = make_captioner(cfg.binding());

  PipelineOptions options;
  options.query_depth = cfg.depth;
  options.policy = cfg.policy;
  options.concurrent = cfg.concurrent;

  std::size_t snapshot = 0;
  ClipObserver observer;
  if (with_side_outputs && (!cfg.snapshots.empty() || !cfg.attention_dir.empty())) {
    observer = [&](const ClipEvent& event, const DynamicKnowledgeGraph& graph) {
      if (!cfg.snapshots.empty()) {
        write_file(fs::path(cfg.snapshots) / ("snapshot_" + pad3(snapshot) + ".dot"),
                   export_dot(graph));
      }
      ++snapshot;
      if (!cfg.attention_dir.empty() && event.attention) {
        std::ostringstream rows;
        rows << std::setprecision(9);
        for (std::size_t i = 0; i < event.attention->size(); ++i) {
          rows << (event.span.start + i);
          for (double w : (*event.attention)[i].weights) rows << ' ' << w;
          rows << '\n';
        }
        write_file(fs::path(cfg.attention_dir) / ("attention_" + std::to_string(event.span.start) +
                                                  "_" + std::to_string(event.span.end) + ".txt"),
                   rows.str());
      }
    };
  }

  RunResult result = run_stream(frames, sampler, *captioner, onto, options, observer);
  for (const auto& gap : result.gaps) err << "warning: " << gap << '\n';
  return result;
}

int cmd_sample(const std::string& frames_path, const std::string& frames_dir, std::size_t window,
               std::optional<std::size_t> hop, double fps, bool flush_partial, std::ostream& out,
               std::ostream& err) {
  if (frames_path.empty() == frames_dir.empty()) {
    err << "error: give exactly one of --frames or --frames-dir\n";
    return kUsage;
  }
  StreamSampler sampler(window, hop);
  const auto frames =
      frames_path.empty() ? read_frame_directory(frames_dir, fps) : read_frame_manifest(frames_path, fps);
  for (const auto& f : frames) {
    try {
      if (auto clip = sampler.push(f)) out << to_string(clip->span()) << '\n';
    } catch (const StreamGapError& gap) {
      err << "warning: " << gap.what() << '\n';
    }
  }
  if (flush_partial) {
    const auto rest = sampler.pending_frames();
    if (!rest.empty()) {
      out << to_string(TimeInterval{rest.front().index, rest.back().index}) << " partial\n";
    }
  }
  return kOk;
}

int cmd_query(const std::string& ontology, const std::string& name, std::size_t depth,
              std::ostream& out, std::ostream& err) {
  const Ontology onto = Ontology::load(ontology);
  const auto resolved = onto.resolve_entity(name);
  if (!resolved) {
    err << "error: no concept matches '" << name << "'\n";
    return kUsage;
  }
  out << concept_graph_dot(onto.query_concept(*resolved, depth), *resolved);
  return kOk;
}

int cmd_check(const std::string& ontology, std::ostream& out) {
  const Ontology onto = Ontology::load(ontology);
  const auto violations = onto.check_consistency();
  for (const auto& v : violations) out << v.message << '\n';
  out << violations.size() << (violations.size() == 1 ? " violation" : " violations") << '\n';
  return violations.empty() ? kOk : kFindings;
}

int cmd_eval(const std::string& candidates, const std::string& references, std::ostream& out) {
  const ScoredCorpus corpus = read_corpus(candidates, references);
  out << std::fixed << std::setprecision(6);
  out << std::left << std::setw(10) << "metric" << "score\n";
  out << std::left << std::setw(10) << "BLEU-4" << bleu4(corpus) << '\n';
  out << std::left << std::setw(10) << "ROUGE-L" << rouge_l(corpus) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic knowledge graphs from clip captions and a manipulation ontology", "semkg"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "list the clips a frame source produces");
  std::string sample_frames, sample_dir;
  std::size_t sample_window = 30;
  std::size_t sample_hop = 0;
  double sample_fps = kDefaultFps;
  bool flush_partial = false;
  sample->add_option("--frames", sample_frames, "frame manifest");
  sample->add_option("--frames-dir", sample_dir, "directory of numbered frame files");
  sample->add_option("--window", sample_window, "clip length L");
  auto* hop_opt = sample->add_option("--hop", sample_hop, "frames between clips (default L/2)");
  sample->add_option("--fps", sample_fps);
  sample->add_flag("--flush-partial", flush_partial, "also print the trailing partial window");

  // run / export
  auto* run_cmd = app.add_subcommand("run", "build the dynamic knowledge graph for a stream");
  RunFlags run_flags;
  run_flags.attach(*run_cmd);

  auto* export_cmd = app.add_subcommand("export", "print the final graph of a run");
  RunFlags export_flags;
  export_flags.attach(*export_cmd);
  std::string export_format = "dot";
  export_cmd->add_option("--format", export_format)->check(CLI::IsMember({"dot", "triples"}));

  // query
  auto* query = app.add_subcommand("query", "print the concept graph of one entity");
  std::string query_onto, query_name;
  std::size_t query_depth = kDefaultQueryDepth;
  query->add_option("--ontology", query_onto)->required();
  query->add_option("--depth", query_depth);
  query->add_option("entity", query_name)->required();

  // check
  auto* check = app.add_subcommand("check", "report ontology consistency violations");
  std::string check_onto;
  check->add_option("--ontology", check_onto)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "score candidate commands with BLEU-4 and ROUGE-L");
  std::string eval_cand, eval_ref;
  eval->add_option("--candidates", eval_cand, "one sentence per line")->required();
  eval->add_option("--references", eval_ref, "tab-separated references per line")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sample) {
      std::optional<std::size_t> hop;
      if (hop_opt->count() > 0) hop = sample_hop;
      return cmd_sample(sample_frames, sample_dir, sample_window, hop, sample_fps, flush_partial,
                        out, err);
    }
    if (*run_cmd) {
      const RunConfig cfg = run_flags.resolve();
      const RunResult result = execute(cfg, err, true);
      const std::string dot = export_dot(result.graph);
      if (cfg.dot.empty() || cfg.dot == "-") {
        out << dot;
      } else {
        write_file(cfg.dot, dot);
      }
      std::string log;
      for (const auto& event : result.events) log += format_event(event) + '\n';
      if (cfg.events.empty()) {
        err << log;
      } else {
        write_file(cfg.events, log);
      }
      return kOk;
    }
    if (*export_cmd) {
      const RunConfig cfg = export_flags.resolve();
      const RunResult result = execute(cfg, err, false);
      out << (export_format == "triples" ? export_triples(result.graph) : export_dot(result.graph));
      return kOk;
    }
    if (*query) return cmd_query(query_onto, query_name, query_depth, out, err);
    if (*check) return cmd_check(check_onto, out);
    if (*eval) return cmd_eval(eval_cand, eval_ref, out);
  } catch (const PipelineHalt& e) {
    err << "halted: " << e.what() << '\n';
    return kHalted;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace semkg::cli
