#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "integrity/cli.hpp"
#include "integrity/csv.hpp"
#include "integrity/diagnostics.hpp"
#include "integrity/indicators.hpp"
#include "integrity/ingest.hpp"
#include "integrity/manifest.hpp"
#include "integrity/networks.hpp"
#include "integrity/ri2.hpp"
#include "integrity/screening.hpp"
#include "integrity/synth.hpp"

namespace integrity::cli {

namespace fs = std::filesystem;

std::string output_path(const std::string& path) {
  const char* root = std::getenv(kOutDirVariable);
  if (!root || !*root || fs::path(path).is_absolute()) return path;
  return (fs::path(root) / path).string();
}

namespace {

RunManifest base_manifest(std::string command, std::vector<std::string> inputs) {
  RunManifest m;
  m.command = std::move(command);
  m.tool_version = INTEGRITY_VERSION;
  m.input_digest = digest_files(inputs);
  m.inputs = std::move(inputs);
  return m;
}

void write_outputs(RunManifest manifest,
                   const std::vector<std::pair<std::string, std::string>>& files,
                   const std::string& manifest_path) {
  for (const auto& [path, content] : files) {
    write_file_atomically(path, content);
    manifest.outputs.push_back(fs::path(path).filename().string());
  }
  write_file_atomically(manifest_path, manifest.render());
}

std::vector<std::string> corpus_inputs(const std::string& dir) {
  if (!fs::is_directory(dir)) throw FormatError("corpus directory '" + dir + "' not found");
  return ingest::corpus_file_paths(dir);
}

std::string read_input(const std::string& path) {
  if (!fs::is_regular_file(path)) throw FormatError("input file '" + path + "' not found");
  return read_file(path);
}

}  // namespace

void cmd_indicators(const IndicatorsOptions& o) {
  auto inputs = corpus_inputs(o.corpus);
  screening::ScreeningConfig config;
  if (!o.config.empty()) {
    config = screening::load_config(o.config);
    inputs.push_back(o.config);
  }
  const auto loaded = ingest::load_corpus_dir(o.corpus);
  indicators::IndicatorOptions options;
  options.scope.max_coauthors = config.max_coauthors;
  options.hpa_threshold = config.hpa_threshold;
  options.retraction_window = o.retraction_window;
  std::optional<indicators::CitationGraph> graph;
  if (loaded.citations) graph.emplace(loaded.snapshot, *loaded.citations, options.scope);
  const indicators::IndicatorEngine engine(loaded.snapshot, o.base, o.current, options,
                                           graph ? &*graph : nullptr);
  const auto table = indicators::format_indicator_table(engine.compute_all());

  auto manifest = base_manifest("indicators", inputs);
  manifest.config_path = o.config;
  manifest.windows = {{"base", o.base.to_string()},
                      {"current", o.current.to_string()},
                      {"retraction", engine.retraction_window().to_string()}};
  const auto out = output_path(o.out);
  write_outputs(manifest, {{out, table}}, out + ".manifest");
}

void cmd_score(const ScoreOptions& o) {
  std::vector<std::string> inputs = {o.indicators};
  std::istringstream table(read_input(o.indicators));
  const auto rows = indicators::parse_indicator_table(table, o.indicators);
  ri2::Edition edition = ri2::june2025();
  if (!o.edition.empty()) {
    edition = ri2::load_edition(o.edition);
    inputs.push_back(o.edition);
  }
  std::vector<ri2::ScoreInput> score_inputs;
  for (const auto& r : rows) {
    score_inputs.push_back({r.institution_id, r.retraction_rate, r.delisted_share});
  }
  const auto set = ri2::score_all(score_inputs, edition);
  std::string unscored = csv::format_row({"institution_id", "reason"});
  for (const auto& u : set.unscored) unscored += csv::format_row({u.institution_id, u.reason});

  auto manifest = base_manifest("score", inputs);
  manifest.edition_id = edition.edition_id;
  const auto out = output_path(o.out);
  write_outputs(manifest, {{out, ri2::format_scores(set.scored)}, {out + ".unscored.csv", unscored}},
                out + ".manifest");
}

void cmd_rank(const RankOptions& o) {
  std::istringstream in(read_input(o.scores));
  const auto scores = ri2::parse_scores(in, o.scores);
  const auto table = ri2::format_rank_table(ri2::rank_table(scores));
  const auto out = output_path(o.out);
  write_outputs(base_manifest("rank", {o.scores}), {{out, table}}, out + ".manifest");
}

void cmd_flag(const FlagOptions& o) {
  auto inputs = corpus_inputs(o.corpus);
  screening::ScreeningConfig config;
  if (!o.config.empty()) {
    config = screening::load_config(o.config);
    inputs.push_back(o.config);
  }
  std::optional<ri2::Edition> edition;
  if (!o.edition.empty()) {
    edition = ri2::load_edition(o.edition);
    inputs.push_back(o.edition);
  }
  const auto loaded = ingest::load_corpus_dir(o.corpus);
  Scope scope;
  scope.max_coauthors = config.max_coauthors;
  std::optional<indicators::CitationGraph> graph;
  if (loaded.citations) {
    graph.emplace(loaded.snapshot, *loaded.citations, scope);
  } else {
    warn("no citations.csv in '" + o.corpus + "'; citation-network flags are not evaluated");
  }
  screening::ScreeningInputs in;
  in.snapshot = &loaded.snapshot;
  in.citations = graph ? &*graph : nullptr;
  in.edition = edition ? &*edition : nullptr;
  const auto reports = screening::screen(in, o.base, o.current, config);

  auto manifest = base_manifest("flag", inputs);
  manifest.config_path = o.config;
  if (edition) manifest.edition_id = edition->edition_id;
  manifest.windows = {{"base", o.base.to_string()}, {"current", o.current.to_string()}};
  const fs::path dir = output_path(o.out);
  write_outputs(manifest,
                {{(dir / "reports.csv").string(),
                  screening::render_reports(reports, screening::RenderFormat::CsvRow)},
                 {(dir / "reports.txt").string(),
                  screening::render_reports(reports, screening::RenderFormat::Text)},
                 {(dir / "config.txt").string(), screening::format_config(config)}},
                (dir / "manifest.txt").string());
}

void cmd_network(const NetworkOptions& o) {
  const auto inputs = corpus_inputs(o.corpus);
  const auto kind = networks::parse_kind(o.kind);
  const auto format = networks::parse_export_format(o.format);
  const auto basis = indicators::parse_basis(o.basis);
  const double threshold = o.threshold.value_or(
      kind == networks::Kind::Citation ? networks::kCitationThreshold
                                       : networks::kCollaborationThreshold);
  const auto loaded = ingest::load_corpus_dir(o.corpus);
  std::optional<indicators::CitationGraph> graph;
  if (loaded.citations) graph.emplace(loaded.snapshot, *loaded.citations);
  auto institutions = o.institutions;
  if (institutions.empty()) institutions = loaded.snapshot.institutions();
  for (const auto& inst : institutions) {
    if (!loaded.snapshot.has_institution(inst)) {
      warn("institution '" + inst + "' does not appear in the corpus");
    }
  }
  const auto g = networks::build_contribution_graph(loaded.snapshot, graph ? &*graph : nullptr,
                                                    institutions, o.window, kind, threshold,
                                                    basis);
  auto manifest = base_manifest("network", inputs);
  manifest.windows = {{"analysis", o.window.to_string()}};
  const auto out = output_path(o.out);
  write_outputs(manifest, {{out, networks::export_graph(g, format)}}, out + ".manifest");
}

void cmd_synth(const SynthOptions& o) {
  std::vector<std::string> inputs = {o.params};
  read_input(o.params);
  auto params = synth::load_params(o.params);
  if (o.seed) params.seed = *o.seed;
  std::vector<synth::Injection> injections;
  if (!o.injections.empty()) {
    read_input(o.injections);
    injections = synth::load_injections(o.injections);
    inputs.push_back(o.injections);
  }
  auto files = synth::generate_null(params);
  for (const auto& inj : injections) files = synth::apply(std::move(files), inj);

  const auto dir = output_path(o.out);
  ingest::write_corpus_dir(dir, files);
  auto manifest = base_manifest("synth", inputs);
  for (const auto& p : ingest::corpus_file_paths(dir)) {
    manifest.outputs.push_back(fs::path(p).filename().string());
  }
  manifest.outputs.push_back("scenario.txt");
  write_file_atomically((fs::path(dir) / "scenario.txt").string(),
                        synth::scenario_manifest(params, injections));
  write_file_atomically((fs::path(dir) / "manifest.txt").string(), manifest.render());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Bibliometric research-integrity indicators, RI2 scoring and screening"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(INTEGRITY_VERSION));
  app.option_defaults()->always_capture_default();

  IndicatorsOptions ind;
  std::string ind_base, ind_current, ind_retraction;
  auto* c_ind = app.add_subcommand("indicators", "Per-institution indicator table");
  c_ind->add_option("--corpus", ind.corpus, "Corpus directory")->required();
  c_ind->add_option("--base", ind_base, "Base window, e.g. 2018-2019")->required();
  c_ind->add_option("--current", ind_current, "Current window, e.g. 2023-2024")->required();
  c_ind->add_option("--out", ind.out, "Output CSV")->required();
  c_ind->add_option("--config", ind.config, "Screening config (hpa_threshold, max_coauthors)");
  c_ind->add_option("--retraction-window", ind_retraction,
                    "Retraction window; default is the two years before the last current year");

  ScoreOptions score;
  auto* c_score = app.add_subcommand("score", "RI2 scores from an indicator table");
  c_score->add_option("--indicators", score.indicators, "Indicator table CSV")->required();
  c_score->add_option("--edition", score.edition, "Edition file; default june2025 constants");
  c_score->add_option("--out", score.out, "Output scores CSV")->required();

  RankOptions rank;
  auto* c_rank = app.add_subcommand("rank", "Ranked table from a scores file");
  c_rank->add_option("--scores", rank.scores, "Scores CSV")->required();
  c_rank->add_option("--out", rank.out, "Output CSV")->required();

  FlagOptions flag;
  std::string flag_base, flag_current;
  auto* c_flag = app.add_subcommand("flag", "Screening funnel and flag reports");
  c_flag->add_option("--corpus", flag.corpus, "Corpus directory")->required();
  c_flag->add_option("--base", flag_base, "Base window")->required();
  c_flag->add_option("--current", flag_current, "Current window")->required();
  c_flag->add_option("--config", flag.config, "Screening config; default thresholds otherwise");
  c_flag->add_option("--edition", flag.edition, "Edition file; adds RI2 score and tier");
  c_flag->add_option("--out", flag.out, "Output directory")->required();

  NetworkOptions net;
  std::string net_window, net_institutions;
  double net_threshold = 0.0;
  auto* c_net = app.add_subcommand("network", "Citation or co-authorship graph export");
  c_net->add_option("--corpus", net.corpus, "Corpus directory")->required();
  c_net->add_option("--kind", net.kind, "citation or coauthorship");
  auto* o_threshold = c_net->add_option(
      "--threshold", net_threshold, "Edge threshold; default 0.01 citation, 0.02 coauthorship");
  o_threshold->default_str("");
  c_net->add_option("--window", net_window, "Analysis window")->required();
  c_net->add_option("--format", net.format, "edge_list or dot");
  c_net->add_option("--basis", net.basis, "Cited articles: top2 or all");
  c_net->add_option("--institutions", net_institutions,
                    "Comma-separated node set; default every institution");
  c_net->add_option("--out", net.out, "Output file")->required();

  SynthOptions syn;
  unsigned long long syn_seed = 0;
  auto* c_syn = app.add_subcommand("synth", "Synthetic corpus with optional injections");
  c_syn->add_option("--params", syn.params, "Generator parameters (key=value)")->required();
  c_syn->add_option("--injections", syn.injections, "Injection list, one per line");
  auto* o_seed = c_syn->add_option("--seed", syn_seed, "Overrides the seed in --params");
  o_seed->default_str("");
  c_syn->add_option("--out", syn.out, "Output corpus directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFormat;
  }

  try {
    if (c_ind->parsed()) {
      ind.base = Window::parse(ind_base);
      ind.current = Window::parse(ind_current);
      if (!ind_retraction.empty()) ind.retraction_window = Window::parse(ind_retraction);
      cmd_indicators(ind);
    } else if (c_score->parsed()) {
      cmd_score(score);
    } else if (c_rank->parsed()) {
      cmd_rank(rank);
    } else if (c_flag->parsed()) {
      flag.base = Window::parse(flag_base);
      flag.current = Window::parse(flag_current);
      cmd_flag(flag);
    } else if (c_net->parsed()) {
      net.window = Window::parse(net_window);
      if (o_threshold->count()) net.threshold = net_threshold;
      net.institutions = text::split_list(net_institutions, ',');
      cmd_network(net);
    } else if (c_syn->parsed()) {
      if (o_seed->count()) syn.seed = syn_seed;
      cmd_synth(syn);
    }
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitOk;
}

}  // namespace integrity::cli
