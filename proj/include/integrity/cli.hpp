#pragma once

#include <optional>
#include <string>
#include <vector>

#include "integrity/common.hpp"

namespace integrity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitFormat = 2;

// Relative output paths are resolved against this directory when set.
inline constexpr const char* kOutDirVariable = "INTEGRITY_OUT_DIR";

struct IndicatorsOptions {
  std::string corpus;
  Window base;
  Window current;
  std::string out;
  std::string config;  // optional screening config: hpa_threshold, max_coauthors
  std::optional<Window> retraction_window;
};

struct ScoreOptions {
  std::string indicators;
  std::string edition;  // empty: built-in june2025
  std::string out;
};

struct RankOptions {
  std::string scores;
  std::string out;
};

struct FlagOptions {
  std::string corpus;
  Window base;
  Window current;
  std::string config;
  std::string edition;
  std::string out;  // directory
};

struct NetworkOptions {
  std::string corpus;
  std::string kind = "coauthorship";
  std::optional<double> threshold;
  Window window;
  std::string format = "edge_list";
  std::string basis = "top2";
  std::vector<std::string> institutions;  // empty: every institution
  std::string out;
};

struct SynthOptions {
  std::string params;
  std::string injections;
  std::optional<unsigned long long> seed;
  std::string out;  // directory
};

// Each command writes its outputs and a manifest; throws FormatError or
// ValidationError.
void cmd_indicators(const IndicatorsOptions& o);
void cmd_score(const ScoreOptions& o);
void cmd_rank(const RankOptions& o);
void cmd_flag(const FlagOptions& o);
void cmd_network(const NetworkOptions& o);
void cmd_synth(const SynthOptions& o);

// Resolves `path` against INTEGRITY_OUT_DIR when relative.
std::string output_path(const std::string& path);

// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace integrity::cli
