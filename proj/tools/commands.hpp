#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "subwordseg/evaluation.hpp"
#include "subwordseg/segmenter.hpp"
#include "subwordseg/synthesis.hpp"

namespace subwordseg::cli {

namespace fs = std::filesystem;

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;

struct SegmentOptions {
  std::vector<fs::path> inputs;  // files or directories of .pgm / .pbm
  std::optional<fs::path> out_dir;  // default: next to each input
  std::optional<fs::path> annotate_dir;
  std::optional<fs::path> truth_dir;  // truth boxes for annotation
  PipelineConfig pipeline;
  unsigned jobs = 1;
};

struct EvaluateOptions {
  fs::path pred_dir;
  fs::path truth_dir;
  fs::path out = "report.json";
  EvalOptions eval;
};

struct SynthOptions {
  CorpusSpec corpus;
  fs::path out_dir = "corpus";
  unsigned jobs = 1;
};

struct StatsOptions {
  fs::path truth_dir;
  std::optional<fs::path> out;  // default: stdout
};

int run_segment(const SegmentOptions& opts, std::ostream& out, std::ostream& err);
int run_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err);
int run_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err);
int run_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Worker count: SUBWORDSEG_JOBS if set and positive, else hardware concurrency.
unsigned default_jobs();

}  // namespace subwordseg::cli
