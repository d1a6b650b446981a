#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "subwordseg/error.hpp"
#include "subwordseg/groundtruth.hpp"
#include "subwordseg/parallel.hpp"
#include "subwordseg/raster.hpp"

namespace subwordseg::cli {

using json = nlohmann::json;

namespace {

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_file(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Files in `dir` whose names end with `suffix`, sorted by name.
std::vector<fs::path> list_files(const fs::path& dir, const std::string& suffix) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && ends_with(entry.path().filename().string(), suffix)) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string strip_suffix(const fs::path& p, const std::string& suffix) {
  const std::string name = p.filename().string();
  return name.substr(0, name.size() - suffix.size());
}

void draw_box(RgbImage& img, const Box& b, Rgb color) {
  auto put = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < img.width() && y < img.height()) img.set(x, y, color);
  };
  for (int x = b.ax; x <= b.bx; ++x) {
    put(x, b.ay);
    put(x, b.by);
  }
  for (int y = b.ay; y <= b.by; ++y) {
    put(b.ax, y);
    put(b.bx, y);
  }
}

// Truth documents: <id>.xml or the JSON mirror <id>.truth.json.
std::map<std::string, fs::path> truth_files(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& p : list_files(dir, ".truth.json")) out[strip_suffix(p, ".truth.json")] = p;
  for (const auto& p : list_files(dir, ".xml")) out[strip_suffix(p, ".xml")] = p;
  return out;
}

json params_json(const SynthParams& p) {
  return {{"subword_count", p.subword_count}, {"stroke_thickness", p.stroke_thickness},
          {"gap_widths", p.gap_widths},       {"dot_count", p.dot_count},
          {"canvas_width", p.canvas_width},   {"canvas_height", p.canvas_height},
          {"seed", p.seed}};
}

json corpus_json(const CorpusSpec& c) {
  json j = {{"words", c.words},           {"seed", c.seed},
            {"subwords_min", c.subwords_min}, {"subwords_max", c.subwords_max},
            {"gap_min", c.gap_min},       {"gap_max", c.gap_max},
            {"dots_max", c.dots_max},     {"thickness", c.thickness},
            {"canvas_height", c.canvas_height}};
  j["subwords_total"] = c.subwords_total ? json(*c.subwords_total) : json(nullptr);
  j["canvas_width"] = c.canvas_width ? json(*c.canvas_width) : json(nullptr);
  return j;
}

// Parses "lo:hi" or a single value "v" (lo = hi = v).
std::pair<int, int> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ParamError(std::string("invalid ") + what + " range '" + text + "'");
  }
}

}  // namespace

unsigned default_jobs() {
  if (const char* env = std::getenv("SUBWORDSEG_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_segment(const SegmentOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    opts.pipeline.validate();
  } catch (const ParamError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<fs::path> files;
  std::vector<std::string> failures;
  for (const auto& in : opts.inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      for (const char* ext : {".pgm", ".pbm"}) {
        for (auto& p : list_files(in, ext)) files.push_back(std::move(p));
      }
    } else {
      files.push_back(in);
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto* dir : {&opts.out_dir, &opts.annotate_dir}) {
    if (*dir) fs::create_directories(**dir);
  }

  std::vector<std::string> errors(files.size());
  std::vector<std::size_t> box_counts(files.size(), 0);
  parallel_for(files.size(), opts.jobs, [&](std::size_t i) {
    const fs::path& path = files[i];
    const std::string id = path.stem().string();
    try {
      const Bytes bytes = read_file(path);
      const bool bilevel = bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '1' || bytes[1] == '4');
      std::optional<GrayImage> gray;
      std::optional<BinaryImage> bits;
      SegmentationResult r;
      if (bilevel) {
        bits = load_pbm(bytes);
        r = segment_binary(*bits, opts.pipeline, id);
      } else {
        gray = load_pgm(bytes);
        r = segment_word(*gray, opts.pipeline, id);
      }
      const fs::path dir = opts.out_dir.value_or(path.parent_path());
      write_file(dir / (id + ".boxes.json"), to_json(r));
      box_counts[i] = r.boxes.size();

      if (opts.annotate_dir) {
        RgbImage canvas = gray ? RgbImage(*gray) : RgbImage(*bits);
        if (opts.truth_dir) {
          for (const char* ext : {".xml", ".truth.json"}) {
            const fs::path tp = *opts.truth_dir / (id + ext);
            if (!fs::exists(tp)) continue;
            for (const auto& b : parse_truth(read_file(tp)).subwords) draw_box(canvas, b, {255, 0, 0});
            break;
          }
        }
        for (const auto& b : r.boxes) draw_box(canvas, b, {0, 255, 0});
        write_file(*opts.annotate_dir / (id + ".ppm"), save_ppm(canvas));
      }
    } catch (const std::exception& e) {
      errors[i] = path.string() + ": " + e.what();
    }
  });

  std::size_t failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) {
      err << "error: " << errors[i] << "\n";
      ++failed;
    }
  }
  out << "segmented " << files.size() - failed << " of " << files.size() << " image(s)\n";
  if (files.empty()) {
    err << "error: no input images\n";
    return kExitUsage;
  }
  return failed == 0 ? kExitOk : kExitPartial;
}

int run_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
  for (const auto* dir : {&opts.pred_dir, &opts.truth_dir}) {
    if (!fs::is_directory(*dir)) {
      err << "error: not a directory: " << dir->string() << "\n";
      return kExitUsage;
    }
  }
  if (!(opts.eval.threshold > 0.0 && opts.eval.threshold <= 1.0)) {
    err << "error: --overlap must be in (0, 1]\n";
    return kExitUsage;
  }

  const auto truth_paths = truth_files(opts.truth_dir);
  if (truth_paths.empty()) {
    err << "error: no ground truth documents in " << opts.truth_dir.string() << "\n";
    return kExitUsage;
  }

  std::vector<std::string> failures;
  std::set<std::string> failed_ids;
  std::vector<WordTruth> truths;
  for (const auto& [id, path] : truth_paths) {
    try {
      truths.push_back(parse_truth(read_file(path)));
    } catch (const std::exception& e) {
      failures.push_back(path.string() + ": " + e.what());
      failed_ids.insert(id);
    }
  }
  std::vector<SegmentationResult> preds;
  for (const auto& path : list_files(opts.pred_dir, ".boxes.json")) {
    try {
      const Bytes bytes = read_file(path);
      preds.push_back(segmentation_from_json(std::string(bytes.begin(), bytes.end())));
    } catch (const std::exception& e) {
      failures.push_back(path.string() + ": " + e.what());
      failed_ids.insert(strip_suffix(path, ".boxes.json"));
    }
  }
  std::erase_if(truths, [&](const WordTruth& t) { return failed_ids.contains(t.id); });
  std::erase_if(preds, [&](const SegmentationResult& r) { return failed_ids.contains(r.image_id); });
  for (const auto& f : failures) err << "error: " << f << "\n";

  EvalReport report;
  try {
    report = evaluate_corpus(preds, truths, opts.eval);
  } catch (const IdMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    write_file(opts.out, to_json(report));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(1);
    s << *v * 100.0;
    return s.str();
  };
  out << "words " << report.words.size() << "  exact " << report.seg_classes.exact << "  over "
      << report.seg_classes.over << "  under " << report.seg_classes.under << "\n"
      << "accuracy " << pct(report.metrics.accuracy) << "  precision " << pct(report.metrics.precision)
      << "  recall " << pct(report.metrics.recall) << "  specificity "
      << pct(report.metrics.specificity) << "  f " << pct(report.metrics.f_score) << "\n";
  return failures.empty() ? kExitOk : kExitPartial;
}

int run_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<CorpusItem> items;
  try {
    items = plan_corpus(opts.corpus);
  } catch (const ParamError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  fs::create_directories(opts.out_dir);

  std::vector<std::string> errors(items.size());
  parallel_for(items.size(), opts.jobs, [&](std::size_t i) {
    try {
      const SynthWord w = synth_word(items[i].params, items[i].id);
      write_file(opts.out_dir / (items[i].id + ".pgm"), save_pgm(w.image));
      write_file(opts.out_dir / (items[i].id + ".xml"), write_truth(w.truth));
    } catch (const std::exception& e) {
      errors[i] = items[i].id + ": " + e.what();
    }
  });

  bool usage_error = false;
  for (const auto& e : errors) {
    if (e.empty()) continue;
    err << "error: " << e << "\n";
    usage_error = true;
  }
  if (usage_error) return kExitUsage;

  json list = json::array();
  for (const auto& item : items) list.push_back({{"id", item.id}, {"params", params_json(item.params)}});
  const json manifest = {{"corpus", corpus_json(opts.corpus)}, {"items", list}};
  write_file(opts.out_dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << items.size() << " word(s) to " << opts.out_dir.string() << "\n";
  return kExitOk;
}

int run_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(opts.truth_dir)) {
    err << "error: not a directory: " << opts.truth_dir.string() << "\n";
    return kExitUsage;
  }
  std::vector<WordTruth> truths;
  std::size_t failed = 0;
  for (const auto& [id, path] : truth_files(opts.truth_dir)) {
    try {
      truths.push_back(parse_truth(read_file(path)));
    } catch (const std::exception& e) {
      err << "error: " << path.string() << ": " << e.what() << "\n";
      ++failed;
    }
  }
  const std::string text = to_json(dataset_stats(truths));
  if (opts.out) {
    write_file(*opts.out, text);
  } else {
    out << text;
  }
  return failed == 0 ? kExitOk : kExitPartial;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sub-word segmentation of handwritten Arabic word images"};
  app.require_subcommand(1);

  // segment
  SegmentOptions seg;
  seg.jobs = default_jobs();
  std::vector<std::string> seg_inputs;
  std::string out_dir, annotate_dir, truth_dir, bridge_rule = "exact2";
  bool no_cgs = false;
  int threshold = -1;
  auto* segment = app.add_subcommand("segment", "Segment word images into sub-word boxes");
  segment->add_option("inputs", seg_inputs, "PGM/PBM files or directories")->required();
  segment->add_option("--out", out_dir, "Directory for <id>.boxes.json (default: beside input)");
  segment->add_option("--annotate", annotate_dir, "Write <id>.ppm with boxes drawn");
  segment->add_option("--truth", truth_dir, "Ground-truth directory; truth boxes are drawn in red");
  segment->add_option("--min-area", seg.pipeline.min_area, "Diacritic size threshold in pixels")
      ->capture_default_str();
  segment->add_flag("--no-cgs", no_cgs, "Disable gap connection");
  segment->add_flag("--skeleton", seg.pipeline.apply_skeleton, "Thin before labelling");
  segment->add_option("--threshold", threshold, "Fixed binarisation threshold (default: Otsu)")
      ->check(CLI::Range(0, 255));
  segment->add_option("--bridge-rule", bridge_rule, "exact2 or matlab")
      ->check(CLI::IsMember({"exact2", "matlab"}))
      ->capture_default_str();
  segment->add_option("--jobs", seg.jobs, "Worker threads (default: $SUBWORDSEG_JOBS)")
      ->check(CLI::PositiveNumber);

  // evaluate
  EvaluateOptions ev;
  std::string pred_dir, eval_truth_dir, report_out = "report.json", tn_policy = "diacritics";
  auto* evaluate = app.add_subcommand("evaluate", "Match predicted boxes against ground truth");
  evaluate->add_option("pred_dir", pred_dir, "Directory of <id>.boxes.json")->required();
  evaluate->add_option("truth_dir", eval_truth_dir, "Directory of <id>.xml")->required();
  evaluate->add_option("--overlap", ev.eval.threshold, "Match threshold (intersection / truth area)")
      ->capture_default_str();
  evaluate->add_option("--excellent", ev.eval.bands.excellent, "Excellent quality bound")
      ->capture_default_str();
  evaluate->add_option("--good", ev.eval.bands.good, "Good quality bound")->capture_default_str();
  evaluate->add_option("--tn-policy", tn_policy, "diacritics or zero")
      ->check(CLI::IsMember({"diacritics", "zero"}))
      ->capture_default_str();
  evaluate->add_option("-o,--out", report_out, "Report path")->capture_default_str();

  // synth
  SynthOptions syn;
  syn.jobs = default_jobs();
  std::string synth_out = "corpus", subwords = "1:8", gap_range;
  int gap = 0, width = 0;
  std::size_t subwords_total = 0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic word corpus with ground truth");
  synth->add_option("--words", syn.corpus.words, "Number of words")->required();
  synth->add_option("--seed", syn.corpus.seed, "Corpus seed")->required();
  synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth->add_option("--gap", gap, "Gap width cut into every sub-word (0 = none)");
  synth->add_option("--gap-range", gap_range, "Per sub-word gap width range lo:hi");
  synth->add_option("--subwords", subwords, "Sub-words per word, lo:hi")->capture_default_str();
  synth->add_option("--subwords-total", subwords_total, "Shape the corpus to this many sub-words");
  synth->add_option("--dots", syn.corpus.dots_max, "Maximum dots per word (0..4)");
  synth->add_option("--thickness", syn.corpus.thickness, "Stroke thickness")->capture_default_str();
  synth->add_option("--width", width, "Canvas width (default: fitted, at least 256)");
  synth->add_option("--height", syn.corpus.canvas_height, "Canvas height")->capture_default_str();
  synth->add_option("--jobs", syn.jobs, "Worker threads (default: $SUBWORDSEG_JOBS)")
      ->check(CLI::PositiveNumber);

  // stats
  StatsOptions st;
  std::string stats_dir, stats_out;
  auto* stats = app.add_subcommand("stats", "Sub-word count histogram of a ground-truth directory");
  stats->add_option("truth_dir", stats_dir, "Directory of <id>.xml")->required();
  stats->add_option("-o,--out", stats_out, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*segment) {
      for (auto& s : seg_inputs) seg.inputs.emplace_back(s);
      if (!out_dir.empty()) seg.out_dir = out_dir;
      if (!annotate_dir.empty()) seg.annotate_dir = annotate_dir;
      if (!truth_dir.empty()) seg.truth_dir = truth_dir;
      if (no_cgs) seg.pipeline.cgs.reset();
      else seg.pipeline.cgs->bridge_rule = bridge_rule == "matlab" ? BridgeRule::MatlabBridge : BridgeRule::ExactlyTwo;
      if (threshold >= 0) seg.pipeline.threshold = threshold;
      return run_segment(seg, out, err);
    }
    if (*evaluate) {
      ev.pred_dir = pred_dir;
      ev.truth_dir = eval_truth_dir;
      ev.out = report_out;
      ev.eval.tn_policy = tn_policy == "zero" ? TnPolicy::Zero : TnPolicy::DiacriticsAsTN;
      return run_evaluate(ev, out, err);
    }
    if (*synth) {
      syn.out_dir = synth_out;
      std::tie(syn.corpus.subwords_min, syn.corpus.subwords_max) = parse_range(subwords, "sub-word");
      if (!gap_range.empty()) {
        std::tie(syn.corpus.gap_min, syn.corpus.gap_max) = parse_range(gap_range, "gap");
      } else {
        syn.corpus.gap_min = syn.corpus.gap_max = gap;
      }
      if (subwords_total > 0) syn.corpus.subwords_total = subwords_total;
      if (width > 0) syn.corpus.canvas_width = width;
      return run_synth(syn, out, err);
    }
    if (*stats) {
      st.truth_dir = stats_dir;
      if (!stats_out.empty()) st.out = stats_out;
      return run_stats(st, out, err);
    }
  } catch (const ParamError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitUsage;
}

}  // namespace subwordseg::cli
