/* Copyright (c) 2026 The VocabForge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "vocabforge/cli.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "vocabforge/affine.hpp"
#include "vocabforge/analysis.hpp"
#include "vocabforge/embedding.hpp"
#include "vocabforge/error.hpp"
#include "vocabforge/heuristics.hpp"
#include "vocabforge/io.hpp"
#include "vocabforge/parallel.hpp"
#include "vocabforge/report.hpp"
#include "vocabforge/tokenizer.hpp"

namespace vocabforge {

namespace {

template <typename T>
Json EchoValue(const T& v) {
  return Json(v);
}

// Binds flags to variables and remembers how to echo each one, so every
// report can carry the fully resolved configuration.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* Option(const std::string& name, T& var, const std::string& help) {
    echo_.emplace_back(name, [&var] { return EchoValue(var); });
    return app_->add_option("--" + name, var, help);
  }

  CLI::Option* Flag(const std::string& name, bool& var, const std::string& help) {
    echo_.emplace_back(name, [&var] { return Json(var); });
    flags_.insert(name);
    return app_->add_flag("--" + name, var, help);
  }

  bool Knows(const std::string& name) const {
    for (const auto& [n, _] : echo_) {
      if (n == name) return true;
    }
    return false;
  }
  bool IsFlag(const std::string& name) const { return flags_.count(name) > 0; }

  Json Resolved() const {
    Json j;
    for (const auto& [name, get] : echo_) j[name] = get();
    return j;
  }

  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<Json()>>> echo_;
  std::set<std::string> flags_;
};

struct Common {
  std::string config;
  unsigned threads = DefaultThreads();
  std::string out;
};

void AddCommon(FlagSet& flags, Common& common, bool out_flag) {
  flags.Option("config", common.config, "Flat JSON object of flag values; explicit flags win");
  flags.Option("threads", common.threads, "Worker thread cap (default: $VOCABFORGE_THREADS)")
      ->check(CLI::PositiveNumber);
  if (out_flag) flags.Option("out", common.out, "Write the JSON report here instead of stdout");
}

Json Envelope(const std::string& command, const FlagSet& flags) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = flags.Resolved();
  return j;
}

void Emit(const Json& report, const std::string& path, std::ostream& out) {
  std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    WriteFile(path, text);
  }
}

std::optional<MarkerConvention> MarkerArg(const std::string& name) {
  if (name.empty() || name == "auto") return std::nullopt;
  return ParseMarker(name);
}

MarkerConvention ResolveMarker(const std::string& name, const Vocabulary& vocab) {
  auto m = MarkerArg(name);
  return m ? *m : DetectMarker(vocab);
}

const std::vector<std::string> kMarkerChoices = {"auto", "meta-space", "byte-marker", "none"};

// Appends values from --config for flags not given explicitly.
std::vector<std::string> MergeConfig(const std::vector<std::string>& args,
                                     const std::map<std::string, FlagSet*>& commands) {
  if (args.empty() || !commands.count(args[0])) return args;
  const FlagSet& flags = *commands.at(args[0]);

  std::string config_path;
  std::set<std::string> explicit_flags;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (!a.starts_with("--")) continue;
    std::string name = a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                     : a.find('=') - 2);
    explicit_flags.insert(name);
    if (name == "config") {
      if (a.find('=') != std::string::npos) {
        config_path = a.substr(a.find('=') + 1);
      } else if (i + 1 < args.size()) {
        config_path = args[i + 1];
      }
    }
  }
  if (config_path.empty()) return args;

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ReadFile(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, config_path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, config_path + ": config must be a JSON object");
  }
  std::vector<std::string> merged = args;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "config" || !flags.Knows(key)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown key '" + key + "' in " + config_path + " for " + args[0]);
    }
    if (explicit_flags.count(key)) continue;
    const auto& value = it.value();
    if (flags.IsFlag(key)) {
      if (!value.is_boolean()) {
        throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "' must be a boolean");
      }
      if (value.get<bool>()) merged.push_back("--" + key);
      continue;
    }
    if (value.is_object() || value.is_array() || value.is_null()) {
      throw Error(ErrorCode::kInvalidArgument, "config key '" + key + "' must be a scalar");
    }
    merged.push_back("--" + key);
    merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return merged;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vocabulary adaptation and tokenizer analysis toolkit", "vocabforge"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::map<std::string, FlagSet*> commands;
  std::vector<std::unique_ptr<FlagSet>> owned;
  auto make = [&](const std::string& name, const std::string& help) -> FlagSet& {
    owned.push_back(std::make_unique<FlagSet>(app.add_subcommand(name, help)));
    commands[name] = owned.back().get();
    return *owned.back();
  };

  // ---- intersect
  struct {
    Common common;
    std::string source_vocab, target_vocab, source_marker = "auto", target_marker = "auto";
  } ix;
  FlagSet& intersect = make("intersect", "Shared and novel tokens between two vocabularies");
  intersect.Option("source-vocab", ix.source_vocab, "Source vocab JSON or tokenizer.json")->required();
  intersect.Option("target-vocab", ix.target_vocab, "Target vocab JSON or tokenizer.json")->required();
  intersect.Option("source-marker", ix.source_marker, "Source word-boundary convention")
      ->check(CLI::IsMember(kMarkerChoices));
  intersect.Option("target-marker", ix.target_marker, "Target word-boundary convention")
      ->check(CLI::IsMember(kMarkerChoices));
  AddCommon(intersect, ix.common, false);
  intersect.Option("out", ix.common.out, "Partition report JSON (input to fit-map)")->required();

  // ---- stats
  struct {
    Common common;
    std::string matrix;
    bool json = false;
  } st;
  FlagSet& stats = make("stats", "Per-dimension and scalar moments of an EMB1 matrix");
  stats.Option("matrix", st.matrix, "EMB1 file")->required();
  stats.Flag("json", st.json, "Emit the full JSON report");
  AddCommon(stats, st.common, true);

  // ---- fit-map
  struct {
    Common common;
    std::string helper_emb, source_emb, partition;
    std::size_t limit = 0;
    int steps = 1000;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    double ridge_lambda = 1e-6;
    bool l2_normalize = false;
    std::string report;
  } fm;
  FlagSet& fit = make("fit-map", "Train the helper-to-source affine map on shared tokens");
  fit.Option("helper-emb", fm.helper_emb, "Helper EMB1 (target vocabulary rows)")->required();
  fit.Option("source-emb", fm.source_emb, "Source EMB1 (source vocabulary rows)")->required();
  fit.Option("partition", fm.partition, "Partition report written by intersect")->required();
  fit.Option("limit", fm.limit, "Train on a seeded subset of N shared tokens (0 = all)");
  fit.Option("steps", fm.steps, "Adam steps")->check(CLI::PositiveNumber);
  fit.Option("lr", fm.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  fit.Option("seed", fm.seed, "Seed for initialization and subsampling");
  fit.Option("ridge-lambda", fm.ridge_lambda, "Ridge term of the closed-form oracle");
  fit.Flag("l2-normalize", fm.l2_normalize, "L2-normalize scaled inputs before the affine layer");
  fit.Option("out", fm.common.out, "Map file (EMB1 blocks; metadata in <out>.json)")->required();
  fit.Option("config", fm.common.config, "Flat JSON object of flag values; explicit flags win");
  fit.Option("threads", fm.common.threads, "Worker thread cap")->check(CLI::PositiveNumber);
  fit.Option("report", fm.report, "Write the fit report here instead of stdout");

  // ---- adapt
  struct {
    Common common;
    std::string method = "fvt", source_emb, source_vocab, source_merges, target_vocab,
                target_merges, helper_emb, report;
    std::string source_marker = "auto", target_marker = "auto";
    std::uint64_t seed = 0;
    std::size_t clp_top_k = 0;
    std::string clp_negative_policy = "clamp-zero", random_moments = "per-dimension",
                fallback = "random";
    int steps = 1000;
    double lr = 1e-3;
    bool l2_normalize = false;
    std::size_t limit = 0;
    std::string source_head, helper_head, out_head;
    bool verbose_report = false;
  } ad;
  FlagSet& adapt = make("adapt", "Build target-vocabulary embeddings from a source model");
  adapt.Option("method", ad.method, "Initializer for novel tokens")
      ->required()
      ->check(CLI::IsMember({"random", "fvt", "clp", "sava"}));
  adapt.Option("source-emb", ad.source_emb, "Source input-embedding EMB1")->required();
  adapt.Option("source-vocab", ad.source_vocab, "Source vocab JSON or tokenizer.json")->required();
  adapt.Option("source-merges", ad.source_merges, "Source merges.txt");
  adapt.Option("target-vocab", ad.target_vocab, "Target vocab JSON or tokenizer.json")->required();
  adapt.Option("target-merges", ad.target_merges, "Target merges.txt");
  adapt.Option("helper-emb", ad.helper_emb, "Helper EMB1 over the target vocabulary (clp, sava)");
  adapt.Option("source-marker", ad.source_marker, "Source word-boundary convention")
      ->check(CLI::IsMember(kMarkerChoices));
  adapt.Option("target-marker", ad.target_marker, "Target word-boundary convention")
      ->check(CLI::IsMember(kMarkerChoices));
  adapt.Option("seed", ad.seed, "Seed for random rows, fallbacks and map training");
  adapt.Option("clp-top-k", ad.clp_top_k, "Restrict CLP to the K most similar shared tokens (0 = dense)");
  adapt.Option("clp-negative-policy", ad.clp_negative_policy, "Negative cosine handling")
      ->check(CLI::IsMember({"clamp-zero", "shift-min", "absolute"}));
  adapt.Option("random-moments", ad.random_moments, "Moments for random rows")
      ->check(CLI::IsMember({"per-dimension", "scalar"}));
  adapt.Option("fallback", ad.fallback, "Row used when fvt/clp cannot initialize a token")
      ->check(CLI::IsMember({"random", "mean-row"}));
  adapt.Option("steps", ad.steps, "Adam steps for the sava map")->check(CLI::PositiveNumber);
  adapt.Option("lr", ad.lr, "Adam learning rate for the sava map")->check(CLI::PositiveNumber);
  adapt.Flag("l2-normalize", ad.l2_normalize, "L2-normalize scaled helper rows (sava)");
  adapt.Option("limit", ad.limit, "Train the sava map on N shared tokens (0 = all)");
  adapt.Option("source-head", ad.source_head, "Untied LM head EMB1, adapted separately");
  adapt.Option("helper-head", ad.helper_head, "Helper head EMB1 for the head pass (default: helper-emb)");
  adapt.Option("out-head", ad.out_head, "Output EMB1 for the adapted head");
  adapt.Option("out", ad.common.out, "Output EMB1 for the adapted embeddings")->required();
  adapt.Option("report", ad.report, "Adaptation report JSON")->required();
  adapt.Flag("verbose-report", ad.verbose_report, "Include per-token provenance");
  adapt.Option("config", ad.common.config, "Flat JSON object of flag values; explicit flags win");
  adapt.Option("threads", ad.common.threads, "Worker thread cap")->check(CLI::PositiveNumber);

  // ---- fertility
  struct {
    Common common;
    std::string vocab, merges, corpus, marker = "auto", histogram = "fertility_histogram.csv";
    bool per_doc = false;
  } fe;
  FlagSet& fert = make("fertility", "Tokens per whitespace-delimited word over a corpus");
  fert.Option("vocab", fe.vocab, "Vocab JSON or tokenizer.json")->required();
  fert.Option("merges", fe.merges, "merges.txt");
  fert.Option("corpus", fe.corpus, "Text file (one document per line) or directory of .txt")
      ->required();
  fert.Option("marker", fe.marker, "Word-boundary convention")->check(CLI::IsMember(kMarkerChoices));
  fert.Flag("per-doc", fe.per_doc, "Include per-document counts in the report");
  fert.Option("histogram", fe.histogram, "Per-document fertility histogram CSV");
  AddCommon(fert, fe.common, true);

  // ---- similarity
  struct {
    Common common;
    std::string emb_a, emb_b, vocab, marker = "auto", projection = "cosine";
    std::uint64_t seed = 0;
    std::size_t n_prefix = 128, n_nonprefix = 128, sample = 0;
  } si;
  FlagSet& sim = make("similarity", "Relative-representation similarity of two embedding spaces");
  sim.Option("emb-a", si.emb_a, "First EMB1 (target vocabulary rows)")->required();
  sim.Option("emb-b", si.emb_b, "Second EMB1 (same vocabulary)")->required();
  sim.Option("vocab", si.vocab, "Shared vocab JSON or tokenizer.json")->required();
  sim.Option("seed", si.seed, "Seed for anchor and token sampling");
  sim.Option("n-prefix", si.n_prefix, "Anchors starting with the word-boundary marker");
  sim.Option("n-nonprefix", si.n_nonprefix, "Anchors without the marker");
  sim.Option("sample", si.sample, "Average over N sampled tokens (0 = all)");
  sim.Option("marker", si.marker, "Word-boundary convention")->check(CLI::IsMember(kMarkerChoices));
  sim.Option("projection", si.projection, "Relative projection")
      ->check(CLI::IsMember({"cosine", "dot"}));
  AddCommon(sim, si.common, true);

  // ---- params
  struct {
    Common common;
    std::uint64_t before = 0, after = 0, dim = 0, base = 0;
    bool tied = false;
  } pa;
  FlagSet& params = make("params", "Parameter counts before and after a vocabulary swap");
  params.Option("before", pa.before, "Vocabulary size before")->required();
  params.Option("after", pa.after, "Vocabulary size after")->required();
  params.Option("dim", pa.dim, "Embedding dimension")->required();
  params.Flag("tied", pa.tied, "Embedding and LM head share parameters");
  params.Option("base", pa.base, "Non-embedding parameter count")->required();
  AddCommon(params, pa.common, true);

  try {
    std::vector<std::string> merged = MergeConfig(args, commands);
    std::vector<std::string> argv_storage;
    argv_storage.reserve(merged.size() + 1);
    argv_storage.push_back("vocabforge");
    argv_storage.insert(argv_storage.end(), merged.begin(), merged.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      CLI::App* failed = &app;
      for (auto* sub : app.get_subcommands()) failed = sub;
      err << failed->help();
      return kExitValidation;
    }

    if (app.got_subcommand("intersect")) {
      Vocabulary source = LoadVocabulary(ix.source_vocab);
      Vocabulary target = LoadVocabulary(ix.target_vocab);
      MarkerMap markers{ResolveMarker(ix.source_marker, source),
                        ResolveMarker(ix.target_marker, target), true};
      TokenPartition canonical = Partition(source, target, markers);
      markers.canonicalize = false;
      TokenPartition exact = Partition(source, target, markers);

      Json report = Envelope("intersect", intersect);
      report["shared_count_by_mode"] = {{"canonical", canonical.shared.size()},
                                        {"exact", exact.shared.size()}};
      report["partition"] = PartitionToJson(canonical, true);
      WriteFile(ix.common.out, report.dump(2) + "\n");
      Json summary = Envelope("intersect", intersect);
      summary["shared_count_by_mode"] = report["shared_count_by_mode"];
      summary["partition"] = PartitionToJson(canonical, false);
      out << summary.dump(2) << "\n";
      return kExitOk;
    }

    if (app.got_subcommand("stats")) {
      EmbeddingMatrix m = LoadMatrix(st.matrix);
      EmbeddingStats s = ComputeStats(m);
      if (st.json || !st.common.out.empty()) {
        Json report = Envelope("stats", stats);
        report["stats"] = StatsToJson(s);
        Emit(report, st.common.out, out);
      } else {
        out << "rows " << s.rows << "\ndim " << s.mean.size() << "\nscalar_mean "
            << s.scalar_mean << "\nscalar_variance " << s.scalar_variance << "\n";
      }
      return kExitOk;
    }

    if (app.got_subcommand("fit-map")) {
      EmbeddingMatrix helper = LoadMatrix(fm.helper_emb);
      EmbeddingMatrix source = LoadMatrix(fm.source_emb);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(ReadFile(fm.partition));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kInvalidArgument, fm.partition + ": " + e.what());
      }
      TokenPartition partition = PartitionFromJson(doc);
      std::optional<std::size_t> limit;
      if (fm.limit > 0) limit = fm.limit;
      PairSet pairs = CollectPairs(helper, source, partition, limit, fm.seed);
      TrainConfig cfg;
      cfg.steps = fm.steps;
      cfg.learning_rate = fm.lr;
      cfg.seed = fm.seed;
      cfg.ridge_lambda = fm.ridge_lambda;
      cfg.l2_normalize_inputs = fm.l2_normalize;
      auto [map, fit_report] = FitGradient(pairs, cfg);
      SaveAffineMap(map, fm.common.out);
      Json report = Envelope("fit-map", fit);
      report["fit"] = FitReportToJson(fit_report);
      Emit(report, fm.report, out);
      return kExitOk;
    }

    if (app.got_subcommand("adapt")) {
      HeuristicConfig cfg;
      cfg.method = ParseMethod(ad.method);
      cfg.seed = ad.seed;
      cfg.clp_top_k = ad.clp_top_k;
      cfg.clp_negative_policy = ParseNegativePolicy(ad.clp_negative_policy);
      cfg.random_moments = ParseRandomMoments(ad.random_moments);
      cfg.fallback = ParseFallback(ad.fallback);
      cfg.train.steps = ad.steps;
      cfg.train.learning_rate = ad.lr;
      cfg.train.l2_normalize_inputs = ad.l2_normalize;
      if (ad.limit > 0) cfg.sava_pair_limit = ad.limit;
      cfg.threads = ad.common.threads;
      if (cfg.NeedsHelper() && ad.helper_emb.empty()) {
        throw Error(ErrorCode::kPrecondition,
                    "--helper-emb is required for --method " + ad.method);
      }
      if (ad.source_head.empty() != ad.out_head.empty()) {
        throw Error(ErrorCode::kPrecondition, "--source-head and --out-head go together");
      }

      TokenizerModel source_tok =
          LoadTokenizer(ad.source_vocab, ad.source_merges, MarkerArg(ad.source_marker));
      TokenizerModel target_tok =
          LoadTokenizer(ad.target_vocab, ad.target_merges, MarkerArg(ad.target_marker));
      EmbeddingMatrix source = LoadMatrix(ad.source_emb);
      std::optional<EmbeddingMatrix> helper;
      if (!ad.helper_emb.empty()) helper = LoadMatrix(ad.helper_emb);

      TokenPartition partition =
          Partition(source_tok.vocab(), target_tok.vocab(),
                    MarkerMap{source_tok.marker(), target_tok.marker(), true});
      AdaptResult emb = AdaptWithPartition(source, partition, source_tok, target_tok.marker(),
                                           helper ? &*helper : nullptr, cfg);
      SaveMatrix(emb.matrix, ad.common.out);

      Json report = Envelope("adapt", adapt);
      report["partition"] = PartitionToJson(partition, false);
      report["embeddings"] = AdaptationReportToJson(emb.report, ad.verbose_report);
      if (!ad.source_head.empty()) {
        EmbeddingMatrix head = LoadMatrix(ad.source_head);
        std::optional<EmbeddingMatrix> helper_head;
        if (!ad.helper_head.empty()) helper_head = LoadMatrix(ad.helper_head);
        const EmbeddingMatrix* h = helper_head ? &*helper_head : (helper ? &*helper : nullptr);
        AdaptResult head_result =
            AdaptWithPartition(head, partition, source_tok, target_tok.marker(), h, cfg);
        SaveMatrix(head_result.matrix, ad.out_head);
        report["head"] = AdaptationReportToJson(head_result.report, ad.verbose_report);
      }
      WriteFile(ad.report, report.dump(2) + "\n");
      return kExitOk;
    }

    if (app.got_subcommand("fertility")) {
      TokenizerModel model = LoadTokenizer(fe.vocab, fe.merges, MarkerArg(fe.marker));
      std::vector<std::string> docs = LoadCorpus(fe.corpus);
      FertilityReport r = Fertility(model, docs, {.per_document = true, .threads = fe.common.threads});
      r.corpus_label = fe.corpus;
      r.tokenizer_label = fe.vocab;
      if (!fe.histogram.empty()) WriteFile(fe.histogram, FertilityHistogramCsv(r));
      if (!fe.per_doc) r.per_document.clear();
      Json report = Envelope("fertility", fert);
      report["fertility"] = FertilityToJson(r);
      Emit(report, fe.common.out, out);
      return kExitOk;
    }

    if (app.got_subcommand("similarity")) {
      EmbeddingMatrix a = LoadMatrix(si.emb_a);
      EmbeddingMatrix b = LoadMatrix(si.emb_b);
      Vocabulary vocab = LoadVocabulary(si.vocab);
      if (a.rows() != vocab.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "emb-a rows do not match the vocabulary size");
      }
      auto anchors = SelectAnchors(vocab, ResolveMarker(si.marker, vocab), si.n_prefix,
                                   si.n_nonprefix, si.seed);
      std::optional<std::vector<TokenId>> sample;
      if (si.sample > 0) sample = SampleTokens(a.rows(), si.sample, si.seed);
      std::optional<std::span<const TokenId>> view;
      if (sample) view = std::span<const TokenId>(*sample);
      SimilarityScore score = RelativeSimilarity(
          a, b, anchors, view, si.projection == "dot" ? Projection::kDot : Projection::kCosine,
          si.common.threads);
      score.seed = si.seed;
      Json report = Envelope("similarity", sim);
      report["similarity"] = SimilarityToJson(score);
      Emit(report, si.common.out, out);
      return kExitOk;
    }

    if (app.got_subcommand("params")) {
      ParamCountReport r = ParamReport(pa.before, pa.after, pa.dim, pa.tied, pa.base);
      Json report = Envelope("params", params);
      report["params"] = ParamReportToJson(r);
      Emit(report, pa.common.out, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kIoError ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace vocabforge
