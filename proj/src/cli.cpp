// Copyright 2026 The pctadw Authors.
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

#include "pctadw/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pctadw/analogy.hpp"
#include "pctadw/checkpoint.hpp"
#include "pctadw/classify.hpp"
#include "pctadw/dataset.hpp"
#include "pctadw/embedding_io.hpp"
#include "pctadw/errors.hpp"
#include "pctadw/pca.hpp"
#include "pctadw/trainer.hpp"

#ifndef PCTADW_GIT_DESCRIBE
#define PCTADW_GIT_DESCRIBE "unknown"
#endif

namespace pctadw {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct UsageError : Error {
  using Error::Error;
};

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// FNV-1a over the file bytes, hex.
std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct DatasetOptions {
  std::string dir;
  std::string stopwords = "english";
  std::uint64_t min_count = 1;
  bool break_cycles = false;

  void add_to(CLI::App& cmd, bool positional) {
    if (positional) {
      cmd.add_option("dataset", dir, "Dataset directory (edges.tsv, docs.tsv, labels.tsv)");
    } else {
      cmd.add_option("--dataset", dir, "Dataset directory");
    }
    cmd.add_option("--stopwords", stopwords, "Stopword list: english, none, or a file")
        ->capture_default_str();
    cmd.add_option("--min-count", min_count, "Drop words rarer than this")->capture_default_str();
    cmd.add_flag("--break-cycles", break_cycles, "Drop the last edge of each cycle on load");
  }

  fs::path resolved_dir() const {
    if (!dir.empty()) return dir;
    if (const char* env = std::getenv(kDatasetEnv)) return env;
    throw UsageError(std::string("no dataset directory given and ") + kDatasetEnv + " is unset");
  }

  LoadOptions load_options() const {
    LoadOptions o;
    if (stopwords == "english") {
      o.tokenizer = TokenizerConfig::english();
    } else if (stopwords != "none") {
      std::ifstream in(stopwords);
      if (!in) throw UsageError("cannot read stopword file " + stopwords);
      std::string w;
      while (in >> w) o.tokenizer.stopwords.insert(w);
    }
    o.tokenizer.min_count = min_count;
    o.break_cycles = break_cycles;
    return o;
  }

  Dataset load() const { return load_dataset(DatasetPaths::in_directory(resolved_dir()), load_options()); }

  json describe() const {
    const auto d = resolved_dir();
    const auto paths = DatasetPaths::in_directory(d);
    return json{{"dir", d.string()},
                {"stopwords", stopwords},
                {"min_count", min_count},
                {"break_cycles", break_cycles},
                {"edges_fnv1a", file_hash(paths.edges)},
                {"docs_fnv1a", file_hash(paths.docs)},
                {"labels_fnv1a", file_hash(paths.labels)}};
  }
};

void write_manifest(const fs::path& path, const std::string& command, json config,
                    const json& dataset, std::uint64_t seed, const std::string& started) {
  json m;
  m["command"] = command;
  m["config"] = std::move(config);
  m["dataset"] = dataset;
  m["seed"] = seed;
  m["started_at"] = started;
  m["finished_at"] = now_utc();
  m["git_describe"] = PCTADW_GIT_DESCRIBE;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << m.dump(2) << '\n';
}

// Representations from either a checkpoint (rows in dataset order) or a
// text embedding file (rows matched by name).
struct EmbeddingSource {
  std::string checkpoint;
  std::string embeddings;

  void add_to(CLI::App& cmd) {
    auto* c = cmd.add_option("--checkpoint", checkpoint, "Model checkpoint");
    auto* e = cmd.add_option("--embeddings", embeddings, "word2vec-format text embeddings");
    c->excludes(e);
  }

  void require() const {
    if (checkpoint.empty() && embeddings.empty()) {
      throw UsageError("one of --checkpoint or --embeddings is required");
    }
  }
};

Eigen::MatrixXd checkpoint_representations(const std::string& path, std::size_t node_count) {
  auto model = load_checkpoint(path);
  if (model.node_count() != node_count) {
    throw ValidationError("checkpoint has " + std::to_string(model.node_count()) +
                          " nodes but the dataset has " + std::to_string(node_count));
  }
  return model.representations().cast<double>();
}

// Rows aligned to `names`; nodes listed in `required` must be present.
Eigen::MatrixXd aligned_representations(const NamedEmbedding& e,
                                        const std::vector<std::string>& names,
                                        const std::vector<NodeId>& required) {
  std::unordered_map<std::string, Eigen::Index> rows;
  for (std::size_t i = 0; i < e.names.size(); ++i) rows.emplace(e.names[i], static_cast<Eigen::Index>(i));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(names.size()), e.vectors.cols());
  std::vector<bool> found(names.size(), false);
  for (std::size_t v = 0; v < names.size(); ++v) {
    auto it = rows.find(names[v]);
    if (it == rows.end()) continue;
    out.row(static_cast<Eigen::Index>(v)) = e.vectors.row(it->second);
    found[v] = true;
  }
  for (auto v : required) {
    if (!found[v]) throw LookupError("no embedding for node '" + names[v] + "'");
  }
  return out;
}

int cmd_validate(const DatasetOptions& data, bool allow_cycles, bool as_json, std::ostream& out) {
  auto ds = data.load();
  auto cycles = detect_cycles(ds.graph);
  std::size_t tokens = 0;
  for (const auto& d : ds.documents) tokens += d.length();
  std::size_t labeled = 0;
  for (NodeId v = 0; v < ds.graph.node_count(); ++v) labeled += ds.labels.labeled(v);

  if (as_json) {
    json j;
    j["nodes"] = ds.graph.node_count();
    j["edges"] = ds.graph.edge_count();
    j["labels"] = ds.labels.label_count();
    j["labeled_nodes"] = labeled;
    j["vocabulary"] = ds.vocabulary.size();
    j["tokens"] = tokens;
    j["cycles"] = json::array();
    for (const auto& c : cycles) {
      json names = json::array();
      for (auto v : c) names.push_back(ds.graph.name(v));
      j["cycles"].push_back(names);
    }
    out << j.dump(2) << '\n';
  } else {
    out << "nodes\t" << ds.graph.node_count() << '\n'
        << "edges\t" << ds.graph.edge_count() << '\n'
        << "labels\t" << ds.labels.label_count() << '\n'
        << "labeled_nodes\t" << labeled << '\n'
        << "vocabulary\t" << ds.vocabulary.size() << '\n'
        << "tokens\t" << tokens << '\n'
        << "cycles\t" << cycles.size() << '\n';
    for (const auto& c : cycles) {
      out << "cycle\t[";
      for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
      out << "]\t";
      for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " -> " : "") << ds.graph.name(c[i]);
      out << '\n';
    }
  }
  return cycles.empty() || allow_cycles ? kExitOk : kExitFailure;
}

struct TrainFlags {
  std::string arch = "pctadw2";
  int dim = 128;
  int epochs = 100;
  int s = 2;
  int m = 5;
  std::string mode = "negative_sampling";
  int negatives = 5;
  std::uint64_t seed = 1;
  int workers = 1;
  int checkpoint_interval = 0;
  double learning_rate = 0.001;
  std::string out = "run";
  std::string resume;
  std::string config;
  bool quiet = false;

  json to_json() const {
    return json{{"arch", arch},     {"dim", dim},   {"epochs", epochs},
                {"s", s},           {"m", m},       {"mode", mode},
                {"negatives", negatives},           {"seed", seed},
                {"workers", workers},               {"learning_rate", learning_rate},
                {"checkpoint_interval", checkpoint_interval}};
  }
};

// Values from a previous run manifest fill every flag not given explicitly.
void apply_manifest(TrainFlags& f, const CLI::App& cmd) {
  std::ifstream in(f.config);
  if (!in) throw UsageError("cannot read config " + f.config);
  json m = json::parse(in, nullptr, false);
  if (m.is_discarded() || !m.contains("config")) throw UsageError("bad run manifest " + f.config);
  const auto& c = m["config"];
  auto take = [&](const char* key, const char* flag, auto& field) {
    if (c.contains(key) && cmd.count(flag) == 0) c.at(key).get_to(field);
  };
  take("arch", "--arch", f.arch);
  take("dim", "--dim", f.dim);
  take("epochs", "--epochs", f.epochs);
  take("s", "--s", f.s);
  take("m", "--m", f.m);
  take("mode", "--mode", f.mode);
  take("negatives", "--negatives", f.negatives);
  take("seed", "--seed", f.seed);
  take("workers", "--workers", f.workers);
  take("learning_rate", "--learning-rate", f.learning_rate);
  take("checkpoint_interval", "--checkpoint-interval", f.checkpoint_interval);
}

int cmd_train(TrainFlags f, const CLI::App& cmd, const DatasetOptions& data, std::ostream& out) {
  const auto started = now_utc();
  if (!f.config.empty()) apply_manifest(f, cmd);

  TrainConfig cfg;
  cfg.epochs = f.epochs;
  cfg.sampler.walk_length = f.s;
  cfg.sampler.max_repeats = f.m;
  cfg.model.architecture = parse_architecture(f.arch);
  cfg.model.dim = f.dim;
  cfg.model.loss_mode = parse_loss_mode(f.mode);
  cfg.model.negatives = f.negatives;
  cfg.model.adam.learning_rate = f.learning_rate;
  cfg.seed = f.seed;
  cfg.workers = f.workers;
  cfg.checkpoint_interval = f.checkpoint_interval;
  if (f.resume.empty()) {
    cfg.validate();
  } else {
    if (f.epochs < 0) throw ConfigError("epochs must be >= 0");
  }

  out << "config arch=" << to_string(cfg.model.architecture) << " dim=" << cfg.model.dim
      << " epochs=" << cfg.epochs << " s=" << cfg.sampler.walk_length
      << " m=" << cfg.sampler.max_repeats << " mode=" << to_string(cfg.model.loss_mode)
      << " negatives=" << cfg.model.negatives << " lr=" << cfg.model.adam.learning_rate
      << " seed=" << cfg.seed << " workers=" << cfg.workers << '\n';

  auto ds = data.load();
  const fs::path dir = f.out;
  fs::create_directories(dir);
  cfg.checkpoint_path = dir / "model.ckpt";
  if (!f.quiet) {
    cfg.on_epoch = [&out](const EpochLoss& e) {
      out << "epoch " << e.epoch << " samples=" << e.samples << " word=" << e.word
          << " child=" << e.child << " parent=" << e.parent << '\n';
    };
  }

  auto result = f.resume.empty() ? train(ds, cfg) : resume(f.resume, ds, cfg);
  write_loss_csv(dir / "loss.csv", result.log);
  auto config = f.to_json();
  if (!f.resume.empty()) config["resumed_from"] = f.resume;
  write_manifest(dir / "manifest.json", "train", config, data.describe(), cfg.seed, started);
  out << "wrote " << cfg.checkpoint_path.string() << '\n';
  return kExitOk;
}

int cmd_classify(const EmbeddingSource& src, const DatasetOptions& data,
                 std::vector<double> fractions, std::uint64_t seed, const std::string& out_dir,
                 std::ostream& out) {
  const auto started = now_utc();
  src.require();
  auto ds = data.load();
  std::vector<NodeId> labeled;
  for (NodeId v = 0; v < ds.graph.node_count(); ++v) {
    if (ds.labels.labeled(v)) labeled.push_back(v);
  }
  const Eigen::MatrixXd reps =
      src.checkpoint.empty()
          ? aligned_representations(read_text_embedding(src.embeddings), ds.graph.names(), labeled)
          : checkpoint_representations(src.checkpoint, ds.graph.node_count());

  auto report = classify(reps, ds.labels, fractions, LogisticConfig{}, seed);

  const fs::path dir = out_dir;
  fs::create_directories(dir);
  std::ofstream csv(dir / "classification.csv", std::ios::trunc);
  csv << "fraction,fold,micro_f1\n" << std::setprecision(17);
  json summary = json::array();
  for (const auto& fr : report.fractions) {
    for (std::size_t k = 0; k < fr.fold_micro_f1.size(); ++k) {
      csv << fr.fraction << ',' << k << ',' << fr.fold_micro_f1[k] << '\n';
    }
    summary.push_back({{"fraction", fr.fraction},
                       {"folds", fr.folds},
                       {"micro_f1", fr.micro_f1},
                       {"mean_fold_micro_f1", fr.mean_fold_micro_f1}});
    out << "fraction " << fr.fraction << " folds " << fr.folds << " micro_f1 " << std::fixed
        << std::setprecision(4) << fr.micro_f1 << std::defaultfloat << '\n';
  }
  std::ofstream js(dir / "classification.json", std::ios::trunc);
  js << json{{"results", summary}}.dump(2) << '\n';
  json config{{"checkpoint", src.checkpoint}, {"embeddings", src.embeddings}, {"fractions", fractions}};
  write_manifest(dir / "manifest.json", "classify", config, data.describe(), seed, started);
  return kExitOk;
}

struct NamedVectors {
  std::vector<std::string> names;
  Eigen::MatrixXd vectors;
};

NamedVectors load_named(const EmbeddingSource& src, const DatasetOptions& data) {
  src.require();
  if (!src.embeddings.empty()) {
    auto e = read_text_embedding(src.embeddings);
    return {std::move(e.names), std::move(e.vectors)};
  }
  auto ds = data.load();
  return {ds.graph.names(), checkpoint_representations(src.checkpoint, ds.graph.node_count())};
}

int cmd_analogy(const EmbeddingSource& src, const DatasetOptions& data, const std::string& pairs_path,
                const std::string& anchor, const std::string& metric_name, const std::string& out_dir,
                std::ostream& out) {
  const auto started = now_utc();
  Metric metric = Metric::euclidean;
  if (metric_name == "cosine") {
    metric = Metric::cosine;
  } else if (metric_name != "euclidean") {
    throw UsageError("unknown metric '" + metric_name + "'");
  }
  auto nv = load_named(src, data);
  auto pairs = read_analogy_pairs(pairs_path, nv.names);

  AnalogyResult result;
  if (anchor.empty()) {
    result = analogy_all_pairs(nv.vectors, pairs, metric);
  } else {
    auto comma = anchor.find(',');
    if (comma == std::string::npos) throw UsageError("--anchor expects 'first,second'");
    auto a = resolve_pair(anchor.substr(0, comma), anchor.substr(comma + 1), nv.names);
    result = analogy_with_anchor(nv.vectors, pairs, a, metric);
  }

  const fs::path dir = out_dir;
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "analogy.csv", std::ios::trunc);
    csv << "test_id,rank\n";
    for (std::size_t i = 0; i < result.tests.size(); ++i) csv << i << ',' << result.tests[i].rank << '\n';
  }
  {
    std::ofstream csv(dir / "analogy_tests.tsv", std::ios::trunc);
    csv << "test_id\ta1\ta2\tb1\tb2\trank\n";
    for (std::size_t i = 0; i < result.tests.size(); ++i) {
      const auto& t = result.tests[i];
      csv << i << '\t' << nv.names[t.a.first] << '\t' << nv.names[t.a.second] << '\t'
          << nv.names[t.b.first] << '\t' << nv.names[t.b.second] << '\t' << t.rank << '\n';
    }
  }
  {
    std::ofstream csv(dir / "analogy_histogram.csv", std::ios::trunc);
    csv << "rank,cumulative_count\n";
    for (std::size_t r = 0; r < result.cumulative.size(); ++r) {
      csv << r + 1 << ',' << result.cumulative[r] << '\n';
    }
  }
  std::size_t top1 = result.cumulative.empty() ? 0 : result.cumulative[0];
  std::size_t top10 = result.cumulative.empty() ? 0 : result.cumulative[std::min<std::size_t>(9, result.cumulative.size() - 1)];
  std::ofstream js(dir / "analogy.json", std::ios::trunc);
  js << json{{"tests", result.tests.size()}, {"rank_1", top1}, {"rank_le_10", top10}}.dump(2) << '\n';
  out << "tests " << result.tests.size() << " rank1 " << top1 << " rank<=10 " << top10 << '\n';
  json config{{"checkpoint", src.checkpoint}, {"embeddings", src.embeddings},
              {"pairs", pairs_path},          {"anchor", anchor},
              {"metric", metric_name}};
  json dataset = src.checkpoint.empty() ? json{} : data.describe();
  write_manifest(dir / "manifest.json", "analogy", config, dataset, 0, started);
  return kExitOk;
}

int cmd_export(const EmbeddingSource& src, const DatasetOptions& data, const std::string& text,
               const std::string& pca, std::ostream& out) {
  if (text.empty() && pca.empty()) throw UsageError("nothing to export: give --text and/or --pca");
  auto nv = load_named(src, data);
  if (!text.empty()) {
    write_text_embedding(text, nv.names, nv.vectors.cast<float>());
    out << "wrote " << text << '\n';
  }
  if (!pca.empty()) {
    auto r = pca_project(nv.vectors, 2);
    std::ofstream tsv(pca, std::ios::trunc);
    if (!tsv) throw Error("cannot write " + pca);
    tsv << std::setprecision(9);
    for (Eigen::Index i = 0; i < r.coordinates.rows(); ++i) {
      tsv << nv.names[static_cast<std::size_t>(i)] << '\t' << r.coordinates(i, 0) << '\t'
          << r.coordinates(i, 1) << '\n';
    }
    out << "wrote " << pca << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed, text-attributed network embeddings and their evaluation", "pctadw"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Load a dataset, report counts and cycles");
  DatasetOptions validate_data;
  bool allow_cycles = false, as_json = false;
  validate_data.add_to(*validate, true);
  validate->add_flag("--allow-cycles", allow_cycles, "Exit 0 even if the graph has cycles");
  validate->add_flag("--json", as_json, "Print the report as JSON");

  auto* train_cmd = app.add_subcommand("train", "Train an embedding model");
  DatasetOptions train_data;
  TrainFlags tf;
  train_data.add_to(*train_cmd, true);
  train_cmd->add_option("--arch", tf.arch, "pctadw1 or pctadw2")->capture_default_str();
  train_cmd->add_option("--dim", tf.dim, "Representation dimension")->capture_default_str();
  train_cmd->add_option("--epochs", tf.epochs, "Epochs (additional epochs with --resume)")->capture_default_str();
  train_cmd->add_option("--s", tf.s, "Walk length")->capture_default_str();
  train_cmd->add_option("--m", tf.m, "Cap on samples per node and epoch")->capture_default_str();
  train_cmd->add_option("--mode", tf.mode, "exact_softmax or negative_sampling")->capture_default_str();
  train_cmd->add_option("--negatives", tf.negatives, "Noise draws per head")->capture_default_str();
  train_cmd->add_option("--seed", tf.seed, "Master seed")->capture_default_str();
  train_cmd->add_option("--workers", tf.workers, "Worker threads (1 is deterministic)")->capture_default_str();
  train_cmd->add_option("--learning-rate", tf.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--checkpoint-interval", tf.checkpoint_interval, "Checkpoint every N epochs")->capture_default_str();
  train_cmd->add_option("--out", tf.out, "Output directory")->capture_default_str();
  train_cmd->add_option("--resume", tf.resume, "Continue from this checkpoint");
  train_cmd->add_option("--config", tf.config, "Take unset flags from a run manifest");
  train_cmd->add_flag("--quiet", tf.quiet, "No per-epoch output");

  auto* classify_cmd = app.add_subcommand("classify", "Reversed k-fold node classification");
  DatasetOptions classify_data;
  EmbeddingSource classify_src;
  std::vector<double> fractions = kDefaultFractions;
  std::uint64_t classify_seed = 1;
  std::string classify_out = "classify";
  classify_data.add_to(*classify_cmd, false);
  classify_src.add_to(*classify_cmd);
  classify_cmd->add_option("--fractions", fractions, "Training fractions")->delimiter(',');
  classify_cmd->add_option("--seed", classify_seed, "Fold seed")->capture_default_str();
  classify_cmd->add_option("--out", classify_out, "Output directory")->capture_default_str();

  auto* analogy_cmd = app.add_subcommand("analogy", "Analogy rank tests");
  DatasetOptions analogy_data;
  EmbeddingSource analogy_src;
  std::string pairs_path, anchor, metric = "euclidean", analogy_out = "analogy";
  analogy_data.add_to(*analogy_cmd, false);
  analogy_src.add_to(*analogy_cmd);
  analogy_cmd->add_option("--pairs", pairs_path, "TSV of 'first<TAB>second' node names")->required();
  analogy_cmd->add_option("--anchor", anchor, "Fix (a1,a2) to 'first,second'");
  analogy_cmd->add_option("--metric", metric, "euclidean or cosine")->capture_default_str();
  analogy_cmd->add_option("--out", analogy_out, "Output directory")->capture_default_str();

  auto* export_cmd = app.add_subcommand("export", "Export vectors as text or 2-D PCA");
  DatasetOptions export_data;
  EmbeddingSource export_src;
  std::string text_out, pca_out;
  export_data.add_to(*export_cmd, false);
  export_src.add_to(*export_cmd);
  export_cmd->add_option("--text", text_out, "word2vec text output");
  export_cmd->add_option("--pca", pca_out, "TSV 'node<TAB>x<TAB>y' output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_data, allow_cycles, as_json, out);
    if (train_cmd->parsed()) return cmd_train(tf, *train_cmd, train_data, out);
    if (classify_cmd->parsed()) {
      return cmd_classify(classify_src, classify_data, fractions, classify_seed, classify_out, out);
    }
    if (analogy_cmd->parsed()) {
      return cmd_analogy(analogy_src, analogy_data, pairs_path, anchor, metric, analogy_out, out);
    }
    if (export_cmd->parsed()) return cmd_export(export_src, export_data, text_out, pca_out, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const LookupError& e) {
    err << "lookup error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const IncompatibleCheckpoint& e) {
    err << "incompatible checkpoint (" << e.field() << "): " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace pctadw
