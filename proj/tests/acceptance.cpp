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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. The full-scale check runs only when PCTADW_FULLSCALE_DIR names a
// directory holding debian/ and fedora/ datasets.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pctadw/analogy.hpp"
#include "pctadw/checkpoint.hpp"
#include "pctadw/classify.hpp"
#include "pctadw/model.hpp"
#include "pctadw/sampler.hpp"
#include "pctadw/trainer.hpp"
#include "test_util.hpp"

using namespace pctadw;
using pctadw::testing::TempDir;

namespace {

struct Outcome {
  enum Kind { pass, fail, skip } kind = pass;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

struct Criterion {
  std::string name;
  double budget_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

template <typename M>
bool bitwise_equal(const M& a, const M& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(typename M::Scalar) * static_cast<std::size_t>(a.size())) == 0;
}

bool same_model(const EmbeddingModel<float>& a, const EmbeddingModel<float>& b) {
  for (auto blk : kBlocks) {
    if (!bitwise_equal(a.params(blk), b.params(blk)) || !bitwise_equal(a.first_moment(blk), b.first_moment(blk)) ||
        !bitwise_equal(a.second_moment(blk), b.second_moment(blk)))
      return false;
  }
  return a.step() == b.step() && a.epochs_completed() == b.epochs_completed();
}

// |observed - n p| <= 3 sqrt(n p (1 - p)); cells with p = 0 or 1 must be exact.
bool within_3_sigma(long observed, long n, double p, double* worst_z) {
  if (p <= 0) return observed == 0;
  if (p >= 1) return observed == n;
  const double sd = std::sqrt(static_cast<double>(n) * p * (1 - p));
  const double z = std::abs(static_cast<double>(observed) - static_cast<double>(n) * p) / sd;
  *worst_z = std::max(*worst_z, z);
  return z <= 3.0;
}

Dataset load(const TempDir& dir, const std::string& edges, const std::string& docs, const std::string& labels) {
  pctadw::testing::write_dataset(dir.path(), edges, docs, labels);
  LoadOptions opts;
  opts.tokenizer.stopwords.clear();
  return load_dataset(DatasetPaths::in_directory(dir.path()), opts);
}

ModelConfig model_config(Architecture arch, int dim, LossMode mode) {
  ModelConfig c;
  c.architecture = arch;
  c.dim = dim;
  c.loss_mode = mode;
  return c;
}

// ---------------------------------------------------------------------------

Outcome gradient_oracle() {
  double worst = 0;
  std::size_t checked = 0;
  for (auto arch : {Architecture::pctadw1, Architecture::pctadw2}) {
    EmbeddingModel<double> m(model_config(arch, 6, LossMode::exact_softmax), 5, 3);
    Rng rng(arch == Architecture::pctadw1 ? 11 : 12);
    for (auto b : kBlocks) {
      auto& p = m.params(b);
      for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = rng.uniform(-0.5, 0.5);
    }
    const std::vector<TrainingSample> samples = {
        {0, WordId{1}, NodeId{2}, NodeId{4}}, {3, WordId{0}, NodeId{1}, {}}, {4, {}, {}, NodeId{0}}};
    for (const auto& s : samples) {
      SparseGradient<double> grad;
      evaluate_sample<double>(m, s, {}, &grad);
      const double h = 1e-5;
      for (auto b : kBlocks) {
        auto& p = m.params(b);
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
          for (Eigen::Index j = 0; j < p.cols(); ++j) {
            const double saved = p(i, j);
            p(i, j) = saved + h;
            const double plus = evaluate_sample<double>(m, s, {}, nullptr).total();
            p(i, j) = saved - h;
            const double minus = evaluate_sample<double>(m, s, {}, nullptr).total();
            p(i, j) = saved;
            const double numeric = (plus - minus) / (2 * h);
            const auto* row = grad.find(b, i);
            const double analytic = row ? row->values(j) : 0.0;
            const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            worst = std::max(worst, std::abs(analytic - numeric) / scale);
            ++checked;
          }
        }
      }
    }
  }
  return verdict(worst <= 1e-4, std::to_string(checked) + " partials, max rel err " + fmt(worst));
}

Outcome sampling_law() {
  // Layered 2-2-2 DAG: child walks from the sources and parent walks from
  // the sinks never stop early with s = 2.
  const auto g = DirectedGraph::from_edges(6, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}});
  const std::vector<NodeDocument> docs(6);
  const SamplerConfig cfg;
  const Sampler sampler(g, docs, cfg);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6), b = a;
  for (const auto& e : g.edges()) {
    a(e.from, e.to) = 1.0 / static_cast<double>(g.deg_out(e.from));
    b(e.to, e.from) = 1.0 / static_cast<double>(g.deg_in(e.to));
  }
  const Eigen::MatrixXd child_law = (a + a * a) / cfg.walk_length;
  const Eigen::MatrixXd parent_law = (b + b * b) / cfg.walk_length;

  const long epochs = 100000;
  Eigen::Matrix<long, 6, 6> child = Eigen::Matrix<long, 6, 6>::Zero(), parent = child;
  Rng rng(2024);
  for (long e = 0; e < epochs; ++e) {
    sampler.for_each_epoch_sample(rng, [&](const TrainingSample& s) {
      if (s.child) ++child(s.focus, *s.child);
      if (s.parent) ++parent(s.focus, *s.parent);
    });
  }
  bool ok = true;
  double worst = 0;
  int cells = 0;
  for (NodeId v : {0u, 1u}) {
    const long n = epochs * static_cast<long>(sampler.counts().repeats[v]);
    for (NodeId u = 0; u < 6; ++u, ++cells) ok &= within_3_sigma(child(v, u), n, child_law(v, u), &worst);
  }
  for (NodeId v : {4u, 5u}) {
    const long n = epochs * static_cast<long>(sampler.counts().repeats[v]);
    for (NodeId u = 0; u < 6; ++u, ++cells) ok &= within_3_sigma(parent(v, u), n, parent_law(v, u), &worst);
  }
  return verdict(ok, std::to_string(epochs) + " epochs, " + std::to_string(cells) + " cells, max |z| " + fmt(worst));
}

Outcome word_weight_law() {
  TempDir dir;
  const auto ds = load(dir, "a\tb\nb\tc\n", "a\tapple apple pear\nb\tpear plum plum plum\nc\tapple\n", "");
  const Sampler sampler(ds.graph, ds.documents, SamplerConfig{});
  const long epochs = 100000;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> counts = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>::Zero(3, static_cast<Eigen::Index>(ds.vocabulary.size()));
  Rng rng(5);
  for (long e = 0; e < epochs; ++e) {
    sampler.for_each_epoch_sample(rng, [&](const TrainingSample& s) {
      if (s.word) ++counts(s.focus, *s.word);
    });
  }
  bool ok = true;
  double worst = 0;
  for (NodeId v = 0; v < 3; ++v) {
    const auto& tokens = ds.documents[v].tokens;
    const long n = epochs * static_cast<long>(sampler.counts().repeats[v]);
    for (WordId w = 0; w < ds.vocabulary.size(); ++w) {
      const double p = static_cast<double>(std::count(tokens.begin(), tokens.end(), w)) /
                       static_cast<double>(tokens.size());
      ok &= within_3_sigma(counts(v, w), n, p, &worst);
    }
  }
  return verdict(ok, std::to_string(epochs) + " epochs, max |z| " + fmt(worst));
}

Outcome softmax_normalization() {
  double worst = 0;
  int distributions = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto arch = seed % 2 ? Architecture::pctadw1 : Architecture::pctadw2;
    EmbeddingModel<double> m(model_config(arch, 16, LossMode::exact_softmax), 50, 30);
    Rng rng(seed);
    const double scale = 0.5 + static_cast<double>(seed % 5);
    for (auto b : kBlocks) {
      auto& p = m.params(b);
      for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = rng.uniform(-scale, scale);
    }
    for (NodeId v = 0; v < 50; ++v) {
      worst = std::max(worst, std::abs(child_distribution(m, v).sum() - 1.0));
      worst = std::max(worst, std::abs(parent_distribution(m, v).sum() - 1.0));
      worst = std::max(worst, std::abs(word_distribution(m, v).sum() - 1.0));
      distributions += 3;
    }
  }
  return verdict(worst <= 1e-9, std::to_string(distributions) + " distributions, max |sum - 1| " + fmt(worst));
}

Outcome skipped_head_isolation() {
  // "src" has children but neither parents nor text; "sink" has a parent
  // but neither children nor text; "lone" has text and no edges.
  TempDir dir;
  const auto ds = load(dir, "src\tmid\nmid\tsink\nlone\n", "mid\tsome words here\nlone\tother words\n", "");
  const NodeId src = *ds.graph.find("src"), sink = *ds.graph.find("sink"), lone = *ds.graph.find("lone");
  bool ok = true;
  std::string detail;
  for (auto mode : {LossMode::exact_softmax, LossMode::negative_sampling}) {
    TrainConfig c;
    c.epochs = 20;
    c.model = model_config(Architecture::pctadw2, 8, mode);
    c.seed = 3;
    Rng init_rng(99);
    auto m = init_model<float>(c.model, ds.graph.node_count(), ds.vocabulary.size(), init_rng);
    const auto before = m.params(Block::input);
    const auto log = train_epochs(m, ds, c, c.epochs);
    const auto& in = m.params(Block::input);
    const auto cs = m.child_segment(), ps = m.parent_segment();
    // The child segment feeds only the parent head; the parent segment only
    // the child head; text feeds both.
    ok &= bitwise_equal(Eigen::MatrixXf(in.block(src, cs.offset, 1, cs.size)),
                        Eigen::MatrixXf(before.block(src, cs.offset, 1, cs.size)));
    ok &= bitwise_equal(Eigen::MatrixXf(in.block(sink, ps.offset, 1, ps.size)),
                        Eigen::MatrixXf(before.block(sink, ps.offset, 1, ps.size)));
    ok &= bitwise_equal(Eigen::MatrixXf(in.row(lone)), Eigen::MatrixXf(before.row(lone)));
    ok &= !bitwise_equal(Eigen::MatrixXf(in.block(src, ps.offset, 1, ps.size)),
                         Eigen::MatrixXf(before.block(src, ps.offset, 1, ps.size)));
    for (const auto& e : log) ok &= std::isfinite(e.word) && std::isfinite(e.child) && std::isfinite(e.parent);
  }

  // Per update: a parent-only sample leaves child and word heads untouched.
  for (auto arch : {Architecture::pctadw1, Architecture::pctadw2}) {
    for (auto mode : {LossMode::exact_softmax, LossMode::negative_sampling}) {
      Rng rng(7);
      auto m = init_model<float>(model_config(arch, 8, mode), ds.graph.node_count(), ds.vocabulary.size(), rng);
      m.params(Block::child_output).setRandom();
      m.params(Block::word_output).setRandom();
      const auto noise = NoiseTables::build(ds.graph, ds.vocabulary);
      const auto child_p = m.params(Block::child_output), word_p = m.params(Block::word_output);
      const auto child_m = m.first_moment(Block::child_output), word_v = m.second_moment(Block::word_output);
      for (std::uint64_t t = 1; t <= 10; ++t) {
        SparseGradient<float> g;
        const auto loss = sample_loss_and_grads(m, TrainingSample{sink, {}, {}, *ds.graph.find("mid")}, &noise, rng, g);
        ok &= std::isfinite(loss.total());
        adam_step(m, g, t);
      }
      ok &= bitwise_equal(child_p, m.params(Block::child_output)) && bitwise_equal(word_p, m.params(Block::word_output));
      ok &= bitwise_equal(child_m, m.first_moment(Block::child_output)) &&
            bitwise_equal(word_v, m.second_moment(Block::word_output));
    }
  }
  return verdict(ok, "segment, row and block level checks, losses finite");
}

Outcome determinism() {
  TempDir dir;
  const auto ds = load(dir, "a\tb\nb\tc\na\td\nd\tc\ne\tc\n",
                       "a\tred green\nb\tgreen blue blue\nc\tred\ne\tyellow green\n", "");
  bool ok = true;
  for (auto mode : {LossMode::exact_softmax, LossMode::negative_sampling}) {
    TrainConfig c;
    c.model = model_config(Architecture::pctadw2, 16, mode);
    c.seed = 42;
    c.epochs = 4;
    c.checkpoint_path = dir / "x.ckpt";
    const auto first = train(ds, c);
    const auto first_bytes = pctadw::testing::read_file(dir / "x.ckpt");
    c.checkpoint_path = dir / "y.ckpt";
    const auto second = train(ds, c);
    ok &= first_bytes == pctadw::testing::read_file(dir / "y.ckpt");

    c.epochs = 2;
    c.checkpoint_path = dir / "half.ckpt";
    train(ds, c);
    c.checkpoint_path = dir / "resumed.ckpt";
    const auto resumed = resume(dir / "half.ckpt", ds, c);
    ok &= same_model(first.model, resumed.model);
    ok &= first_bytes == pctadw::testing::read_file(dir / "resumed.ckpt");
  }
  return verdict(ok, "identical checkpoints; 2 + 2 resumed epochs match 4 straight");
}

Outcome end_to_end_synthetic() {
  TempDir dir;
  Rng rng(31337);
  std::ostringstream edges, docs, labels;
  const int per = 100;
  auto name = [](int c, int i) { return std::string(c ? "beta" : "alpha") + std::to_string(i); };
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < per; ++i) {
      edges << name(c, i) << '\n';
      for (int j = i + 1; j < per; ++j) {
        if (rng.uniform(0, 1) < 0.08) edges << name(c, i) << '\t' << name(c, j) << '\n';
      }
      if (rng.uniform(0, 1) < 0.05) edges << name(c, i) << '\t' << name(1 - c, static_cast<int>(rng.index(per))) << '\n';
      docs << name(c, i) << '\t';
      for (int k = 0; k < 8; ++k) {
        if (rng.uniform(0, 1) < 0.25) {
          docs << "common" << rng.index(30) << ' ';
        } else {
          docs << (c ? "ocean" : "forest") << rng.index(40) << ' ';
        }
      }
      docs << '\n';
      labels << name(c, i) << '\t' << (c ? "marine" : "woodland") << '\n';
    }
  }
  const auto ds = load(dir, edges.str(), docs.str(), labels.str());
  TrainConfig c;
  c.model = model_config(Architecture::pctadw2, 32, LossMode::negative_sampling);
  c.epochs = 50;
  c.seed = 1;
  const auto result = train(ds, c);
  bool finite = true;
  for (const auto& e : result.log) finite &= std::isfinite(e.total());
  const auto report = classify(result.model.representations().cast<double>(), ds.labels, {0.10});
  const double f1 = report.fractions[0].micro_f1;
  return verdict(finite && f1 >= 0.9, std::to_string(ds.graph.edge_count()) + " edges, micro-F1 at 10% = " + fmt(f1) +
                                          " (mean over folds " + fmt(report.fractions[0].mean_fold_micro_f1) + ")");
}

std::size_t sorted_rank(const Eigen::MatrixXd& x, AnalogyPair a, AnalogyPair b) {
  const Eigen::RowVectorXd q = x.row(a.second) - x.row(a.first) + x.row(b.first);
  std::vector<std::pair<double, NodeId>> cand;
  for (NodeId i = 0; i < x.rows(); ++i) {
    if (i != b.second && (i == a.first || i == a.second || i == b.first)) continue;
    double d = 0;
    for (Eigen::Index k = 0; k < x.cols(); ++k) d += (x(i, k) - q(k)) * (x(i, k) - q(k));
    cand.emplace_back(std::sqrt(d), i);
  }
  std::sort(cand.begin(), cand.end());
  for (std::size_t r = 0; r < cand.size(); ++r) {
    if (cand[r].second == b.second) return r + 1;
  }
  return 0;
}

Outcome analogy_oracle() {
  bool ok = true;
  Rng rng(8);
  Eigen::MatrixXd x(40, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-3, 3);
  const Eigen::RowVectorXd offset = Eigen::RowVectorXd::Constant(6, 0.1);
  for (NodeId i = 0; i < 8; i += 2) x.row(i + 1) = x.row(i) + offset;
  std::vector<AnalogyPair> planted;
  for (NodeId i = 0; i < 8; i += 2) planted.push_back({i, i + 1});
  const auto p = analogy_all_pairs(x, planted);
  for (const auto& t : p.tests) ok &= t.rank == 1;

  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(100 + seed);
    Eigen::MatrixXd y(30, 4);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = r.uniform(-1, 1);
    std::vector<AnalogyPair> pairs;
    for (NodeId i = 0; i < 10; i += 2) pairs.push_back({i, i + 1});
    const auto all = analogy_all_pairs(y, pairs);
    for (const auto& t : all.tests) ok &= t.rank == sorted_rank(y, t.a, t.b), ++compared;
    const auto anchored = analogy_with_anchor(y, pairs, pairs[0]);
    for (const auto& t : anchored.tests) ok &= t.rank == sorted_rank(y, t.a, t.b), ++compared;
    for (const auto* res : {&all, &anchored}) {
      ok &= std::is_sorted(res->cumulative.begin(), res->cumulative.end());
      ok &= res->cumulative.back() == res->tests.size();
    }
  }
  return verdict(ok, std::to_string(p.tests.size()) + " planted tests, " + std::to_string(compared) +
                         " ranks vs exhaustive sort");
}

Outcome classification_sanity() {
  const int per = 20, labels = 3;
  LabelSet::Membership m = LabelSet::Membership::Constant(per * labels, labels, false);
  Eigen::MatrixXd reps = Eigen::MatrixXd::Zero(per * labels, labels);
  for (int v = 0; v < per * labels; ++v) {
    m(v, v / per) = true;
    reps(v, v / per) = 1.0;
  }
  const auto report = classify(reps, LabelSet({"a", "b", "c"}, m));
  const std::vector<int> folds = {20, 10, 5, 4, 3, 2};
  bool ok = report.fractions.size() == 6;
  std::string detail;
  for (std::size_t i = 0; ok && i < 6; ++i) {
    const auto& f = report.fractions[i];
    ok &= f.folds == folds[i] && f.micro_f1 == 1.0 && f.mean_fold_micro_f1 == 1.0;
    detail += (i ? " " : "") + fmt(f.fraction) + ":" + fmt(f.micro_f1);
  }
  return verdict(ok, detail);
}

Outcome full_scale() {
  const char* root = std::getenv("PCTADW_FULLSCALE_DIR");
  if (!root) return {Outcome::skip, "PCTADW_FULLSCALE_DIR not set"};
  struct Target {
    const char* name;
    double expected;
  };
  bool ok = true;
  std::string detail;
  for (const Target& t : {Target{"fedora", 0.934}, Target{"debian", 0.925}}) {
    const auto dir = std::filesystem::path(root) / t.name;
    if (!std::filesystem::exists(dir / "edges.tsv")) return {Outcome::skip, dir.string() + " missing"};
    const auto start = std::chrono::steady_clock::now();
    LoadOptions opts;
    opts.tokenizer = TokenizerConfig::english();
    const auto ds = load_dataset(DatasetPaths::in_directory(dir), opts);
    TrainConfig c;
    if (const char* w = std::getenv("PCTADW_WORKERS")) c.workers = std::max(1, std::atoi(w));
    const auto result = train(ds, c);
    const auto report = classify(result.model.representations().cast<double>(), ds.labels, {0.50});
    const double f1 = report.fractions[0].micro_f1;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok &= std::abs(f1 - t.expected) <= 0.02;
    detail += std::string(detail.empty() ? "" : "; ") + t.name + " micro-F1 " + fmt(f1) + " (target " +
              fmt(t.expected) + ", " + fmt(secs) + " s)";
  }
  return verdict(ok, detail);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"gradient oracle", 5, gradient_oracle},
      {"sampling law", 30, sampling_law},
      {"word-weight law", 0, word_weight_law},
      {"softmax normalization", 0, softmax_normalization},
      {"skipped-head isolation", 0, skipped_head_isolation},
      {"determinism and resume", 0, determinism},
      {"end-to-end synthetic", 60, end_to_end_synthetic},
      {"analogy oracle", 0, analogy_oracle},
      {"classification harness sanity", 0, classification_sanity},
      {"full-scale reproduction (optional)", 0, full_scale},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Outcome::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.kind == Outcome::pass && c.budget_seconds > 0 && secs >= c.budget_seconds) {
      o = {Outcome::fail, o.detail + "; over the " + fmt(c.budget_seconds) + " s budget"};
    }
    const char* tag = o.kind == Outcome::pass ? "PASS" : o.kind == Outcome::fail ? "FAIL" : "SKIP";
    failures += o.kind == Outcome::fail;
    std::cout << tag << "  " << c.name << "  [" << fmt(secs) << " s]  " << o.detail << '\n';
  }
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << '\n';
  return failures ? 1 : 0;
}
