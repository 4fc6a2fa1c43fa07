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

#include "pctadw/trainer.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <thread>

#include "pctadw/checkpoint.hpp"
#include "pctadw/errors.hpp"

namespace pctadw {

namespace {

constexpr std::uint64_t kInitStream = 0xffffffffffffffffULL;

struct LossSums {
  double word = 0, child = 0, parent = 0;
  std::size_t samples = 0, words = 0, children = 0, parents = 0;

  void add(const HeadLoss& l) {
    ++samples;
    if (l.has_word) word += l.word, ++words;
    if (l.has_child) child += l.child, ++children;
    if (l.has_parent) parent += l.parent, ++parents;
  }
  void merge(const LossSums& o) {
    word += o.word, child += o.child, parent += o.parent;
    samples += o.samples, words += o.words, children += o.children, parents += o.parents;
  }
};

EpochLoss summarize(std::uint64_t epoch, const LossSums& s) {
  auto mean = [](double sum, std::size_t n) { return n ? sum / static_cast<double>(n) : 0.0; };
  EpochLoss e;
  e.epoch = epoch;
  e.word = mean(s.word, s.words);
  e.child = mean(s.child, s.children);
  e.parent = mean(s.parent, s.parents);
  e.samples = s.samples;
  e.word_samples = s.words;
  e.child_samples = s.children;
  e.parent_samples = s.parents;
  return e;
}

void check_compatible(const EmbeddingModel<float>& model, const Dataset& dataset,
                      const TrainConfig& config) {
  auto mismatch = [](const char* field, auto have, auto want) {
    throw IncompatibleCheckpoint(field, std::string("checkpoint ") + field + " is " +
                                            std::to_string(have) + ", expected " +
                                            std::to_string(want));
  };
  const auto& cfg = model.config();
  if (cfg.architecture != config.model.architecture) {
    throw IncompatibleCheckpoint(
        "architecture", "checkpoint architecture is " + std::string(to_string(cfg.architecture)) +
                            ", expected " + std::string(to_string(config.model.architecture)));
  }
  if (cfg.dim != config.model.dim) mismatch("dim", cfg.dim, config.model.dim);
  if (model.node_count() != dataset.graph.node_count()) {
    mismatch("node_count", model.node_count(), dataset.graph.node_count());
  }
  if (model.vocab_size() != dataset.vocabulary.size()) {
    mismatch("vocab_size", model.vocab_size(), dataset.vocabulary.size());
  }
  if (cfg.loss_mode != config.model.loss_mode) {
    throw IncompatibleCheckpoint("loss_mode", "checkpoint loss mode is " +
                                                  std::string(to_string(cfg.loss_mode)) +
                                                  ", expected " +
                                                  std::string(to_string(config.model.loss_mode)));
  }
  if (cfg.loss_mode == LossMode::negative_sampling && cfg.negatives != config.model.negatives) {
    mismatch("negatives", cfg.negatives, config.model.negatives);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (checkpoint_interval < 0) throw ConfigError("checkpoint interval must be >= 0");
  sampler.validate();
  model.validate();
}

std::vector<EpochLoss> train_epochs(EmbeddingModel<float>& model, const Dataset& dataset,
                                    const TrainConfig& config, int epochs) {
  const Sampler sampler(dataset.graph, dataset.documents, config.sampler);
  const bool negative_sampling = config.model.loss_mode == LossMode::negative_sampling;
  NoiseTables noise;
  if (negative_sampling) noise = NoiseTables::build(dataset.graph, dataset.vocabulary);
  const NoiseTables* noise_ptr = negative_sampling ? &noise : nullptr;

  std::vector<EpochLoss> log;
  for (int i = 0; i < epochs; ++i) {
    const auto epoch = model.epochs_completed();
    Rng rng(derive_seed(config.seed, epoch));
    LossSums sums;

    if (config.workers == 1) {
      SparseGradient<float> grad;
      auto t = model.step();
      sampler.for_each_epoch_sample(rng, [&](const TrainingSample& s) {
        grad.clear();
        sums.add(sample_loss_and_grads(model, s, noise_ptr, rng, grad));
        adam_step(model, grad, ++t);
      });
    } else {
      // Hogwild: workers share `model` without locks.
      const auto order = sampler.epoch_order(rng);
      const auto workers = static_cast<std::size_t>(config.workers);
      std::atomic<std::uint64_t> step{model.step()};
      std::vector<LossSums> partial(workers);
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          Rng local = rng.split(w + 1);
          SparseGradient<float> grad;
          const auto begin = order.size() * w / workers;
          const auto end = order.size() * (w + 1) / workers;
          for (auto k = begin; k < end; ++k) {
            const auto v = order[k];
            for (std::size_t r = 0; r < sampler.counts().repeats[v]; ++r) {
              grad.clear();
              partial[w].add(sample_loss_and_grads(model, sampler.sample(v, local), noise_ptr,
                                                   local, grad));
              adam_step(model, grad, step.fetch_add(1) + 1);
            }
          }
        });
      }
      for (auto& t : threads) t.join();
      for (const auto& p : partial) sums.merge(p);
      model.set_step(step.load());
    }

    model.set_epochs_completed(epoch + 1);
    log.push_back(summarize(epoch + 1, sums));
    if (!config.checkpoint_path.empty() && config.checkpoint_interval > 0 &&
        (epoch + 1) % static_cast<std::uint64_t>(config.checkpoint_interval) == 0) {
      save_checkpoint(model, config.checkpoint_path);
    }
    if (config.on_epoch) config.on_epoch(log.back());
  }
  if (!config.checkpoint_path.empty()) save_checkpoint(model, config.checkpoint_path);
  return log;
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  config.validate();
  Rng init_rng(derive_seed(config.seed, kInitStream));
  TrainResult result{init_model<float>(config.model, dataset.graph.node_count(),
                                       dataset.vocabulary.size(), init_rng),
                     {}};
  result.log = train_epochs(result.model, dataset, config, config.epochs);
  return result;
}

TrainResult resume(const std::filesystem::path& checkpoint, const Dataset& dataset,
                   const TrainConfig& config) {
  if (config.epochs < 0) throw ConfigError("epochs must be >= 0");
  TrainConfig check = config;
  check.epochs = 1;
  check.validate();
  TrainResult result{load_checkpoint(checkpoint), {}};
  check_compatible(result.model, dataset, config);
  result.log = train_epochs(result.model, dataset, config, config.epochs);
  return result;
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<EpochLoss>& log) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "epoch,word_loss,child_loss,parent_loss\n";
  out << std::setprecision(17);
  for (const auto& e : log) {
    out << e.epoch << ',' << e.word << ',' << e.child << ',' << e.parent << '\n';
  }
}

}  // namespace pctadw
