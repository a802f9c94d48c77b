#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphsum/checkpoint.hpp"
#include "graphsum/config.hpp"
#include "graphsum/dataset.hpp"
#include "graphsum/graph.hpp"
#include "graphsum/model.hpp"

namespace graphsum::train {

// Dataset with graphs and encoded sentences prebuilt (graphs are immutable,
// so this happens once per run).
struct Prepared {
  std::vector<data::Example> examples;  // truncated
  std::vector<graph::HeteroGraph> graphs;
  std::vector<std::vector<std::vector<std::size_t>>> sent_ids;
};

Prepared prepare(const std::vector<data::Example>& raw, const text::Vocabulary& vocab,
                 const std::vector<double>& boundaries, const TrainConfig& config);

struct EpochLog {
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpochLog> epochs;
};

// Best-checkpoint early stopping: stop after `patience` consecutive epochs
// whose validation loss fails to improve on the best seen so far.
class EarlyStop {
public:
  explicit EarlyStop(std::size_t patience, bool enabled = true)
      : patience_(patience), enabled_(enabled) {}

  // Returns true when this epoch sets a new best validation loss.
  bool observe(std::size_t epoch, double valid_loss);
  bool should_stop() const { return enabled_ && since_best_ >= patience_; }
  double best() const { return best_; }
  std::size_t best_epoch() const { return best_epoch_; }

private:
  std::size_t patience_;
  bool enabled_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
};

// Mini-batch training with per-sentence mean cross-entropy, epoch-level
// validation and best-checkpoint early stopping. Logs one
// "epoch=<e> train_loss=<x> valid_loss=<y>" line per epoch when log is set.
TrainResult train(const TrainConfig& config, const std::vector<data::Example>& train_set,
                  const std::vector<data::Example>& valid_set,
                  const text::Vocabulary& vocab, const std::vector<double>& boundaries,
                  std::ostream* log = nullptr);

struct Metrics {
  double r1 = 0.0;
  double r2 = 0.0;
  double rl = 0.0;
  double mean() const { return (r1 + r2 + rl) / 3.0; }
};

// Per-example decoding (top-k or trigram blocking per config) followed by
// corpus-mean R-1/R-2/R-L under the configured metric.
Metrics evaluate(Checkpoint& ckpt, const std::vector<data::Example>& test_set,
                 const TrainConfig& config);

// Sentence scores for one prepared example, via the checkpoint model.
std::vector<double> score_example(Checkpoint& ckpt, const graph::HeteroGraph& g,
                                  const std::vector<std::vector<std::size_t>>& sent_ids,
                                  const data::Example& ex);

// word_degree_buckets | source_doc_count | iteration_sweep, as a JSON table.
nlohmann::json analyze(Checkpoint& ckpt, const std::vector<data::Example>& test_set,
                       const TrainConfig& config, const std::string& analysis);

}  // namespace graphsum::train
