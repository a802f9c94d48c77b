#include "graphsum/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "graphsum/decode.hpp"
#include "graphsum/ops.hpp"
#include "graphsum/rouge.hpp"

namespace graphsum::train {

using nlohmann::json;

Prepared prepare(const std::vector<data::Example>& raw, const text::Vocabulary& vocab,
                 const std::vector<double>& boundaries, const TrainConfig& config) {
  Prepared p;
  for (const auto& ex : raw) {
    data::Example t = data::truncate(ex, config.max_sentences, config.max_tokens_multidoc);
    p.graphs.push_back(config.model.hdsg ? graph::build_hdsg(t, vocab, boundaries)
                                         : graph::build_hsg(t, vocab, boundaries));
    p.sent_ids.push_back(model::encode_sentences(t, vocab));
    p.examples.push_back(std::move(t));
  }
  return p;
}

namespace {

std::vector<double> labels_of(const data::Example& ex) {
  if (!ex.labels) {
    throw std::runtime_error(
        "train: example has no oracle labels; run the `label` command first");
  }
  std::vector<double> y(ex.labels->begin(), ex.labels->end());
  return y;
}

// Mean per-sentence BCE over a set of examples (no tape needed for eval).
double dataset_loss(const model::ModelParams& params, const Prepared& data) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < data.examples.size(); ++i) {
    nn::Tensor logits = model::forward(params, data.graphs[i], data.sent_ids[i],
                                       data.examples[i].doc_boundaries);
    total += nn::bce_with_logits_sum(logits, labels_of(data.examples[i])).item();
    count += logits.size();
  }
  if (count == 0) throw std::runtime_error("loss: dataset has no sentences");
  return total / static_cast<double>(count);
}

std::vector<std::vector<double>> snapshot_params(model::ModelParams& params) {
  std::vector<std::vector<double>> snap;
  for (auto& [name, t] : checkpoint_tensors(params)) snap.push_back(t.data());
  return snap;
}

void restore_params(model::ModelParams& params, const std::vector<std::vector<double>>& snap) {
  auto tensors = checkpoint_tensors(params);
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    tensors[i].tensor.mutable_data() = snap[i];
  }
}

}  // namespace

bool EarlyStop::observe(std::size_t epoch, double valid_loss) {
  if (valid_loss < best_) {
    best_ = valid_loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

TrainResult train(const TrainConfig& config, const std::vector<data::Example>& train_set,
                  const std::vector<data::Example>& valid_set,
                  const text::Vocabulary& vocab, const std::vector<double>& boundaries,
                  std::ostream* log) {
  config.validate();
  if (train_set.empty()) throw std::runtime_error("train: empty training set");
  model::ModelConfig mc = config.model;
  mc.vocab_size = vocab.size();
  model::ModelParams params = model::init_params(mc, config.seed);
  if (!config.embeddings_path.empty()) {
    params.word_embedding.mutable_data() =
        text::load_embeddings(vocab, mc.d_w, config.embeddings_path, config.seed);
  }
  auto named = params.all();
  nn::AdamState adam(config.learning_rate);

  Prepared tr = prepare(train_set, vocab, boundaries, config);
  Prepared va = prepare(valid_set, vocab, boundaries, config);
  for (const auto& ex : tr.examples) labels_of(ex);  // fail fast when unlabeled

  TrainResult result;
  EarlyStop stopper(config.patience_epochs, config.patience_enabled);
  std::vector<std::vector<double>> best_snapshot = snapshot_params(params);

  std::vector<std::size_t> order(tr.examples.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(config.seed + epoch);
    std::shuffle(order.begin(), order.end(), rng);

    double epoch_loss_sum = 0.0;
    std::size_t epoch_sentences = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      nn::Tape tape;
      nn::TapeScope scope(tape);
      std::vector<nn::Tensor> losses;
      std::size_t batch_sentences = 0;
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        nn::Tensor logits = model::forward(params, tr.graphs[i], tr.sent_ids[i],
                                           tr.examples[i].doc_boundaries);
        losses.push_back(nn::bce_with_logits_sum(logits, labels_of(tr.examples[i])));
        batch_sentences += logits.size();
      }
      nn::Tensor batch_sum = losses.size() == 1 ? losses[0] : nn::sum_all(nn::concat_rows(losses));
      nn::Tensor loss = nn::scale(batch_sum, 1.0 / static_cast<double>(batch_sentences));
      const double loss_value = loss.item();
      if (!std::isfinite(loss_value)) {
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
      }
      tape.backward(loss);
      // Parameters outside the active computation graph (e.g. the word-update
      // stack when iterations == 0) still need a zero gradient buffer so the
      // optimizer can treat them uniformly.
      for (auto& p : named) p.tensor.grad_buffer();
      adam.step(named);
      epoch_loss_sum += loss_value * static_cast<double>(batch_sentences);
      epoch_sentences += batch_sentences;
    }

    EpochLog elog;
    elog.train_loss = epoch_loss_sum / static_cast<double>(epoch_sentences);
    elog.valid_loss = va.examples.empty() ? elog.train_loss : dataset_loss(params, va);
    elog.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.epochs.push_back(elog);
    if (log) {
      (*log) << "epoch=" << epoch << " train_loss=" << elog.train_loss
             << " valid_loss=" << elog.valid_loss << "\n";
    }

    if (stopper.observe(epoch, elog.valid_loss)) best_snapshot = snapshot_params(params);
    if (stopper.should_stop()) break;
  }

  restore_params(params, best_snapshot);
  result.checkpoint.params = std::move(params);
  result.checkpoint.vocab = vocab;
  result.checkpoint.bucket_boundaries = boundaries;
  result.checkpoint.epoch = stopper.best_epoch();
  result.checkpoint.best_valid_loss = stopper.best();
  return result;
}

std::vector<double> score_example(Checkpoint& ckpt, const graph::HeteroGraph& g,
                                  const std::vector<std::vector<std::size_t>>& sent_ids,
                                  const data::Example& ex) {
  nn::Tensor logits = model::forward(ckpt.params, g, sent_ids, ex.doc_boundaries);
  return logits.data();
}

namespace {

decode::Selection decode_example(const std::vector<double>& scores,
                                 const data::Example& ex, const TrainConfig& config) {
  return config.use_tri_blocking
             ? decode::trigram_blocking(scores, ex.sentences, config.select_k)
             : decode::select_topk(scores, config.select_k);
}

Metrics score_selection(const decode::Selection& sel, const data::Example& ex,
                        const TrainConfig& config) {
  rouge::Sentences chosen;
  for (std::size_t i : sel.sentence_indices) chosen.push_back(ex.sentences[i]);
  Metrics m;
  if (config.metric == "limited_length_recall") {
    auto [r1, r2] = rouge::limited_length_recall(chosen, ex.reference_summary);
    m.r1 = r1.recall;
    m.r2 = r2.recall;
    rouge::Tokens ref = rouge::flatten(ex.reference_summary);
    rouge::Tokens cand = rouge::flatten(chosen);
    if (cand.size() > ref.size()) cand.resize(ref.size());
    m.rl = rouge::rouge_l_summary({cand}, ex.reference_summary).recall;
  } else {
    rouge::Tokens ref = rouge::flatten(ex.reference_summary);
    rouge::Tokens cand = rouge::flatten(chosen);
    m.r1 = rouge::rouge_n(cand, ref, 1).f1;
    m.r2 = rouge::rouge_n(cand, ref, 2).f1;
    m.rl = rouge::rouge_l_summary(chosen, ex.reference_summary).f1;
  }
  return m;
}

}  // namespace

Metrics evaluate(Checkpoint& ckpt, const std::vector<data::Example>& test_set,
                 const TrainConfig& config) {
  if (test_set.empty()) throw std::runtime_error("evaluate: empty test set");
  Prepared te = prepare(test_set, ckpt.vocab, ckpt.bucket_boundaries, config);
  Metrics sum;
  for (std::size_t i = 0; i < te.examples.size(); ++i) {
    auto scores = score_example(ckpt, te.graphs[i], te.sent_ids[i], te.examples[i]);
    auto sel = decode_example(scores, te.examples[i], config);
    Metrics m = score_selection(sel, te.examples[i], config);
    sum.r1 += m.r1;
    sum.r2 += m.r2;
    sum.rl += m.rl;
  }
  const double n = static_cast<double>(te.examples.size());
  return {sum.r1 / n, sum.r2 / n, sum.rl / n};
}

json analyze(Checkpoint& ckpt, const std::vector<data::Example>& test_set,
             const TrainConfig& config, const std::string& analysis) {
  if (test_set.empty()) throw std::runtime_error("analyze: empty test set");
  json out;
  out["analysis"] = analysis;
  json rows = json::array();

  if (analysis == "word_degree_buckets") {
    Prepared te = prepare(test_set, ckpt.vocab, ckpt.bucket_boundaries, config);
    std::vector<double> degree(te.examples.size());
    for (std::size_t i = 0; i < te.examples.size(); ++i) {
      const auto& g = te.graphs[i];
      double total = 0.0;
      for (const auto& adj : g.word_adj) total += static_cast<double>(adj.size());
      degree[i] = g.num_words() ? total / static_cast<double>(g.num_words()) : 0.0;
    }
    const double lo = *std::min_element(degree.begin(), degree.end());
    const double hi = *std::max_element(degree.begin(), degree.end());
    const double width = hi > lo ? (hi - lo) / 5.0 : 1.0;
    std::vector<std::vector<std::size_t>> buckets(5);
    for (std::size_t i = 0; i < degree.size(); ++i) {
      auto b = static_cast<std::size_t>((degree[i] - lo) / width);
      buckets[std::min<std::size_t>(b, 4)].push_back(i);
    }
    for (std::size_t b = 0; b < 5; ++b) {
      double rsum = 0.0;
      for (std::size_t i : buckets[b]) {
        auto scores = score_example(ckpt, te.graphs[i], te.sent_ids[i], te.examples[i]);
        rsum += score_selection(decode_example(scores, te.examples[i], config),
                                te.examples[i], config)
                    .mean();
      }
      rows.push_back({{"bucket", b},
                      {"degree_min", lo + width * static_cast<double>(b)},
                      {"degree_max", lo + width * static_cast<double>(b + 1)},
                      {"examples", buckets[b].size()},
                      {"mean_rouge", buckets[b].empty() ? 0.0
                                                        : rsum / static_cast<double>(buckets[b].size())}});
    }
  } else if (analysis == "source_doc_count") {
    // Single-doc data still buckets; everything lands in bucket "1".
    Prepared te = prepare(test_set, ckpt.vocab, ckpt.bucket_boundaries, config);
    std::map<std::size_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < te.examples.size(); ++i) {
      buckets[te.examples[i].doc_boundaries.size()].push_back(i);
    }
    for (const auto& [count, idx] : buckets) {
      if (idx.size() < config.analysis_min_bucket) continue;
      double rsum = 0.0;
      for (std::size_t i : idx) {
        auto scores = score_example(ckpt, te.graphs[i], te.sent_ids[i], te.examples[i]);
        rsum += score_selection(decode_example(scores, te.examples[i], config),
                                te.examples[i], config)
                    .mean();
      }
      rows.push_back({{"source_docs", count},
                      {"examples", idx.size()},
                      {"mean_rouge", rsum / static_cast<double>(idx.size())}});
    }
  } else if (analysis == "iteration_sweep") {
    for (std::size_t t = 0; t <= 3; ++t) {
      TrainConfig sweep = config;
      sweep.model.iterations = t;
      sweep.patience_enabled = false;
      TrainResult r = train(sweep, test_set, test_set, ckpt.vocab,
                            ckpt.bucket_boundaries, nullptr);
      Metrics m = evaluate(r.checkpoint, test_set, sweep);
      double secs = 0.0;
      for (const auto& e : r.epochs) secs += e.seconds;
      rows.push_back({{"t", t},
                      {"r1", m.r1},
                      {"r2", m.r2},
                      {"rl", m.rl},
                      {"mean_rouge", m.mean()},
                      {"epoch_seconds", secs / static_cast<double>(r.epochs.size())}});
    }
  } else {
    throw std::runtime_error("analyze: unknown analysis '" + analysis + "'");
  }
  out["rows"] = rows;
  return out;
}

}  // namespace graphsum::train
