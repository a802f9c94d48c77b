#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphsum/adam.hpp"
#include "graphsum/graph.hpp"
#include "graphsum/tensor.hpp"
#include "graphsum/vocab.hpp"

namespace graphsum::model {

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t d_w = 300;
  std::size_t d_s = 128;  // divisible by 4 (CNN half + BiLSTM half)
  std::size_t d_e = 50;
  std::size_t d_h = 64;  // divisible by heads
  std::size_t heads = 8;
  std::size_t ffn_inner = 512;
  std::size_t cnn_filters = 32;  // per kernel width; widths are {3, 4, 5}
  std::size_t num_buckets = 10;
  std::size_t iterations = 1;  // t
  double leaky_slope = 0.2;
  bool hdsg = false;
  bool use_edge_feature = true;
  // Drops residuals and feeds [u ; h] through a widened FFN instead.
  bool concat_no_residual = false;
  bool use_bilstm = true;
  bool train_embeddings = true;
  std::string gat_activation = "elu";  // elu | relu | none

  void validate() const;
  static const std::vector<std::size_t>& cnn_widths();
};

struct GatParams {
  std::vector<nn::Tensor> w_q, w_k, w_v;  // per head, d_h x (d_h/heads)
  std::vector<nn::Tensor> a_q, a_k, a_e;  // per head, attention scorer splits
  nn::Tensor edge_embedding;              // num_buckets x d_e
};

struct FfnParams {
  nn::Tensor w1, b1, w2, b2;
};

struct LstmParams {
  nn::Tensor w_x, w_h, b;  // gates packed as [input; forget; output; cell]
};

struct ModelParams {
  ModelConfig config;
  nn::Tensor word_embedding;
  std::vector<nn::Tensor> conv_w, conv_b;  // one per kernel width
  nn::Tensor conv_proj_w, conv_proj_b;
  LstmParams lstm_fwd, lstm_bwd;
  nn::Tensor word_in_w, word_in_b;  // d_w -> d_h
  nn::Tensor sent_in_w, sent_in_b;  // d_s -> d_h
  GatParams gat_sup;   // supernode <- word update
  GatParams gat_word;  // word <- supernode update
  FfnParams ffn_sup, ffn_word;
  // Widened FFNs for the concat variant; allocated only when enabled.
  FfnParams ffn_sup_cat, ffn_word_cat;
  nn::Tensor scorer_w, scorer_b;

  // Stable-ordered view over every trainable tensor.
  std::vector<nn::NamedParam> all();
};

ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

// Per-sentence vocabulary ids, padded with the pad id to the largest CNN
// kernel width (an empty sentence becomes pad tokens only).
std::vector<std::vector<std::size_t>> encode_sentences(const data::Example& ex,
                                                       const text::Vocabulary& vocab);

// Flat edge view for one attention direction.
struct EdgeBatch {
  std::vector<std::size_t> query;     // segment id per edge
  std::vector<std::size_t> neighbor;  // key/value row per edge
  std::vector<std::size_t> bucket;
};

// Per-head attention weights recorded during a forward pass.
struct AttnCapture {
  struct Head {
    std::vector<double> alpha;
    std::vector<std::size_t> segments;
  };
  std::vector<Head> heads;
};

struct IterationState {
  nn::Tensor h_word;  // m x d_h
  nn::Tensor h_sent;  // n x d_h
  nn::Tensor h_doc;   // l x d_h, undefined for HSG
  std::size_t t = 0;
};

// Raw embedding rows for the graph's word nodes (m x d_w).
nn::Tensor init_word_nodes(const ModelParams& params, const graph::HeteroGraph& g);

// CNN n-gram feature concatenated with the BiLSTM sequence feature
// (n x d_s).
nn::Tensor init_sentence_nodes(const ModelParams& params,
                               const std::vector<std::vector<std::size_t>>& sent_ids);

// Mean pooling of each document's sentence rows (l x d_s).
nn::Tensor init_document_nodes(
    const nn::Tensor& x_sent,
    const std::vector<std::pair<std::size_t, std::size_t>>& doc_boundaries);

// Multi-head edge-aware attention with the residual added; every query
// must have at least one neighbor.
nn::Tensor gat_layer(const nn::Tensor& queries, const nn::Tensor& keys_values,
                     const EdgeBatch& edges, const GatParams& gp,
                     const ModelConfig& config, AttnCapture* capture = nullptr,
                     bool residual = true);

// y = x + W2 relu(W1 x + b1) + b2, row-wise.
nn::Tensor ffn(const nn::Tensor& x, const FfnParams& fp, bool residual = true);

IterationState iterate(const ModelParams& params, const graph::HeteroGraph& g,
                       const nn::Tensor& h_word0, const nn::Tensor& h_sup0,
                       std::size_t t, AttnCapture* capture = nullptr);

// HSG: w . h_sent[j] + b; HDSG: w . [h_sent[j] ; h_doc[doc(j)]] + b.
nn::Tensor score_sentences(const IterationState& state, const ModelParams& params,
                           const std::vector<std::size_t>& doc_of_sentence);

// Full forward pass: n x 1 logits. sent_ids come from encode_sentences.
nn::Tensor forward(const ModelParams& params, const graph::HeteroGraph& g,
                   const std::vector<std::vector<std::size_t>>& sent_ids,
                   const std::vector<std::pair<std::size_t, std::size_t>>& doc_boundaries,
                   AttnCapture* capture = nullptr);

}  // namespace graphsum::model
