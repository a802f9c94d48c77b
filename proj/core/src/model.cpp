#include "graphsum/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "graphsum/ops.hpp"

namespace graphsum::model {

using nn::Tensor;

void ModelConfig::validate() const {
  if (vocab_size < 2) throw std::runtime_error("config: vocab_size must cover specials");
  if (d_s % 4 != 0) throw std::runtime_error("config: d_s must be divisible by 4");
  if (heads == 0 || d_h % heads != 0) {
    throw std::runtime_error("config: heads must divide d_h");
  }
  if (num_buckets == 0) throw std::runtime_error("config: num_buckets must be positive");
  if (gat_activation != "elu" && gat_activation != "relu" && gat_activation != "none") {
    throw std::runtime_error("config: unknown gat_activation '" + gat_activation + "'");
  }
}

const std::vector<std::size_t>& ModelConfig::cnn_widths() {
  static const std::vector<std::size_t> widths = {3, 4, 5};
  return widths;
}

namespace {

class ParamInit {
public:
  explicit ParamInit(std::uint64_t seed) : rng_(seed) {}

  Tensor xavier(std::size_t rows, std::size_t cols) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    std::vector<double> data(rows * cols);
    for (double& v : data) v = dist(rng_);
    return Tensor::param(rows, cols, std::move(data));
  }

  Tensor normal(std::size_t rows, std::size_t cols, double stddev) {
    std::normal_distribution<double> dist(0.0, stddev);
    std::vector<double> data(rows * cols);
    for (double& v : data) v = dist(rng_);
    return Tensor::param(rows, cols, std::move(data));
  }

  Tensor zeros(std::size_t rows, std::size_t cols) {
    return Tensor::param(rows, cols, std::vector<double>(rows * cols, 0.0));
  }

private:
  std::mt19937_64 rng_;
};

GatParams init_gat(ParamInit& init, const ModelConfig& c) {
  GatParams gp;
  const std::size_t dh = c.d_h / c.heads;
  for (std::size_t k = 0; k < c.heads; ++k) {
    gp.w_q.push_back(init.xavier(c.d_h, dh));
    gp.w_k.push_back(init.xavier(c.d_h, dh));
    gp.w_v.push_back(init.xavier(c.d_h, dh));
    gp.a_q.push_back(init.xavier(dh, 1));
    gp.a_k.push_back(init.xavier(dh, 1));
    gp.a_e.push_back(init.xavier(c.d_e, 1));
  }
  gp.edge_embedding = init.normal(c.num_buckets, c.d_e, 0.1);
  return gp;
}

FfnParams init_ffn(ParamInit& init, std::size_t d_in, std::size_t inner,
                   std::size_t d_out) {
  return {init.xavier(d_in, inner), init.zeros(1, inner), init.xavier(inner, d_out),
          init.zeros(1, d_out)};
}

LstmParams init_lstm(ParamInit& init, std::size_t d_in, std::size_t hidden) {
  return {init.xavier(d_in, 4 * hidden), init.xavier(hidden, 4 * hidden),
          init.zeros(1, 4 * hidden)};
}

void push_gat(std::vector<nn::NamedParam>& out, const std::string& prefix, GatParams& gp,
              bool with_edges) {
  for (std::size_t k = 0; k < gp.w_q.size(); ++k) {
    const std::string h = prefix + ".h" + std::to_string(k) + ".";
    out.push_back({h + "wq", gp.w_q[k]});
    out.push_back({h + "wk", gp.w_k[k]});
    out.push_back({h + "wv", gp.w_v[k]});
    out.push_back({h + "aq", gp.a_q[k]});
    out.push_back({h + "ak", gp.a_k[k]});
    if (with_edges) out.push_back({h + "ae", gp.a_e[k]});
  }
  if (with_edges) out.push_back({prefix + ".edge_embedding", gp.edge_embedding});
}

void push_ffn(std::vector<nn::NamedParam>& out, const std::string& prefix, FfnParams& fp) {
  out.push_back({prefix + ".w1", fp.w1});
  out.push_back({prefix + ".b1", fp.b1});
  out.push_back({prefix + ".w2", fp.w2});
  out.push_back({prefix + ".b2", fp.b2});
}

}  // namespace

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  ParamInit init(seed);
  ModelParams p;
  p.config = config;
  p.word_embedding = init.normal(config.vocab_size, config.d_w, 0.1);
  // Pad row stays zero.
  for (std::size_t j = 0; j < config.d_w; ++j) {
    p.word_embedding.mutable_data()[text::kPadId * config.d_w + j] = 0.0;
  }
  if (!config.train_embeddings) {
    p.word_embedding.impl()->requires_grad = false;
    p.word_embedding.impl()->leaf = false;
  }
  for (std::size_t w : ModelConfig::cnn_widths()) {
    p.conv_w.push_back(init.xavier(w * config.d_w, config.cnn_filters));
    p.conv_b.push_back(init.zeros(1, config.cnn_filters));
  }
  const std::size_t half = config.d_s / 2;
  p.conv_proj_w = init.xavier(ModelConfig::cnn_widths().size() * config.cnn_filters, half);
  p.conv_proj_b = init.zeros(1, half);
  p.lstm_fwd = init_lstm(init, half, config.d_s / 4);
  p.lstm_bwd = init_lstm(init, half, config.d_s / 4);
  p.word_in_w = init.xavier(config.d_w, config.d_h);
  p.word_in_b = init.zeros(1, config.d_h);
  p.sent_in_w = init.xavier(config.d_s, config.d_h);
  p.sent_in_b = init.zeros(1, config.d_h);
  p.gat_sup = init_gat(init, config);
  p.gat_word = init_gat(init, config);
  if (config.concat_no_residual) {
    p.ffn_sup_cat = init_ffn(init, 2 * config.d_h, config.ffn_inner, config.d_h);
    p.ffn_word_cat = init_ffn(init, 2 * config.d_h, config.ffn_inner, config.d_h);
  } else {
    p.ffn_sup = init_ffn(init, config.d_h, config.ffn_inner, config.d_h);
    p.ffn_word = init_ffn(init, config.d_h, config.ffn_inner, config.d_h);
  }
  p.scorer_w = init.xavier(config.hdsg ? 2 * config.d_h : config.d_h, 1);
  p.scorer_b = init.zeros(1, 1);
  return p;
}

std::vector<nn::NamedParam> ModelParams::all() {
  std::vector<nn::NamedParam> out;
  if (config.train_embeddings) out.push_back({"word_embedding", word_embedding});
  for (std::size_t i = 0; i < conv_w.size(); ++i) {
    const std::string w = std::to_string(ModelConfig::cnn_widths()[i]);
    out.push_back({"conv.w" + w, conv_w[i]});
    out.push_back({"conv.b" + w, conv_b[i]});
  }
  out.push_back({"conv_proj.w", conv_proj_w});
  out.push_back({"conv_proj.b", conv_proj_b});
  if (config.use_bilstm) {
    out.push_back({"lstm_fwd.wx", lstm_fwd.w_x});
    out.push_back({"lstm_fwd.wh", lstm_fwd.w_h});
    out.push_back({"lstm_fwd.b", lstm_fwd.b});
    out.push_back({"lstm_bwd.wx", lstm_bwd.w_x});
    out.push_back({"lstm_bwd.wh", lstm_bwd.w_h});
    out.push_back({"lstm_bwd.b", lstm_bwd.b});
  }
  out.push_back({"word_in.w", word_in_w});
  out.push_back({"word_in.b", word_in_b});
  out.push_back({"sent_in.w", sent_in_w});
  out.push_back({"sent_in.b", sent_in_b});
  push_gat(out, "gat_sup", gat_sup, config.use_edge_feature);
  push_gat(out, "gat_word", gat_word, config.use_edge_feature);
  if (config.concat_no_residual) {
    push_ffn(out, "ffn_sup_cat", ffn_sup_cat);
    push_ffn(out, "ffn_word_cat", ffn_word_cat);
  } else {
    push_ffn(out, "ffn_sup", ffn_sup);
    push_ffn(out, "ffn_word", ffn_word);
  }
  out.push_back({"scorer.w", scorer_w});
  out.push_back({"scorer.b", scorer_b});
  return out;
}

std::vector<std::vector<std::size_t>> encode_sentences(const data::Example& ex,
                                                       const text::Vocabulary& vocab) {
  const std::size_t min_len = ModelConfig::cnn_widths().back();
  std::vector<std::vector<std::size_t>> out;
  for (const auto& sent : ex.sentences) {
    std::vector<std::size_t> ids;
    for (const auto& tok : sent) ids.push_back(static_cast<std::size_t>(vocab.id_of(tok)));
    while (ids.size() < min_len) ids.push_back(text::kPadId);
    out.push_back(std::move(ids));
  }
  return out;
}

Tensor init_word_nodes(const ModelParams& params, const graph::HeteroGraph& g) {
  std::vector<std::size_t> rows;
  for (int id : g.word_ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= params.config.vocab_size) {
      throw std::runtime_error("init_word_nodes: word id " + std::to_string(id) +
                               " outside embedding table");
    }
    rows.push_back(static_cast<std::size_t>(id));
  }
  return nn::gather_rows(params.word_embedding, rows);
}

namespace {

// One direction of the sentence-level LSTM; returns the hidden state per
// step in input order.
std::vector<Tensor> lstm_run(const Tensor& seq, const LstmParams& lp, bool reverse) {
  const std::size_t n = seq.rows();
  const std::size_t hidden = lp.w_h.rows();
  Tensor h = Tensor::zeros(1, hidden);
  Tensor c = Tensor::zeros(1, hidden);
  std::vector<Tensor> out(n);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t t = reverse ? n - 1 - step : step;
    Tensor x = nn::gather_rows(seq, {t});
    Tensor gates = nn::add_row(nn::add(nn::matmul(x, lp.w_x), nn::matmul(h, lp.w_h)), lp.b);
    Tensor gi = nn::sigmoid(nn::slice_cols(gates, 0, hidden));
    Tensor gf = nn::sigmoid(nn::slice_cols(gates, hidden, 2 * hidden));
    Tensor go = nn::sigmoid(nn::slice_cols(gates, 2 * hidden, 3 * hidden));
    Tensor gc = nn::tanh_op(nn::slice_cols(gates, 3 * hidden, 4 * hidden));
    c = nn::add(nn::mul(gf, c), nn::mul(gi, gc));
    h = nn::mul(go, nn::tanh_op(c));
    out[t] = h;
  }
  return out;
}

}  // namespace

Tensor init_sentence_nodes(const ModelParams& params,
                           const std::vector<std::vector<std::size_t>>& sent_ids) {
  if (sent_ids.empty()) throw std::runtime_error("init_sentence_nodes: empty document");
  const auto& widths = ModelConfig::cnn_widths();
  std::vector<Tensor> local_rows;
  for (const auto& ids : sent_ids) {
    Tensor emb = nn::gather_rows(params.word_embedding, ids);
    std::vector<Tensor> pooled;
    for (std::size_t w = 0; w < widths.size(); ++w) {
      Tensor windows = nn::im2row(emb, widths[w]);
      Tensor conv = nn::relu(
          nn::add_row(nn::matmul(windows, params.conv_w[w]), params.conv_b[w]));
      pooled.push_back(nn::max_over_rows(conv));
    }
    local_rows.push_back(nn::add_row(
        nn::matmul(nn::concat_cols(pooled), params.conv_proj_w), params.conv_proj_b));
  }
  Tensor local = nn::concat_rows(local_rows);
  Tensor global;
  if (params.config.use_bilstm) {
    auto fwd = lstm_run(local, params.lstm_fwd, false);
    auto bwd = lstm_run(local, params.lstm_bwd, true);
    std::vector<Tensor> rows;
    for (std::size_t j = 0; j < sent_ids.size(); ++j) {
      rows.push_back(nn::concat_cols({fwd[j], bwd[j]}));
    }
    global = nn::concat_rows(rows);
  } else {
    global = Tensor::zeros(sent_ids.size(), params.config.d_s / 2);
  }
  return nn::concat_cols({local, global});
}

Tensor init_document_nodes(
    const Tensor& x_sent,
    const std::vector<std::pair<std::size_t, std::size_t>>& doc_boundaries) {
  std::vector<Tensor> rows;
  for (const auto& [b, e] : doc_boundaries) {
    if (e <= b) throw std::runtime_error("init_document_nodes: empty document range");
    std::vector<std::size_t> idx;
    for (std::size_t i = b; i < e; ++i) idx.push_back(i);
    rows.push_back(nn::mean_rows(x_sent, idx));
  }
  return nn::concat_rows(rows);
}

Tensor gat_layer(const Tensor& queries, const Tensor& keys_values, const EdgeBatch& edges,
                 const GatParams& gp, const ModelConfig& config, AttnCapture* capture,
                 bool residual) {
  const std::size_t q_count = queries.rows();
  std::vector<bool> covered(q_count, false);
  for (std::size_t q : edges.query) {
    if (q >= q_count) throw std::runtime_error("gat_layer: query index out of range");
    covered[q] = true;
  }
  for (std::size_t q = 0; q < q_count; ++q) {
    if (!covered[q]) {
      throw std::runtime_error("gat_layer: isolated query node " + std::to_string(q));
    }
  }
  std::vector<Tensor> heads;
  for (std::size_t k = 0; k < config.heads; ++k) {
    Tensor hq = nn::matmul(queries, gp.w_q[k]);
    Tensor hk = nn::matmul(keys_values, gp.w_k[k]);
    Tensor hv = nn::matmul(keys_values, gp.w_v[k]);
    Tensor z = nn::add(nn::gather_rows(nn::matmul(hq, gp.a_q[k]), edges.query),
                       nn::gather_rows(nn::matmul(hk, gp.a_k[k]), edges.neighbor));
    if (config.use_edge_feature) {
      Tensor ze = nn::matmul(gp.edge_embedding, gp.a_e[k]);
      z = nn::add(z, nn::gather_rows(ze, edges.bucket));
    }
    Tensor alpha = nn::segment_softmax(nn::leaky_relu(z, config.leaky_slope), edges.query);
    if (capture) {
      capture->heads.push_back({alpha.data(), edges.query});
    }
    Tensor u = nn::segment_weighted_sum(alpha, nn::gather_rows(hv, edges.neighbor),
                                        edges.query, q_count);
    if (config.gat_activation == "elu") {
      u = nn::elu(u);
    } else if (config.gat_activation == "relu") {
      u = nn::relu(u);
    }
    heads.push_back(u);
  }
  Tensor u = nn::concat_cols(heads);
  return residual ? nn::add(u, queries) : u;
}

Tensor ffn(const Tensor& x, const FfnParams& fp, bool residual) {
  Tensor inner = nn::relu(nn::add_row(nn::matmul(x, fp.w1), fp.b1));
  Tensor out = nn::add_row(nn::matmul(inner, fp.w2), fp.b2);
  return residual ? nn::add(x, out) : out;
}

namespace {

void build_edge_batches(const graph::HeteroGraph& g, EdgeBatch* sup, EdgeBatch* word) {
  const std::size_t n = g.num_sentences;
  for (const auto& e : g.edges) {
    const std::size_t super =
        e.kind == graph::SupernodeKind::Sentence ? e.supernode : n + e.supernode;
    sup->query.push_back(super);
    sup->neighbor.push_back(e.word);
    sup->bucket.push_back(static_cast<std::size_t>(e.bucket));
    word->query.push_back(e.word);
    word->neighbor.push_back(super);
    word->bucket.push_back(static_cast<std::size_t>(e.bucket));
  }
}

}  // namespace

IterationState iterate(const ModelParams& params, const graph::HeteroGraph& g,
                       const Tensor& h_word0, const Tensor& h_sup0, std::size_t t,
                       AttnCapture* capture) {
  const ModelConfig& c = params.config;
  EdgeBatch sup_edges, word_edges;
  build_edge_batches(g, &sup_edges, &word_edges);

  auto update = [&](const Tensor& q, const Tensor& kv, const EdgeBatch& e,
                    const GatParams& gp, const FfnParams& fp, const FfnParams& fp_cat) {
    if (c.concat_no_residual) {
      Tensor u = gat_layer(q, kv, e, gp, c, capture, false);
      return ffn(nn::concat_cols({u, q}), fp_cat, false);
    }
    return ffn(gat_layer(q, kv, e, gp, c, capture, true), fp, true);
  };

  Tensor h_word = h_word0;
  Tensor h_sup = update(h_sup0, h_word0, sup_edges, params.gat_sup, params.ffn_sup,
                        params.ffn_sup_cat);
  for (std::size_t it = 0; it < t; ++it) {
    h_word = update(h_word, h_sup, word_edges, params.gat_word, params.ffn_word,
                    params.ffn_word_cat);
    h_sup = update(h_sup, h_word, sup_edges, params.gat_sup, params.ffn_sup,
                   params.ffn_sup_cat);
  }

  IterationState state;
  state.t = t;
  state.h_word = h_word;
  if (g.num_docs == 0) {
    state.h_sent = h_sup;
  } else {
    std::vector<std::size_t> sent_rows, doc_rows;
    for (std::size_t i = 0; i < g.num_sentences; ++i) sent_rows.push_back(i);
    for (std::size_t i = 0; i < g.num_docs; ++i) doc_rows.push_back(g.num_sentences + i);
    state.h_sent = nn::gather_rows(h_sup, sent_rows);
    state.h_doc = nn::gather_rows(h_sup, doc_rows);
  }
  return state;
}

Tensor score_sentences(const IterationState& state, const ModelParams& params,
                       const std::vector<std::size_t>& doc_of_sentence) {
  if (!params.config.hdsg) {
    return nn::add_row(nn::matmul(state.h_sent, params.scorer_w), params.scorer_b);
  }
  if (!state.h_doc.defined()) {
    throw std::runtime_error("score_sentences: document states missing in HDSG mode");
  }
  if (doc_of_sentence.size() != state.h_sent.rows()) {
    throw std::runtime_error("score_sentences: sentence without owning document");
  }
  for (std::size_t d : doc_of_sentence) {
    if (d >= state.h_doc.rows()) {
      throw std::runtime_error("score_sentences: sentence without owning document");
    }
  }
  Tensor docs = nn::gather_rows(state.h_doc, doc_of_sentence);
  Tensor cat = nn::concat_cols({state.h_sent, docs});
  return nn::add_row(nn::matmul(cat, params.scorer_w), params.scorer_b);
}

Tensor forward(const ModelParams& params, const graph::HeteroGraph& g,
               const std::vector<std::vector<std::size_t>>& sent_ids,
               const std::vector<std::pair<std::size_t, std::size_t>>& doc_boundaries,
               AttnCapture* capture) {
  const ModelConfig& c = params.config;
  if (sent_ids.size() != g.num_sentences) {
    throw std::runtime_error("forward: sentence count mismatch between graph and input");
  }
  Tensor x_word = init_word_nodes(params, g);
  Tensor h_word0 = nn::add_row(nn::matmul(x_word, params.word_in_w), params.word_in_b);
  Tensor x_sent = init_sentence_nodes(params, sent_ids);
  Tensor h_sent0 = nn::add_row(nn::matmul(x_sent, params.sent_in_w), params.sent_in_b);

  Tensor h_sup0 = h_sent0;
  std::vector<std::size_t> doc_of_sentence;
  if (c.hdsg) {
    if (g.num_docs != doc_boundaries.size()) {
      throw std::runtime_error("forward: document count mismatch between graph and input");
    }
    Tensor x_doc = init_document_nodes(x_sent, doc_boundaries);
    Tensor h_doc0 = nn::add_row(nn::matmul(x_doc, params.sent_in_w), params.sent_in_b);
    h_sup0 = nn::concat_rows({h_sent0, h_doc0});
    doc_of_sentence.resize(g.num_sentences);
    for (std::size_t d = 0; d < doc_boundaries.size(); ++d) {
      for (std::size_t i = doc_boundaries[d].first; i < doc_boundaries[d].second; ++i) {
        doc_of_sentence[i] = d;
      }
    }
  }
  IterationState state = iterate(params, g, h_word0, h_sup0, c.iterations, capture);
  return score_sentences(state, params, doc_of_sentence);
}

}  // namespace graphsum::model
