#include "graphsum/checkpoint.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace graphsum::train {

using nlohmann::json;

namespace {

constexpr unsigned char kFormatVersion = 1;

json config_to_json(const model::ModelConfig& c) {
  return {{"vocab_size", c.vocab_size},
          {"d_w", c.d_w},
          {"d_s", c.d_s},
          {"d_e", c.d_e},
          {"d_h", c.d_h},
          {"heads", c.heads},
          {"ffn_inner", c.ffn_inner},
          {"cnn_filters", c.cnn_filters},
          {"num_buckets", c.num_buckets},
          {"iterations", c.iterations},
          {"leaky_slope", c.leaky_slope},
          {"hdsg", c.hdsg},
          {"use_edge_feature", c.use_edge_feature},
          {"concat_no_residual", c.concat_no_residual},
          {"use_bilstm", c.use_bilstm},
          {"train_embeddings", c.train_embeddings},
          {"gat_activation", c.gat_activation}};
}

model::ModelConfig config_from_json(const json& j) {
  model::ModelConfig c;
  c.vocab_size = j.at("vocab_size");
  c.d_w = j.at("d_w");
  c.d_s = j.at("d_s");
  c.d_e = j.at("d_e");
  c.d_h = j.at("d_h");
  c.heads = j.at("heads");
  c.ffn_inner = j.at("ffn_inner");
  c.cnn_filters = j.at("cnn_filters");
  c.num_buckets = j.at("num_buckets");
  c.iterations = j.at("iterations");
  c.leaky_slope = j.at("leaky_slope");
  c.hdsg = j.at("hdsg");
  c.use_edge_feature = j.at("use_edge_feature");
  c.concat_no_residual = j.at("concat_no_residual");
  c.use_bilstm = j.at("use_bilstm");
  c.train_embeddings = j.at("train_embeddings");
  c.gat_activation = j.at("gat_activation");
  return c;
}

}  // namespace

json vocab_to_json(const text::Vocabulary& v) {
  std::vector<int> filtered(v.filtered_set.begin(), v.filtered_set.end());
  std::sort(filtered.begin(), filtered.end());
  return {{"words", v.id_to_word},
          {"term_freq", v.term_freq},
          {"doc_freq", v.doc_freq},
          {"num_docs", v.num_docs},
          {"filtered", filtered}};
}

text::Vocabulary vocab_from_json(const json& j) {
  text::Vocabulary v;
  v.id_to_word = j.at("words").get<std::vector<std::string>>();
  v.term_freq = j.at("term_freq").get<std::vector<std::int64_t>>();
  v.doc_freq = j.at("doc_freq").get<std::vector<std::int64_t>>();
  v.num_docs = j.at("num_docs");
  for (int id : j.at("filtered").get<std::vector<int>>()) v.filtered_set.insert(id);
  for (std::size_t i = 0; i < v.id_to_word.size(); ++i) {
    v.word_to_id[v.id_to_word[i]] = static_cast<int>(i);
  }
  return v;
}

namespace {

void push_gat_io(std::vector<nn::NamedParam>& out, const std::string& prefix,
                 model::GatParams& gp) {
  for (std::size_t k = 0; k < gp.w_q.size(); ++k) {
    const std::string h = prefix + ".h" + std::to_string(k) + ".";
    out.push_back({h + "wq", gp.w_q[k]});
    out.push_back({h + "wk", gp.w_k[k]});
    out.push_back({h + "wv", gp.w_v[k]});
    out.push_back({h + "aq", gp.a_q[k]});
    out.push_back({h + "ak", gp.a_k[k]});
    out.push_back({h + "ae", gp.a_e[k]});
  }
  out.push_back({prefix + ".edge_embedding", gp.edge_embedding});
}

void push_ffn_io(std::vector<nn::NamedParam>& out, const std::string& prefix,
                 model::FfnParams& fp) {
  out.push_back({prefix + ".w1", fp.w1});
  out.push_back({prefix + ".b1", fp.b1});
  out.push_back({prefix + ".w2", fp.w2});
  out.push_back({prefix + ".b2", fp.b2});
}

}  // namespace

std::vector<nn::NamedParam> checkpoint_tensors(model::ModelParams& p) {
  std::vector<nn::NamedParam> out;
  out.push_back({"word_embedding", p.word_embedding});
  for (std::size_t i = 0; i < p.conv_w.size(); ++i) {
    const std::string w = std::to_string(model::ModelConfig::cnn_widths()[i]);
    out.push_back({"conv.w" + w, p.conv_w[i]});
    out.push_back({"conv.b" + w, p.conv_b[i]});
  }
  out.push_back({"conv_proj.w", p.conv_proj_w});
  out.push_back({"conv_proj.b", p.conv_proj_b});
  out.push_back({"lstm_fwd.wx", p.lstm_fwd.w_x});
  out.push_back({"lstm_fwd.wh", p.lstm_fwd.w_h});
  out.push_back({"lstm_fwd.b", p.lstm_fwd.b});
  out.push_back({"lstm_bwd.wx", p.lstm_bwd.w_x});
  out.push_back({"lstm_bwd.wh", p.lstm_bwd.w_h});
  out.push_back({"lstm_bwd.b", p.lstm_bwd.b});
  out.push_back({"word_in.w", p.word_in_w});
  out.push_back({"word_in.b", p.word_in_b});
  out.push_back({"sent_in.w", p.sent_in_w});
  out.push_back({"sent_in.b", p.sent_in_b});
  push_gat_io(out, "gat_sup", p.gat_sup);
  push_gat_io(out, "gat_word", p.gat_word);
  if (p.config.concat_no_residual) {
    push_ffn_io(out, "ffn_sup_cat", p.ffn_sup_cat);
    push_ffn_io(out, "ffn_word_cat", p.ffn_word_cat);
  } else {
    push_ffn_io(out, "ffn_sup", p.ffn_sup);
    push_ffn_io(out, "ffn_word", p.ffn_word);
  }
  out.push_back({"scorer.w", p.scorer_w});
  out.push_back({"scorer.b", p.scorer_b});
  return out;
}

void save_checkpoint(const std::string& path, Checkpoint& ckpt) {
  auto tensors = checkpoint_tensors(ckpt.params);
  json manifest;
  manifest["config"] = config_to_json(ckpt.params.config);
  manifest["vocab"] = vocab_to_json(ckpt.vocab);
  manifest["bucket_boundaries"] = ckpt.bucket_boundaries;
  manifest["epoch"] = ckpt.epoch;
  manifest["best_valid_loss"] = ckpt.best_valid_loss;
  json params = json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : tensors) {
    params.push_back({{"name", name}, {"shape", t.shape()}, {"offset", offset}});
    offset += t.size();
  }
  manifest["params"] = params;
  const std::string mstr = manifest.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.put(static_cast<char>(kFormatVersion));
  std::uint64_t mlen = mstr.size();
  out.write(reinterpret_cast<const char*>(&mlen), sizeof(mlen));
  out.write(mstr.data(), static_cast<std::streamsize>(mstr.size()));
  for (const auto& [name, t] : tensors) {
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  const int version = in.get();
  if (version != kFormatVersion) {
    throw std::runtime_error("checkpoint " + path + ": unsupported format version " +
                             std::to_string(version));
  }
  std::uint64_t mlen = 0;
  in.read(reinterpret_cast<char*>(&mlen), sizeof(mlen));
  std::string mstr(mlen, '\0');
  in.read(mstr.data(), static_cast<std::streamsize>(mlen));
  if (!in) throw std::runtime_error("checkpoint " + path + ": truncated manifest");
  json manifest = json::parse(mstr);

  Checkpoint ckpt;
  model::ModelConfig config = config_from_json(manifest.at("config"));
  ckpt.params = model::init_params(config, 0);
  ckpt.vocab = vocab_from_json(manifest.at("vocab"));
  ckpt.bucket_boundaries = manifest.at("bucket_boundaries").get<std::vector<double>>();
  ckpt.epoch = manifest.at("epoch");
  ckpt.best_valid_loss = manifest.at("best_valid_loss");

  auto tensors = checkpoint_tensors(ckpt.params);
  if (tensors.size() != manifest.at("params").size()) {
    throw std::runtime_error("checkpoint " + path + ": parameter manifest mismatch");
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const json& pj = manifest.at("params")[i];
    if (pj.at("name") != tensors[i].name) {
      throw std::runtime_error("checkpoint " + path + ": unexpected parameter '" +
                               pj.at("name").get<std::string>() + "'");
    }
    auto& data = tensors[i].tensor.mutable_data();
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  }
  if (!in) throw std::runtime_error("checkpoint " + path + ": truncated weights");
  return ckpt;
}

}  // namespace graphsum::train
