#include "graphsum/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace graphsum::train {

namespace {

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: expected boolean, got '" + v + "'");
}

std::size_t parse_size(const std::string& v) {
  std::size_t pos = 0;
  const long long n = std::stoll(v, &pos);
  if (pos != v.size() || n < 0) {
    throw std::runtime_error("config: expected nonnegative integer, got '" + v + "'");
  }
  return static_cast<std::size_t>(n);
}

double parse_real(const std::string& v) {
  std::size_t pos = 0;
  const double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::runtime_error("config: expected number, got '" + v + "'");
  return x;
}

using Setter = std::function<void(TrainConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"learning_rate", [](TrainConfig& c, const std::string& v) { c.learning_rate = parse_real(v); }},
      {"batch_size", [](TrainConfig& c, const std::string& v) { c.batch_size = parse_size(v); }},
      {"patience_epochs", [](TrainConfig& c, const std::string& v) { c.patience_epochs = parse_size(v); }},
      {"patience_enabled", [](TrainConfig& c, const std::string& v) { c.patience_enabled = parse_bool(v); }},
      {"max_epochs", [](TrainConfig& c, const std::string& v) { c.max_epochs = parse_size(v); }},
      {"seed", [](TrainConfig& c, const std::string& v) { c.seed = parse_size(v); }},
      {"vocab_limit", [](TrainConfig& c, const std::string& v) { c.vocab_limit = parse_size(v); }},
      {"max_sentences", [](TrainConfig& c, const std::string& v) { c.max_sentences = parse_size(v); }},
      {"max_tokens_multidoc", [](TrainConfig& c, const std::string& v) { c.max_tokens_multidoc = parse_size(v); }},
      {"filter_fraction", [](TrainConfig& c, const std::string& v) { c.filter_fraction = parse_real(v); }},
      {"no_word_filter", [](TrainConfig& c, const std::string& v) { c.no_word_filter = parse_bool(v); }},
      {"select_k", [](TrainConfig& c, const std::string& v) { c.select_k = parse_size(v); }},
      {"use_tri_blocking", [](TrainConfig& c, const std::string& v) { c.use_tri_blocking = parse_bool(v); }},
      {"oracle_max_select", [](TrainConfig& c, const std::string& v) { c.oracle_max_select = parse_size(v); }},
      {"metric", [](TrainConfig& c, const std::string& v) {
         if (v != "f1_rouge" && v != "limited_length_recall") {
           throw std::runtime_error("config: unknown metric '" + v + "'");
         }
         c.metric = v;
       }},
      {"workers", [](TrainConfig& c, const std::string& v) { c.workers = parse_size(v); }},
      {"embeddings_path", [](TrainConfig& c, const std::string& v) { c.embeddings_path = v; }},
      {"valid_path", [](TrainConfig& c, const std::string& v) { c.valid_path = v; }},
      {"artifacts_path", [](TrainConfig& c, const std::string& v) { c.artifacts_path = v; }},
      {"analysis", [](TrainConfig& c, const std::string& v) { c.analysis = v; }},
      {"analysis_min_bucket", [](TrainConfig& c, const std::string& v) { c.analysis_min_bucket = parse_size(v); }},
      {"mode", [](TrainConfig& c, const std::string& v) {
         if (v == "hsg") c.model.hdsg = false;
         else if (v == "hdsg") c.model.hdsg = true;
         else throw std::runtime_error("config: unknown mode '" + v + "'");
       }},
      {"iterations", [](TrainConfig& c, const std::string& v) { c.model.iterations = parse_size(v); }},
      {"d_w", [](TrainConfig& c, const std::string& v) { c.model.d_w = parse_size(v); }},
      {"d_s", [](TrainConfig& c, const std::string& v) { c.model.d_s = parse_size(v); }},
      {"d_e", [](TrainConfig& c, const std::string& v) { c.model.d_e = parse_size(v); }},
      {"d_h", [](TrainConfig& c, const std::string& v) { c.model.d_h = parse_size(v); }},
      {"heads", [](TrainConfig& c, const std::string& v) { c.model.heads = parse_size(v); }},
      {"ffn_inner", [](TrainConfig& c, const std::string& v) { c.model.ffn_inner = parse_size(v); }},
      {"cnn_filters", [](TrainConfig& c, const std::string& v) { c.model.cnn_filters = parse_size(v); }},
      {"buckets", [](TrainConfig& c, const std::string& v) { c.model.num_buckets = parse_size(v); }},
      {"leaky_slope", [](TrainConfig& c, const std::string& v) { c.model.leaky_slope = parse_real(v); }},
      {"gat_activation", [](TrainConfig& c, const std::string& v) { c.model.gat_activation = v; }},
      {"no_edge_feature", [](TrainConfig& c, const std::string& v) { c.model.use_edge_feature = !parse_bool(v); }},
      {"concat_no_residual", [](TrainConfig& c, const std::string& v) { c.model.concat_no_residual = parse_bool(v); }},
      {"no_bilstm", [](TrainConfig& c, const std::string& v) { c.model.use_bilstm = !parse_bool(v); }},
      {"train_embeddings", [](TrainConfig& c, const std::string& v) { c.model.train_embeddings = parse_bool(v); }},
  };
  return table;
}

}  // namespace

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw std::runtime_error("config: learning_rate must be positive");
  if (batch_size == 0) throw std::runtime_error("config: batch_size must be positive");
  if (patience_epochs == 0) throw std::runtime_error("config: patience_epochs must be >= 1");
  if (select_k == 0) throw std::runtime_error("config: select_k must be >= 1");
  if (filter_fraction < 0.0 || filter_fraction >= 1.0) {
    throw std::runtime_error("config: filter_fraction must be in [0, 1)");
  }
}

void apply_override(TrainConfig& config, const std::string& key, const std::string& value) {
  auto it = setters().find(key);
  if (it == setters().end()) {
    throw std::runtime_error("config: unknown key '" + key + "'");
  }
  it->second(config, value);
}

TrainConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  TrainConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config " + path + " line " + std::to_string(line_no) +
                               ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    try {
      apply_override(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& ex) {
      throw std::runtime_error(std::string(ex.what()) + " (" + path + " line " +
                               std::to_string(line_no) + ")");
    }
  }
  return config;
}

std::string dump_config(const TrainConfig& c) {
  std::ostringstream os;
  os << "mode=" << (c.model.hdsg ? "hdsg" : "hsg") << "\n"
     << "iterations=" << c.model.iterations << "\n"
     << "d_w=" << c.model.d_w << "\n"
     << "d_s=" << c.model.d_s << "\n"
     << "d_e=" << c.model.d_e << "\n"
     << "d_h=" << c.model.d_h << "\n"
     << "heads=" << c.model.heads << "\n"
     << "ffn_inner=" << c.model.ffn_inner << "\n"
     << "cnn_filters=" << c.model.cnn_filters << "\n"
     << "buckets=" << c.model.num_buckets << "\n"
     << "leaky_slope=" << c.model.leaky_slope << "\n"
     << "gat_activation=" << c.model.gat_activation << "\n"
     << "no_edge_feature=" << (c.model.use_edge_feature ? "false" : "true") << "\n"
     << "concat_no_residual=" << (c.model.concat_no_residual ? "true" : "false") << "\n"
     << "no_bilstm=" << (c.model.use_bilstm ? "false" : "true") << "\n"
     << "train_embeddings=" << (c.model.train_embeddings ? "true" : "false") << "\n"
     << "learning_rate=" << c.learning_rate << "\n"
     << "batch_size=" << c.batch_size << "\n"
     << "patience_epochs=" << c.patience_epochs << "\n"
     << "patience_enabled=" << (c.patience_enabled ? "true" : "false") << "\n"
     << "max_epochs=" << c.max_epochs << "\n"
     << "seed=" << c.seed << "\n"
     << "vocab_limit=" << c.vocab_limit << "\n"
     << "max_sentences=" << c.max_sentences << "\n"
     << "max_tokens_multidoc=" << c.max_tokens_multidoc << "\n"
     << "filter_fraction=" << c.filter_fraction << "\n"
     << "no_word_filter=" << (c.no_word_filter ? "true" : "false") << "\n"
     << "select_k=" << c.select_k << "\n"
     << "use_tri_blocking=" << (c.use_tri_blocking ? "true" : "false") << "\n"
     << "oracle_max_select=" << c.oracle_max_select << "\n"
     << "metric=" << c.metric << "\n"
     << "workers=" << c.workers << "\n"
     << "embeddings_path=" << c.embeddings_path << "\n"
     << "valid_path=" << c.valid_path << "\n"
     << "artifacts_path=" << c.artifacts_path << "\n"
     << "analysis=" << c.analysis << "\n"
     << "analysis_min_bucket=" << c.analysis_min_bucket << "\n";
  return os.str();
}

}  // namespace graphsum::train
