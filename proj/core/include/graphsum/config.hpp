#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphsum/model.hpp"

namespace graphsum::train {

// Run configuration, read from a flat key=value file. '#' starts a
// comment; unknown keys are rejected. CLI overrides win over file values.
struct TrainConfig {
  model::ModelConfig model;  // vocab_size is filled from the vocabulary

  double learning_rate = 5e-4;
  std::size_t batch_size = 32;
  std::size_t patience_epochs = 3;
  bool patience_enabled = true;
  std::size_t max_epochs = 100;
  std::uint64_t seed = 7;

  std::size_t vocab_limit = 50000;
  std::size_t max_sentences = 50;
  std::size_t max_tokens_multidoc = 500;
  double filter_fraction = 0.10;
  bool no_word_filter = false;

  std::size_t select_k = 3;
  bool use_tri_blocking = false;
  std::size_t oracle_max_select = 3;
  std::string metric = "f1_rouge";  // f1_rouge | limited_length_recall

  std::size_t workers = 1;
  std::string embeddings_path;
  std::string valid_path;
  std::string artifacts_path;
  std::string analysis;  // word_degree_buckets | source_doc_count | iteration_sweep
  std::size_t analysis_min_bucket = 1;

  void validate() const;
};

TrainConfig parse_config_file(const std::string& path);
// key=value override, same key set as the file.
void apply_override(TrainConfig& config, const std::string& key, const std::string& value);
// Fully resolved key=value dump, one per line, stable order.
std::string dump_config(const TrainConfig& config);

}  // namespace graphsum::train
