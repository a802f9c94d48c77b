#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "graphsum/model.hpp"
#include "graphsum/vocab.hpp"

namespace graphsum::train {

// Self-contained training artifact: weights plus everything needed to
// rebuild inputs the same way (config, vocabulary, bucket boundaries).
struct Checkpoint {
  model::ModelParams params;
  text::Vocabulary vocab;
  std::vector<double> bucket_boundaries;
  std::size_t epoch = 0;
  double best_valid_loss = 0.0;
};

// File layout: version byte, little-endian u64 manifest length, JSON
// manifest (config, vocab, per-parameter name/shape/offset), then raw
// little-endian 64-bit floats. Raw doubles round-trip bitwise.
void save_checkpoint(const std::string& path, Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Every tensor that participates in checkpoint I/O, in a stable order
// (a superset of ModelParams::all: frozen or unused tensors included).
std::vector<nn::NamedParam> checkpoint_tensors(model::ModelParams& p);

// Vocabulary <-> JSON, shared by checkpoints and preprocess artifacts.
nlohmann::json vocab_to_json(const text::Vocabulary& v);
text::Vocabulary vocab_from_json(const nlohmann::json& j);

}  // namespace graphsum::train
