// Command-line entry point: preprocess, label, train, evaluate, summarize,
// analyze. All run state comes from a flat key=value config file plus
// repeatable --set overrides; every run echoes the resolved config.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphsum/checkpoint.hpp"
#include "graphsum/config.hpp"
#include "graphsum/dataset.hpp"
#include "graphsum/decode.hpp"
#include "graphsum/graph.hpp"
#include "graphsum/rouge.hpp"
#include "graphsum/trainer.hpp"
#include "graphsum/vocab.hpp"

namespace {

using nlohmann::json;
namespace gs = graphsum;

constexpr int kArtifactsVersion = 1;

struct Args {
  std::string config_path;
  std::string input_path;
  std::string output_path;
  std::string checkpoint_path;
  std::vector<std::string> overrides;
};

gs::train::TrainConfig resolve_config(const Args& args) {
  gs::train::TrainConfig config;
  if (!args.config_path.empty()) config = gs::train::parse_config_file(args.config_path);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: --set expects key=value, got '" + kv + "'");
    }
    gs::train::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  config.validate();
  std::cerr << "# resolved config\n" << gs::train::dump_config(config) << "# end config\n";
  return config;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << text;
}

// vocab + filter set + bucket boundaries, a pure function of the training
// split and config.
int cmd_preprocess(const Args& args) {
  auto config = resolve_config(args);
  require(!args.input_path.empty(), "preprocess: --input is required");
  auto train_set = gs::data::read_jsonl(args.input_path);
  require(!train_set.empty(), "preprocess: empty training split");

  std::vector<gs::data::Example> truncated;
  truncated.reserve(train_set.size());
  for (const auto& ex : train_set) {
    truncated.push_back(gs::data::truncate(ex, config.max_sentences, config.max_tokens_multidoc));
  }
  auto vocab = gs::text::build_vocab(truncated, config.vocab_limit);
  if (!config.no_word_filter) gs::text::compute_word_filter(vocab, config.filter_fraction);
  auto boundaries = gs::graph::fit_bucket_boundaries(truncated, vocab, config.model.num_buckets,
                                                     config.model.hdsg);

  json artifacts = {{"version", kArtifactsVersion},
                    {"vocab", gs::train::vocab_to_json(vocab)},
                    {"bucket_boundaries", boundaries}};
  write_text(args.output_path, artifacts.dump() + "\n");
  return 0;
}

std::pair<gs::text::Vocabulary, std::vector<double>> load_artifacts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open artifacts file: " + path);
  json j = json::parse(in);
  if (j.at("version") != kArtifactsVersion) {
    throw std::runtime_error("artifacts " + path + ": unsupported version " +
                             j.at("version").dump());
  }
  return {gs::train::vocab_from_json(j.at("vocab")),
          j.at("bucket_boundaries").get<std::vector<double>>()};
}

int cmd_label(const Args& args) {
  auto config = resolve_config(args);
  require(!args.input_path.empty(), "label: --input is required");
  require(!args.output_path.empty(), "label: --output is required");
  auto examples = gs::data::read_jsonl(args.input_path);
  for (auto& ex : examples) {
    ex.labels = gs::rouge::greedy_oracle(ex, config.oracle_max_select);
  }
  gs::data::write_jsonl(args.output_path, examples);
  return 0;
}

int cmd_train(const Args& args) {
  auto config = resolve_config(args);
  require(!args.input_path.empty(), "train: --input is required");
  require(!args.checkpoint_path.empty(), "train: --checkpoint is required");
  auto train_set = gs::data::read_jsonl(args.input_path);
  require(!train_set.empty(), "train: empty training split");
  std::vector<gs::data::Example> valid_set;
  if (!config.valid_path.empty()) {
    valid_set = gs::data::read_jsonl(config.valid_path);
  } else {
    valid_set = train_set;  // desk-scale fallback: validate on the training split
  }

  gs::text::Vocabulary vocab;
  std::vector<double> boundaries;
  if (!config.artifacts_path.empty()) {
    std::tie(vocab, boundaries) = load_artifacts(config.artifacts_path);
  } else {
    std::vector<gs::data::Example> truncated;
    for (const auto& ex : train_set) {
      truncated.push_back(gs::data::truncate(ex, config.max_sentences, config.max_tokens_multidoc));
    }
    vocab = gs::text::build_vocab(truncated, config.vocab_limit);
    if (!config.no_word_filter) gs::text::compute_word_filter(vocab, config.filter_fraction);
    boundaries = gs::graph::fit_bucket_boundaries(truncated, vocab, config.model.num_buckets,
                                                  config.model.hdsg);
  }

  auto result = gs::train::train(config, train_set, valid_set, vocab, boundaries, &std::cerr);
  gs::train::save_checkpoint(args.checkpoint_path, result.checkpoint);
  std::cerr << "checkpoint written: " << args.checkpoint_path << "\n";
  return 0;
}

int cmd_evaluate(const Args& args) {
  auto config = resolve_config(args);
  require(!args.input_path.empty(), "evaluate: --input is required");
  require(!args.checkpoint_path.empty(), "evaluate: --checkpoint is required");
  auto test_set = gs::data::read_jsonl(args.input_path);
  auto ckpt = gs::train::load_checkpoint(args.checkpoint_path);
  auto metrics = gs::train::evaluate(ckpt, test_set, config);
  json out = {{"R1", metrics.r1}, {"R2", metrics.r2}, {"RL", metrics.rl}};
  write_text(args.output_path, out.dump() + "\n");
  return 0;
}

int cmd_summarize(const Args& args) {
  auto config = resolve_config(args);
  require(!args.input_path.empty(), "summarize: --input is required");
  require(!args.checkpoint_path.empty(), "summarize: --checkpoint is required");
  auto examples = gs::data::read_jsonl(args.input_path);
  auto ckpt = gs::train::load_checkpoint(args.checkpoint_path);
  auto prepared = gs::train::prepare(examples, ckpt.vocab, ckpt.bucket_boundaries, config);

  std::string out;
  for (std::size_t i = 0; i < prepared.examples.size(); ++i) {
    const auto& ex = prepared.examples[i];
    auto scores = gs::train::score_example(ckpt, prepared.graphs[i], prepared.sent_ids[i], ex);
    auto sel = config.use_tri_blocking
                   ? gs::decode::trigram_blocking(scores, ex.sentences, config.select_k)
                   : gs::decode::select_topk(scores, config.select_k);
    json line;
    line["indices"] = sel.sentence_indices;
    json sents = json::array();
    for (std::size_t idx : sel.sentence_indices) sents.push_back(ex.raw_sentences[idx]);
    line["sentences"] = sents;
    out += line.dump() + "\n";
  }
  write_text(args.output_path, out);
  return 0;
}

int cmd_analyze(const Args& args) {
  auto config = resolve_config(args);
  require(!args.input_path.empty(), "analyze: --input is required");
  require(!args.checkpoint_path.empty(), "analyze: --checkpoint is required");
  require(!config.analysis.empty(), "analyze: config key 'analysis' is required");
  auto test_set = gs::data::read_jsonl(args.input_path);
  auto ckpt = gs::train::load_checkpoint(args.checkpoint_path);
  json table = gs::train::analyze(ckpt, test_set, config, config.analysis);
  write_text(args.output_path, table.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based extractive summarizer"};
  app.require_subcommand(1);

  Args args;
  int (*handler)(const Args&) = nullptr;
  auto add = [&](const std::string& name, const std::string& desc, int (*fn)(const Args&)) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config_path, "key=value config file");
    sub->add_option("--input", args.input_path, "input JSONL path");
    sub->add_option("--output", args.output_path, "output path ('-' for stdout)");
    sub->add_option("--checkpoint", args.checkpoint_path, "checkpoint path");
    sub->add_option("--set", args.overrides, "config override key=value (repeatable)");
    sub->callback([&, fn] { handler = fn; });
    return sub;
  };
  add("preprocess", "Build vocabulary, word filter and edge-weight buckets", cmd_preprocess);
  add("label", "Attach greedy oracle labels to a dataset", cmd_label);
  add("train", "Train a model and write a checkpoint", cmd_train);
  add("evaluate", "Score a checkpoint on a test set", cmd_evaluate);
  add("summarize", "Emit selected sentences for each input example", cmd_summarize);
  add("analyze", "Performance breakdowns over a test set", cmd_analyze);

  CLI11_PARSE(app, argc, argv);
  try {
    return handler(args);
  } catch (const std::exception& ex) {
    std::string msg = ex.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "error: " << msg << "\n";
    return 1;
  }
}
