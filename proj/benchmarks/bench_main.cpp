// Microbenchmarks for the hot paths: tokenization, graph construction,
// ROUGE scoring, oracle labeling, and the model forward/backward pass.

#include <benchmark/benchmark.h>

#include "graphsum/graph.hpp"
#include "graphsum/model.hpp"
#include "graphsum/ops.hpp"
#include "graphsum/rouge.hpp"
#include "graphsum/text.hpp"
#include "synthetic.hpp"

using namespace graphsum;

namespace {

testsupport::SyntheticOptions bench_options(std::size_t sentences) {
  testsupport::SyntheticOptions opt;
  opt.num_examples = 1;
  opt.sentences_per_example = sentences;
  opt.filler_len = 12;
  opt.planted_len = 8;
  return opt;
}

model::ModelConfig bench_model_config(std::size_t vocab_size) {
  model::ModelConfig c;
  c.vocab_size = vocab_size;
  c.d_w = 32;
  c.d_s = 32;
  c.d_e = 8;
  c.d_h = 32;
  c.heads = 4;
  c.ffn_inner = 64;
  c.cnn_filters = 16;
  c.num_buckets = 10;
  return c;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string line =
      "The U.S.-based committee's long-awaited report, published on Tuesday, "
      "recommends twelve separate changes to the funding model.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(text::tokenize(line));
  }
}
BENCHMARK(BM_Tokenize);

void BM_BuildGraph(benchmark::State& state) {
  auto corpus = testsupport::make_corpus(bench_options(state.range(0)));
  auto vocab = text::build_vocab(corpus, 50000);
  auto bounds = graph::fit_bucket_boundaries(corpus, vocab, 10, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(graph::build_hsg(corpus[0], vocab, bounds));
  }
}
BENCHMARK(BM_BuildGraph)->Arg(10)->Arg(50);

void BM_RougeL(benchmark::State& state) {
  auto corpus = testsupport::make_corpus(bench_options(30));
  auto cand = corpus[0].sentences;
  cand.resize(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rouge::rouge_l_summary(cand, corpus[0].reference_summary));
  }
}
BENCHMARK(BM_RougeL);

void BM_GreedyOracle(benchmark::State& state) {
  auto corpus = testsupport::make_corpus(bench_options(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rouge::greedy_oracle(corpus[0], 3));
  }
}
BENCHMARK(BM_GreedyOracle)->Arg(10)->Arg(50);

void BM_ModelForward(benchmark::State& state) {
  auto corpus = testsupport::make_corpus(bench_options(20));
  auto vocab = text::build_vocab(corpus, 50000);
  auto bounds = graph::fit_bucket_boundaries(corpus, vocab, 10, false);
  auto g = graph::build_hsg(corpus[0], vocab, bounds);
  auto ids = model::encode_sentences(corpus[0], vocab);
  auto c = bench_model_config(vocab.size());
  c.iterations = static_cast<std::size_t>(state.range(0));
  auto params = model::init_params(c, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model::forward(params, g, ids, corpus[0].doc_boundaries));
  }
}
BENCHMARK(BM_ModelForward)->Arg(0)->Arg(1)->Arg(3);

void BM_ModelForwardBackward(benchmark::State& state) {
  auto corpus = testsupport::make_corpus(bench_options(20));
  auto vocab = text::build_vocab(corpus, 50000);
  auto bounds = graph::fit_bucket_boundaries(corpus, vocab, 10, false);
  auto g = graph::build_hsg(corpus[0], vocab, bounds);
  auto ids = model::encode_sentences(corpus[0], vocab);
  auto c = bench_model_config(vocab.size());
  c.iterations = 1;
  auto params = model::init_params(c, 1);
  std::vector<double> y(corpus[0].num_sentences(), 0.0);
  y[0] = 1.0;
  for (auto _ : state) {
    nn::Tape tape;
    nn::TapeScope scope(tape);
    auto loss = nn::bce_with_logits_mean(
        model::forward(params, g, ids, corpus[0].doc_boundaries), y);
    tape.backward(loss);
    for (auto& p : params.all()) p.tensor.zero_grad();
  }
}
BENCHMARK(BM_ModelForwardBackward);

}  // namespace

BENCHMARK_MAIN();
