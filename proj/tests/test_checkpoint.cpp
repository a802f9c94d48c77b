#include <cstring>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "graphsum/checkpoint.hpp"
#include "graphsum/graph.hpp"
#include "graphsum/model.hpp"
#include "graphsum/text.hpp"
#include "synthetic.hpp"

using namespace graphsum;

namespace {

std::string temp_path(const std::string& name) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "graphsum_test_ckpt";
  fs::create_directories(dir);
  return (dir / name).string();
}

train::Checkpoint make_checkpoint(bool hdsg) {
  testsupport::SyntheticOptions opt;
  opt.num_examples = 4;
  if (hdsg) opt.docs_per_example = 2;
  auto corpus = testsupport::make_corpus(opt);
  auto vocab = text::build_vocab(corpus, 1000);

  model::ModelConfig c;
  c.vocab_size = vocab.size();
  c.d_w = 6;
  c.d_s = 8;
  c.d_e = 4;
  c.d_h = 4;
  c.heads = 2;
  c.ffn_inner = 8;
  c.cnn_filters = 3;
  c.num_buckets = 4;
  c.hdsg = hdsg;

  train::Checkpoint ckpt;
  ckpt.params = model::init_params(c, 21);
  ckpt.vocab = vocab;
  ckpt.bucket_boundaries = graph::fit_bucket_boundaries(corpus, vocab, 4, hdsg);
  ckpt.epoch = 7;
  ckpt.best_valid_loss = 0.123456789;
  return ckpt;
}

}  // namespace

TEST_CASE("checkpoints round-trip bitwise") {
  for (bool hdsg : {false, true}) {
    CAPTURE(hdsg);
    auto ckpt = make_checkpoint(hdsg);
    const auto path = temp_path(hdsg ? "hdsg.ckpt" : "hsg.ckpt");
    train::save_checkpoint(path, ckpt);
    auto loaded = train::load_checkpoint(path);

    CHECK(loaded.epoch == 7);
    CHECK(loaded.best_valid_loss == 0.123456789);
    CHECK(loaded.bucket_boundaries == ckpt.bucket_boundaries);
    CHECK(loaded.vocab.id_to_word == ckpt.vocab.id_to_word);
    CHECK(loaded.vocab.doc_freq == ckpt.vocab.doc_freq);
    CHECK(loaded.vocab.filtered_set == ckpt.vocab.filtered_set);
    CHECK(loaded.params.config.hdsg == hdsg);

    auto a = train::checkpoint_tensors(ckpt.params);
    auto b = train::checkpoint_tensors(loaded.params);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].name == b[i].name);
      REQUIRE(a[i].tensor.size() == b[i].tensor.size());
      // Bitwise equality, not approximate.
      CHECK(std::memcmp(a[i].tensor.data().data(), b[i].tensor.data().data(),
                        a[i].tensor.size() * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("loaded checkpoints reproduce identical logits") {
  testsupport::SyntheticOptions opt;
  opt.num_examples = 3;
  auto corpus = testsupport::make_corpus(opt);
  auto ckpt = make_checkpoint(false);
  const auto path = temp_path("logits.ckpt");
  train::save_checkpoint(path, ckpt);
  auto loaded = train::load_checkpoint(path);

  for (const auto& ex : corpus) {
    auto g = graph::build_hsg(ex, ckpt.vocab, ckpt.bucket_boundaries);
    auto ids = model::encode_sentences(ex, ckpt.vocab);
    auto before = model::forward(ckpt.params, g, ids, ex.doc_boundaries).data();
    auto after = model::forward(loaded.params, g, ids, ex.doc_boundaries).data();
    CHECK(before == after);  // bitwise
  }
}

TEST_CASE("version and truncation errors") {
  auto ckpt = make_checkpoint(false);
  const auto path = temp_path("tamper.ckpt");
  train::save_checkpoint(path, ckpt);

  // Bump the version byte.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.put(char(9));
  }
  CHECK_THROWS(train::load_checkpoint(path));

  // Truncated file.
  train::save_checkpoint(path, ckpt);
  const auto trunc = temp_path("trunc.ckpt");
  {
    std::ifstream in(path, std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    std::ofstream out(trunc, std::ios::binary);
    out.write(all.data(), static_cast<std::streamsize>(all.size() / 2));
  }
  CHECK_THROWS(train::load_checkpoint(trunc));

  CHECK_THROWS(train::load_checkpoint(temp_path("missing.ckpt")));
}
