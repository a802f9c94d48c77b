#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "graphsum/dataset.hpp"
#include "graphsum/text.hpp"
#include "graphsum/vocab.hpp"

using namespace graphsum;

namespace {

data::Example example_from(const std::vector<std::string>& raw,
                           const std::vector<std::string>& summary = {"ref"}) {
  data::Example ex;
  for (const auto& s : raw) {
    ex.sentences.push_back(text::tokenize(s));
    ex.raw_sentences.push_back(s);
  }
  for (const auto& s : summary) ex.reference_summary.push_back(text::tokenize(s));
  ex.doc_boundaries = {{0, ex.sentences.size()}};
  return ex;
}

}  // namespace

TEST_CASE("tokenizer fixtures") {
  CHECK(text::tokenize("The cat sat.") ==
        std::vector<std::string>{"the", "cat", "sat", "."});
  CHECK(text::tokenize("").empty());
  CHECK(text::tokenize("   \t  ").empty());
  // Golden output for mixed internal punctuation, frozen once.
  CHECK(text::tokenize("U.S.-based firm's") ==
        std::vector<std::string>{"u.s", ".", "-", "based", "firm's"});
  CHECK(text::tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
  CHECK(text::tokenize("a,b") == std::vector<std::string>{"a", ",", "b"});
}

TEST_CASE("tokenizer is idempotent on its own output") {
  for (const char* raw : {"The cat sat.", "U.S.-based firm's", "Hello, World! 42"}) {
    auto once = text::tokenize(raw);
    for (const auto& tok : once) {
      CHECK(text::tokenize(tok) == std::vector<std::string>{tok});
    }
  }
}

TEST_CASE("punctuation and stopword predicates") {
  CHECK(text::is_punctuation("."));
  CHECK(text::is_punctuation("!?"));
  CHECK_FALSE(text::is_punctuation("a."));
  CHECK(text::is_stopword("the"));
  CHECK(text::is_stopword("and"));
  CHECK_FALSE(text::is_stopword("cat"));
  CHECK(text::stopwords().size() > 100);
}

TEST_CASE("vocabulary keeps the top words by count") {
  std::vector<data::Example> corpus = {
      example_from({"a a a b", "a a b c"}),
      example_from({"a b"}),
  };
  auto vocab = text::build_vocab(corpus, 2);
  CHECK(vocab.size() == 4);  // pad, unk, a, b
  CHECK(vocab.id_to_word[text::kPadId] == "<pad>");
  CHECK(vocab.id_to_word[text::kUnkId] == "<unk>");
  CHECK(vocab.id_of("a") == 2);
  CHECK(vocab.id_of("b") == 3);
  CHECK(vocab.id_of("c") == text::kUnkId);
  CHECK(vocab.term_freq[2] == 6);
  CHECK(vocab.num_docs == 2);
}

TEST_CASE("vocabulary ties at the cutoff keep the lexicographically smaller word") {
  std::vector<data::Example> corpus = {example_from({"zeta apple zeta apple mango"})};
  auto vocab = text::build_vocab(corpus, 3);
  // counts: apple 2, zeta 2, mango 1; limit 3 keeps all; order by count
  // descending then lexicographic.
  CHECK(vocab.id_to_word[2] == "apple");
  CHECK(vocab.id_to_word[3] == "zeta");
  CHECK(vocab.id_to_word[4] == "mango");

  auto small = text::build_vocab(corpus, 2);
  CHECK(small.id_of("apple") != text::kUnkId);
  CHECK(small.id_of("zeta") != text::kUnkId);
  CHECK(small.id_of("mango") == text::kUnkId);
}

TEST_CASE("document frequency equals a brute-force recount") {
  std::vector<data::Example> corpus;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> sents;
    sents.push_back(i % 2 ? "alpha beta" : "alpha gamma");
    if (i % 5 == 0) sents.push_back("delta");
    corpus.push_back(example_from(sents));
  }
  auto vocab = text::build_vocab(corpus, 100);
  for (std::size_t id = 2; id < vocab.size(); ++id) {
    const std::string& w = vocab.id_to_word[id];
    std::int64_t expected = 0;
    for (const auto& ex : corpus) {
      bool found = false;
      for (const auto& s : ex.sentences) {
        for (const auto& tok : s) {
          if (tok == w) found = true;
        }
      }
      expected += found ? 1 : 0;
    }
    CHECK(vocab.doc_freq[id] == expected);
  }
}

TEST_CASE("word filter: fraction zero keeps only stopwords and punctuation") {
  std::vector<data::Example> corpus = {example_from({"the cat sat on . a mat"})};
  auto vocab = text::build_vocab(corpus, 100);
  text::compute_word_filter(vocab, 0.0);
  CHECK(vocab.filtered(vocab.id_of("the")));
  CHECK(vocab.filtered(vocab.id_of(".")));
  CHECK(vocab.filtered(vocab.id_of("on")));
  CHECK_FALSE(vocab.filtered(vocab.id_of("cat")));
  CHECK_FALSE(vocab.filtered(vocab.id_of("mat")));
}

TEST_CASE("word filter removes the lowest-TF-IDF fraction, verified by brute force") {
  // 100 distinct non-stopword words with distinct frequencies.
  std::vector<data::Example> corpus;
  for (int w = 0; w < 100; ++w) {
    std::vector<std::string> sents;
    std::string word = "word" + std::to_string(w);
    std::string sent;
    for (int r = 0; r <= w % 10; ++r) sent += word + " ";
    sents.push_back(sent);
    corpus.push_back(example_from(sents));
  }
  auto vocab = text::build_vocab(corpus, 1000);
  text::compute_word_filter(vocab, 0.10);

  // Independent oracle: sort by tf * ln(N/(1+df)), tie by word, drop lowest 10%.
  struct Entry {
    double score;
    std::string word;
    int id;
  };
  std::vector<Entry> entries;
  for (std::size_t id = 2; id < vocab.size(); ++id) {
    if (text::is_stopword(vocab.id_to_word[id]) ||
        text::is_punctuation(vocab.id_to_word[id])) {
      continue;
    }
    double score = static_cast<double>(vocab.term_freq[id]) *
                   std::log(static_cast<double>(vocab.num_docs) /
                            (1.0 + static_cast<double>(vocab.doc_freq[id])));
    entries.push_back({score, vocab.id_to_word[id], static_cast<int>(id)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.score != b.score ? a.score < b.score : a.word < b.word;
  });
  const std::size_t drop = entries.size() / 10;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(vocab.filtered(entries[i].id) == (i < drop));
  }
}

TEST_CASE("truncation caps") {
  std::vector<std::string> sixty(60, "tok tok tok");
  auto ex = example_from(sixty);
  auto t = data::truncate(ex, 50, 500);
  CHECK(t.num_sentences() == 50);
  CHECK(t.doc_boundaries == decltype(t.doc_boundaries){{0, 50}});

  // Multi-doc: 13 sentences of 40 tokens = 520; budget 500 keeps 12.
  data::Example multi;
  for (int s = 0; s < 13; ++s) {
    multi.sentences.push_back(std::vector<std::string>(40, "w"));
    multi.raw_sentences.push_back("w");
  }
  multi.reference_summary = {{"w"}};
  multi.doc_boundaries = {{0, 7}, {7, 13}};
  auto tm = data::truncate(multi, 50, 500);
  // Budget applies per source document: both fit (280 + 240 tokens).
  CHECK(tm.num_sentences() == 13);

  data::Example one_doc;
  for (int s = 0; s < 13; ++s) {
    one_doc.sentences.push_back(std::vector<std::string>(40, "w"));
    one_doc.raw_sentences.push_back("w");
  }
  one_doc.reference_summary = {{"w"}};
  one_doc.doc_boundaries = {{0, 6}, {6, 13}};
  // Second doc has 7*40=280 <= 500; shrink budget to force the cut:
  auto cut = data::truncate(one_doc, 50, 200);
  // 200/40 = 5 sentences per doc survive.
  CHECK(cut.num_sentences() == 10);
  CHECK(cut.doc_boundaries == decltype(cut.doc_boundaries){{0, 5}, {5, 10}});

  data::Example empty;
  auto te = data::truncate(empty, 50, 500);
  CHECK(te.num_sentences() == 0);
}

TEST_CASE("jsonl round trip and line-numbered errors") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "graphsum_test_jsonl";
  fs::create_directories(dir);
  const auto good = (dir / "good.jsonl").string();
  {
    std::ofstream out(good);
    out << R"({"text": ["The cat sat.", "A dog ran."], "summary": ["The cat sat."]})" << "\n";
    out << R"({"text": [["Doc one here."], ["Doc two here."]], "summary": ["Doc one here."], "label": [1, 0]})"
        << "\n";
  }
  auto examples = data::read_jsonl(good);
  REQUIRE(examples.size() == 2);
  CHECK(examples[0].sentences[0] == std::vector<std::string>{"the", "cat", "sat", "."});
  CHECK_FALSE(examples[0].multi_doc());
  CHECK(examples[1].multi_doc());
  REQUIRE(examples[1].labels.has_value());
  CHECK((*examples[1].labels)[0] == 1);

  const auto round = (dir / "round.jsonl").string();
  data::write_jsonl(round, examples);
  auto again = data::read_jsonl(round);
  REQUIRE(again.size() == 2);
  CHECK(again[0].sentences == examples[0].sentences);
  CHECK(again[1].doc_boundaries == examples[1].doc_boundaries);
  CHECK(again[1].labels == examples[1].labels);

  const auto bad = (dir / "bad.jsonl").string();
  {
    std::ofstream out(bad);
    out << R"({"text": ["ok"], "summary": ["ok"]})" << "\n";
    out << "{not json\n";
  }
  try {
    data::read_jsonl(bad);
    FAIL("expected parse error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("random embeddings are seeded and pad row is zero") {
  auto a = text::random_embeddings(5, 4, 9);
  auto b = text::random_embeddings(5, 4, 9);
  auto c = text::random_embeddings(5, 4, 10);
  CHECK(a == b);
  CHECK(a != c);
  for (std::size_t j = 0; j < 4; ++j) CHECK(a[j] == 0.0);
}

TEST_CASE("embedding file rows override random initialization") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "graphsum_test_emb";
  fs::create_directories(dir);
  const auto path = (dir / "glove.txt").string();
  {
    std::ofstream out(path);
    out << "cat 1.0 2.0 3.0\n";
  }
  std::vector<data::Example> corpus = {example_from({"cat dog"})};
  auto vocab = text::build_vocab(corpus, 10);
  auto table = text::load_embeddings(vocab, 3, path, 1);
  const auto cat = static_cast<std::size_t>(vocab.id_of("cat"));
  CHECK(table[cat * 3 + 0] == 1.0);
  CHECK(table[cat * 3 + 2] == 3.0);
  const auto dog = static_cast<std::size_t>(vocab.id_of("dog"));
  CHECK(table[dog * 3] != 0.0);  // random fallback
}
