#include <cmath>
#include <map>

#include <doctest.h>

#include "graphsum/graph.hpp"
#include "graphsum/text.hpp"
#include "reference.hpp"
#include "synthetic.hpp"

using namespace graphsum;

namespace {

data::Example example_from(const std::vector<std::string>& raw,
                           std::vector<std::pair<std::size_t, std::size_t>> docs = {}) {
  data::Example ex;
  for (const auto& s : raw) {
    ex.sentences.push_back(text::tokenize(s));
    ex.raw_sentences.push_back(s);
  }
  ex.reference_summary = {text::tokenize(raw.empty() ? "ref" : raw[0])};
  ex.doc_boundaries = docs.empty()
                          ? decltype(docs){{0, ex.sentences.size()}}
                          : std::move(docs);
  return ex;
}

text::Vocabulary vocab_for(const std::vector<data::Example>& corpus) {
  return text::build_vocab(corpus, 1000);
}

}  // namespace

TEST_CASE("edge TF-IDF fixtures") {
  // Word in 1 of 4 sentences, twice there: 2 * ln(4/2).
  CHECK(graph::edge_tfidf(2, 1, 4) == doctest::Approx(2.0 * std::log(2.0)));
  // Word in every sentence: ln(N/(N+1)) < 0 clamps to the floor.
  CHECK(graph::edge_tfidf(1, 8, 8) == graph::kTfidfFloor);
  // Sole sentence of a 1-sentence doc: ln(1/2) < 0 clamps too.
  CHECK(graph::edge_tfidf(1, 1, 1) == graph::kTfidfFloor);
  CHECK_THROWS(graph::edge_tfidf(0, 1, 4));
}

TEST_CASE("bucketize uses half-open intervals") {
  const std::vector<double> bounds = {1.0, 2.0, 3.0};
  CHECK(graph::bucketize(0.5, bounds) == 0);
  CHECK(graph::bucketize(2.0, bounds) == 2);
  CHECK(graph::bucketize(2.5, bounds) == 2);
  CHECK(graph::bucketize(99.0, bounds) == 3);
  CHECK(graph::bucketize(0.5, {}) == 0);
  CHECK_THROWS(graph::bucketize(0.0, bounds));
}

TEST_CASE("two-sentence containment graph") {
  auto ex = example_from({"a b", "b c"});
  auto vocab = vocab_for({ex});  // no filtering
  auto g = graph::build_hsg(ex, vocab, {});

  CHECK(g.num_sentences == 2);
  CHECK(g.num_docs == 0);
  REQUIRE(g.num_words() == 3);
  std::map<std::string, std::size_t> windex;
  for (std::size_t w = 0; w < g.num_words(); ++w) {
    windex[vocab.id_to_word[static_cast<std::size_t>(g.word_ids[w])]] = w;
  }
  std::set<std::pair<std::size_t, std::size_t>> expect = {
      {windex["a"], 0}, {windex["b"], 0}, {windex["b"], 1}, {windex["c"], 1}};
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const auto& e : g.edges) got.insert({e.word, e.supernode});
  CHECK(got == expect);

  CHECK(g.word_adj[windex["b"]].size() == 2);
  CHECK(g.word_adj[windex["a"]].size() == 1);
  CHECK(g.word_adj[windex["c"]].size() == 1);
  // b appears in both of the 2 sentences: idf ln(2/3) < 0 -> floor.
  for (const auto& e : g.edges) {
    if (e.word == windex["b"]) CHECK(e.tfidf == graph::kTfidfFloor);
    // tf=1, ln(N / (1 + df)) = ln(2/2) = 0, clamped up to the floor.
    if (e.word == windex["a"]) CHECK(e.tfidf == graph::kTfidfFloor);
  }
  try {
    graph::build_hsg(data::Example{}, vocab, {});
    FAIL("expected empty-document error");
  } catch (const std::exception& err) {
    CHECK(std::string(err.what()).find("empty") != std::string::npos);
  }
}

TEST_CASE("shared word connects sentences across documents") {
  // Two docs of two sentences; wone appears in s0, s1, s2 but not s3.
  auto ex = example_from({"wone xx", "wone yy", "wone zz", "qq rr"},
                         {{0, 2}, {2, 4}});
  auto vocab = vocab_for({ex});
  auto g = graph::build_hdsg(ex, vocab, {});
  CHECK(g.num_docs == 2);
  CHECK(g.num_sentences == 4);

  std::size_t wone = g.num_words();
  for (std::size_t w = 0; w < g.num_words(); ++w) {
    if (vocab.id_to_word[static_cast<std::size_t>(g.word_ids[w])] == "wone") wone = w;
  }
  REQUIRE(wone < g.num_words());
  std::set<std::pair<bool, std::size_t>> neighbors;
  for (std::size_t e : g.word_adj[wone]) {
    neighbors.insert({g.edges[e].kind == graph::SupernodeKind::Document,
                      g.edges[e].supernode});
  }
  // Adjacent to sentences 0,1,2 and both documents.
  std::set<std::pair<bool, std::size_t>> expect = {
      {false, 0}, {false, 1}, {false, 2}, {true, 0}, {true, 1}};
  CHECK(neighbors == expect);
}

TEST_CASE("single-document graph with document node extends the sentence graph") {
  auto ex = example_from({"a b", "b c"});
  auto vocab = vocab_for({ex});
  auto hsg = graph::build_hsg(ex, vocab, {});
  auto hdsg = graph::build_hdsg(ex, vocab, {});
  CHECK(hdsg.num_docs == 1);
  CHECK(hdsg.word_ids == hsg.word_ids);

  std::size_t sent_edges = 0, doc_edges = 0;
  for (const auto& e : hdsg.edges) {
    (e.kind == graph::SupernodeKind::Sentence ? sent_edges : doc_edges)++;
  }
  CHECK(sent_edges == hsg.edges.size());
  // The document node connects to every word of the doc.
  CHECK(doc_edges == hdsg.num_words());
  CHECK(hdsg.doc_adj[0].size() == hdsg.num_words());
}

TEST_CASE("filtered-out words leave a fallback edge for empty sentences") {
  auto ex = example_from({"cat dog", "the of"});
  auto vocab = vocab_for({ex});
  text::compute_word_filter(vocab, 0.0);  // stopwords/punctuation only
  auto g = graph::build_hsg(ex, vocab, {});
  // Sentence 1 holds only stopwords; it must still reach the graph via the
  // unknown-word node.
  bool unk_edge = false;
  for (const auto& e : g.edges) {
    if (e.supernode == 1 && e.kind == graph::SupernodeKind::Sentence) {
      CHECK(g.word_ids[e.word] == text::kUnkId);
      CHECK(e.tfidf == graph::kTfidfFloor);
      unk_edge = true;
    }
  }
  CHECK(unk_edge);
  for (const auto& adj : g.sent_adj) CHECK_FALSE(adj.empty());
}

TEST_CASE("graphs match brute-force containment recomputation") {
  auto corpus = testsupport::make_random_corpus(40, 10, 3, 77);
  auto vocab = vocab_for(corpus);
  text::compute_word_filter(vocab, 0.10);
  for (const auto& ex : corpus) {
    auto hsg = graph::build_hsg(ex, vocab, {});
    CHECK(testsupport::edge_triples(hsg) ==
          testsupport::ref_containment_edges(ex, vocab, false));
    auto hdsg = graph::build_hdsg(ex, vocab, {});
    CHECK(testsupport::edge_triples(hdsg) ==
          testsupport::ref_containment_edges(ex, vocab, true));
  }
}

TEST_CASE("equal-frequency buckets each hold roughly a tenth of the edges") {
  auto corpus = testsupport::make_random_corpus(60, 12, 1, 5);
  auto vocab = vocab_for(corpus);
  auto bounds = graph::fit_bucket_boundaries(corpus, vocab, 10, false);
  CHECK(bounds.size() <= 9);
  CHECK(std::is_sorted(bounds.begin(), bounds.end()));

  std::vector<std::size_t> counts(bounds.size() + 1, 0);
  std::size_t total = 0;
  for (const auto& ex : corpus) {
    auto g = graph::build_hsg(ex, vocab, bounds);
    for (const auto& e : g.edges) {
      counts[static_cast<std::size_t>(e.bucket)]++;
      ++total;
    }
  }
  // Weight ties (repeated tf-idf values) make exact tenths impossible, but
  // quantile cuts must keep every bucket populated and no bucket dominant.
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double share = static_cast<double>(counts[b]) / static_cast<double>(total);
    CHECK(share > 0.0);
    CHECK(share < 0.30);
  }
}

TEST_CASE("graph json export mentions every edge") {
  auto ex = example_from({"a b"});
  auto vocab = vocab_for({ex});
  auto g = graph::build_hsg(ex, vocab, {});
  auto j = g.to_json();
  CHECK(j.find("\"edges\"") != std::string::npos);
  CHECK(j.find("\"word_ids\"") != std::string::npos);
}
