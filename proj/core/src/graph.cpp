#include "graphsum/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace graphsum::graph {

double edge_tfidf(std::int64_t term_freq, std::int64_t word_degree,
                  std::int64_t num_supernodes) {
  if (term_freq <= 0) {
    throw std::runtime_error("edge_tfidf: word absent from supernode, edge must not exist");
  }
  const double idf = std::log(static_cast<double>(num_supernodes) /
                              (1.0 + static_cast<double>(word_degree)));
  return std::max(static_cast<double>(term_freq) * idf, kTfidfFloor);
}

int bucketize(double tfidf, const std::vector<double>& boundaries) {
  if (tfidf <= 0.0) {
    throw std::runtime_error("bucketize: nonpositive tfidf " + std::to_string(tfidf));
  }
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), tfidf);
  // upper_bound puts a value equal to a boundary into the bucket above it,
  // giving half-open [b_k, b_{k+1}) intervals.
  return static_cast<int>(it - boundaries.begin());
}

namespace {

// Per-supernode counts of surviving (in-vocab, unfiltered) word ids.
std::vector<std::map<int, std::int64_t>> count_words(
    const data::Example& ex, const text::Vocabulary& vocab,
    const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
  std::vector<std::map<int, std::int64_t>> counts(ranges.size());
  for (std::size_t r = 0; r < ranges.size(); ++r) {
    for (std::size_t s = ranges[r].first; s < ranges[r].second; ++s) {
      for (const auto& tok : ex.sentences[s]) {
        const int id = vocab.id_of(tok);
        if (id <= text::kUnkId || vocab.filtered(id)) continue;
        ++counts[r][id];
      }
    }
  }
  return counts;
}

}  // namespace

std::vector<double> fit_bucket_boundaries(const std::vector<data::Example>& train,
                                          const text::Vocabulary& vocab,
                                          std::size_t num_buckets, bool with_doc_nodes) {
  std::vector<double> weights;
  for (const auto& ex : train) {
    if (ex.num_sentences() == 0) continue;
    HeteroGraph g = with_doc_nodes ? build_hdsg(ex, vocab, {})
                                   : build_hsg(ex, vocab, {});
    for (const auto& e : g.edges) weights.push_back(e.tfidf);
  }
  std::sort(weights.begin(), weights.end());
  std::vector<double> boundaries;
  for (std::size_t b = 1; b < num_buckets && !weights.empty(); ++b) {
    const double cut = weights[b * weights.size() / num_buckets];
    if (boundaries.empty() || cut > boundaries.back()) boundaries.push_back(cut);
  }
  return boundaries;
}

namespace {

HeteroGraph build(const data::Example& ex, const text::Vocabulary& vocab,
                  const std::vector<double>& boundaries, bool with_doc_nodes) {
  if (ex.num_sentences() == 0) throw std::runtime_error("empty document");
  const std::size_t n = ex.num_sentences();

  std::vector<std::pair<std::size_t, std::size_t>> sent_ranges;
  for (std::size_t s = 0; s < n; ++s) sent_ranges.emplace_back(s, s + 1);
  auto sent_counts = count_words(ex, vocab, sent_ranges);

  std::set<int> word_set;
  for (const auto& c : sent_counts)
    for (const auto& [id, cnt] : c) word_set.insert(id);
  bool need_unk = false;
  for (const auto& c : sent_counts) {
    if (c.empty()) need_unk = true;
  }

  std::vector<std::map<int, std::int64_t>> doc_counts;
  std::int64_t num_docs = 0;
  if (with_doc_nodes) {
    num_docs = static_cast<std::int64_t>(ex.doc_boundaries.size());
    doc_counts = count_words(ex, vocab, ex.doc_boundaries);
    for (const auto& c : doc_counts) {
      if (c.empty()) need_unk = true;
    }
  }
  if (need_unk) word_set.insert(text::kUnkId);

  HeteroGraph g;
  g.word_ids.assign(word_set.begin(), word_set.end());
  g.num_sentences = n;
  g.num_docs = with_doc_nodes ? ex.doc_boundaries.size() : 0;

  std::map<int, std::size_t> word_index;
  for (std::size_t i = 0; i < g.word_ids.size(); ++i) word_index[g.word_ids[i]] = i;

  // Out-degrees over each supernode population.
  std::map<int, std::int64_t> sent_deg, doc_deg;
  for (const auto& c : sent_counts)
    for (const auto& [id, cnt] : c) ++sent_deg[id];
  for (const auto& c : doc_counts)
    for (const auto& [id, cnt] : c) ++doc_deg[id];

  auto add_edge = [&](std::size_t w, std::size_t super, SupernodeKind kind, double tfidf) {
    g.edges.push_back({w, super, kind, tfidf, bucketize(tfidf, boundaries)});
  };

  for (std::size_t s = 0; s < n; ++s) {
    if (sent_counts[s].empty()) {
      add_edge(word_index[text::kUnkId], s, SupernodeKind::Sentence, kTfidfFloor);
      continue;
    }
    for (const auto& [id, cnt] : sent_counts[s]) {
      add_edge(word_index[id], s, SupernodeKind::Sentence,
               edge_tfidf(cnt, sent_deg[id], static_cast<std::int64_t>(n)));
    }
  }
  for (std::size_t d = 0; d < doc_counts.size(); ++d) {
    if (doc_counts[d].empty()) {
      add_edge(word_index[text::kUnkId], d, SupernodeKind::Document, kTfidfFloor);
      continue;
    }
    for (const auto& [id, cnt] : doc_counts[d]) {
      add_edge(word_index[id], d, SupernodeKind::Document,
               edge_tfidf(cnt, doc_deg[id], num_docs));
    }
  }

  g.word_adj.resize(g.word_ids.size());
  g.sent_adj.resize(n);
  g.doc_adj.resize(g.num_docs);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    g.word_adj[g.edges[e].word].push_back(e);
    if (g.edges[e].kind == SupernodeKind::Sentence) {
      g.sent_adj[g.edges[e].supernode].push_back(e);
    } else {
      g.doc_adj[g.edges[e].supernode].push_back(e);
    }
  }
  return g;
}

}  // namespace

HeteroGraph build_hsg(const data::Example& ex, const text::Vocabulary& vocab,
                      const std::vector<double>& boundaries) {
  return build(ex, vocab, boundaries, false);
}

HeteroGraph build_hdsg(const data::Example& ex, const text::Vocabulary& vocab,
                       const std::vector<double>& boundaries) {
  return build(ex, vocab, boundaries, true);
}

std::string HeteroGraph::to_json() const {
  nlohmann::json j;
  j["word_ids"] = word_ids;
  j["num_sentences"] = num_sentences;
  j["num_docs"] = num_docs;
  nlohmann::json edges_json = nlohmann::json::array();
  for (const auto& e : edges) {
    edges_json.push_back({{"word", e.word},
                          {"supernode", e.supernode},
                          {"kind", e.kind == SupernodeKind::Sentence ? "sentence" : "document"},
                          {"tfidf", e.tfidf},
                          {"bucket", e.bucket}});
  }
  j["edges"] = edges_json;
  return j.dump();
}

}  // namespace graphsum::graph
