#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphsum/dataset.hpp"
#include "graphsum/vocab.hpp"

namespace graphsum::graph {

// Present edges must keep a strictly positive weight even when the raw
// TF-IDF goes nonpositive.
constexpr double kTfidfFloor = 1e-4;

enum class SupernodeKind { Sentence, Document };

struct Edge {
  std::size_t word;       // index into word_ids
  std::size_t supernode;  // sentence index or document index, per kind
  SupernodeKind kind;
  double tfidf;
  int bucket;
};

// Bipartite (word+sentence) or tripartite (word+sentence+document) graph
// for one example. Words connect only to the supernodes containing them;
// there are no edges within a node type. Immutable after construction.
struct HeteroGraph {
  std::vector<int> word_ids;  // vocabulary ids, ascending
  std::size_t num_sentences = 0;
  std::size_t num_docs = 0;  // 0 for HSG
  std::vector<Edge> edges;
  // Adjacency as edge-index lists, symmetric across endpoints.
  std::vector<std::vector<std::size_t>> word_adj;
  std::vector<std::vector<std::size_t>> sent_adj;
  std::vector<std::vector<std::size_t>> doc_adj;

  std::size_t num_words() const { return word_ids.size(); }
  std::string to_json() const;
};

// TF(w, s) * ln(N / (1 + deg(w))), clamped below at kTfidfFloor. N is the
// supernode population of the edge's kind and deg the word's out-degree
// within it. A zero term frequency means the edge must not exist.
double edge_tfidf(std::int64_t term_freq, std::int64_t word_degree,
                  std::int64_t num_supernodes);

// Index of the half-open interval containing tfidf; boundaries are the
// B-1 strictly increasing cut points of B buckets.
int bucketize(double tfidf, const std::vector<double>& boundaries);

// Equal-frequency quantile cut points over all edge weights of the
// training split (duplicates collapse, so the result may be shorter).
std::vector<double> fit_bucket_boundaries(const std::vector<data::Example>& train,
                                          const text::Vocabulary& vocab,
                                          std::size_t num_buckets, bool with_doc_nodes);

HeteroGraph build_hsg(const data::Example& ex, const text::Vocabulary& vocab,
                      const std::vector<double>& boundaries);
// HSG over the concatenated sentences plus one document node per source
// document. Word-document IDF uses the document population.
HeteroGraph build_hdsg(const data::Example& ex, const text::Vocabulary& vocab,
                       const std::vector<double>& boundaries);

}  // namespace graphsum::graph
