#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphsum/dataset.hpp"

namespace graphsum::text {

constexpr int kPadId = 0;
constexpr int kUnkId = 1;
constexpr const char* kPadToken = "<pad>";
constexpr const char* kUnkToken = "<unk>";

// Word <-> id map with corpus statistics and the low-TF-IDF filter set.
// Ids are dense in [0, size()); specials occupy ids 0 and 1 and never
// enter the filter set.
struct Vocabulary {
  std::vector<std::string> id_to_word;
  std::unordered_map<std::string, int> word_to_id;
  std::vector<std::int64_t> term_freq;  // total occurrences across the corpus
  std::vector<std::int64_t> doc_freq;   // source documents containing the word
  std::int64_t num_docs = 0;            // source documents in the corpus
  std::unordered_set<int> filtered_set;

  std::size_t size() const { return id_to_word.size(); }
  int id_of(const std::string& word) const {
    auto it = word_to_id.find(word);
    return it == word_to_id.end() ? kUnkId : it->second;
  }
  bool filtered(int id) const { return filtered_set.count(id) > 0; }
};

// Top-`limit` words by corpus frequency (ties lexicographic), plus the two
// specials. Counts come from document sentences; each doc_boundaries range
// counts as one document for doc_freq.
Vocabulary build_vocab(const std::vector<data::Example>& corpus, std::size_t limit);

// filtered_set = stopwords | punctuation | bottom `fraction` of the
// remaining vocabulary by corpus TF-IDF = term_freq * ln(N / (1 + doc_freq)).
void compute_word_filter(Vocabulary& vocab, double fraction);

// |V| x dim embedding table. Rows found in the GloVe-style text file are
// loaded; everything else is N(0, 0.1^2) from the given seed.
std::vector<double> load_embeddings(const Vocabulary& vocab, std::size_t dim,
                                    const std::string& path, std::uint64_t seed);
std::vector<double> random_embeddings(std::size_t vocab_size, std::size_t dim,
                                      std::uint64_t seed);

}  // namespace graphsum::text
