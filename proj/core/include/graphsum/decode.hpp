#pragma once

#include <string>
#include <vector>

namespace graphsum::decode {

struct Selection {
  std::vector<std::size_t> sentence_indices;  // document order
  std::vector<double> scores;                 // per input sentence
};

// k highest-scoring sentences (ties toward the smaller index), emitted in
// document order. k larger than n selects everything.
Selection select_topk(const std::vector<double>& scores, std::size_t k);

// Descending-score scan; a sentence is accepted only if none of its
// trigrams occurs in an already accepted sentence. Sentences with fewer
// than three tokens have no trigrams and are never blocked. No backfilling
// when fewer than k survive.
Selection trigram_blocking(const std::vector<double>& scores,
                           const std::vector<std::vector<std::string>>& sentences,
                           std::size_t k);

}  // namespace graphsum::decode
