#pragma once

#include <string>
#include <utility>
#include <vector>

#include "graphsum/dataset.hpp"

namespace graphsum::rouge {

enum class Variant { R1, R2, RL };

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Variant variant = Variant::R1;
};

using Tokens = std::vector<std::string>;
using Sentences = std::vector<Tokens>;

// Clipped n-gram overlap, n in {1, 2}. Empty reference scores zero.
RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, int n);

// Plain LCS over two flat token sequences.
RougeScore rouge_l(const Tokens& candidate, const Tokens& reference);

// Summary-level ROUGE-L: per reference sentence, the union of LCS matches
// against every candidate sentence; hits aggregate over the summary.
RougeScore rouge_l_summary(const Sentences& candidate, const Sentences& reference);

// Candidate truncated to the reference token length, then R-1/R-2 recall.
std::pair<RougeScore, RougeScore> limited_length_recall(const Sentences& selected,
                                                        const Sentences& reference);

// Greedy oracle: repeatedly add the sentence with the largest strict
// increase in mean(R1 f1, R2 f1) against the reference; ties take the
// smaller index. Returns one 0/1 label per sentence.
std::vector<int> greedy_oracle(const data::Example& ex, std::size_t max_select);

// Selection score used by the oracle, exposed for test oracles.
double oracle_objective(const Sentences& doc, const std::vector<std::size_t>& selection,
                        const Tokens& reference_flat);

Tokens flatten(const Sentences& sentences);

}  // namespace graphsum::rouge
