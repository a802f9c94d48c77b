#include "graphsum/rouge.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace graphsum::rouge {

namespace {

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

std::map<std::vector<std::string>, long> ngram_counts(const Tokens& tokens, int n) {
  std::map<std::vector<std::string>, long> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Positions in `ref` matched by one LCS of (ref, cand), via DP backtrace.
std::vector<std::size_t> lcs_ref_positions(const Tokens& ref, const Tokens& cand) {
  const std::size_t n = ref.size(), m = cand.size();
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      dp[i][j] = ref[i - 1] == cand[j - 1] ? dp[i - 1][j - 1] + 1
                                           : std::max(dp[i - 1][j], dp[i][j - 1]);
  std::vector<std::size_t> pos;
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      pos.push_back(i - 1);
      --i;
      --j;
    } else if (dp[i - 1][j] >= dp[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  return pos;
}

}  // namespace

Tokens flatten(const Sentences& sentences) {
  Tokens out;
  for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

RougeScore rouge_n(const Tokens& candidate, const Tokens& reference, int n) {
  RougeScore score;
  score.variant = n == 1 ? Variant::R1 : Variant::R2;
  auto ref_counts = ngram_counts(reference, n);
  long ref_total = 0;
  for (const auto& [g, c] : ref_counts) ref_total += c;
  if (ref_total == 0) return score;
  auto cand_counts = ngram_counts(candidate, n);
  long cand_total = 0, overlap = 0;
  for (const auto& [g, c] : cand_counts) {
    cand_total += c;
    auto it = ref_counts.find(g);
    if (it != ref_counts.end()) overlap += std::min(c, it->second);
  }
  score.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
  score.precision = cand_total > 0
                        ? static_cast<double>(overlap) / static_cast<double>(cand_total)
                        : 0.0;
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

RougeScore rouge_l(const Tokens& candidate, const Tokens& reference) {
  RougeScore score;
  score.variant = Variant::RL;
  if (reference.empty()) return score;
  const double lcs = static_cast<double>(lcs_length(candidate, reference));
  score.recall = lcs / static_cast<double>(reference.size());
  score.precision = candidate.empty() ? 0.0 : lcs / static_cast<double>(candidate.size());
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

RougeScore rouge_l_summary(const Sentences& candidate, const Sentences& reference) {
  RougeScore score;
  score.variant = Variant::RL;
  std::size_t ref_total = 0, cand_total = 0, hits = 0;
  for (const auto& c : candidate) cand_total += c.size();
  for (const auto& r : reference) {
    ref_total += r.size();
    std::set<std::size_t> matched;
    for (const auto& c : candidate) {
      for (std::size_t p : lcs_ref_positions(r, c)) matched.insert(p);
    }
    hits += matched.size();
  }
  if (ref_total == 0) return score;
  score.recall = static_cast<double>(hits) / static_cast<double>(ref_total);
  score.precision =
      cand_total > 0 ? static_cast<double>(hits) / static_cast<double>(cand_total) : 0.0;
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

std::pair<RougeScore, RougeScore> limited_length_recall(const Sentences& selected,
                                                        const Sentences& reference) {
  Tokens ref = flatten(reference);
  Tokens cand = flatten(selected);
  if (cand.size() > ref.size()) cand.resize(ref.size());
  return {rouge_n(cand, ref, 1), rouge_n(cand, ref, 2)};
}

double oracle_objective(const Sentences& doc, const std::vector<std::size_t>& selection,
                        const Tokens& reference_flat) {
  Tokens cand;
  for (std::size_t i : selection) {
    cand.insert(cand.end(), doc[i].begin(), doc[i].end());
  }
  const RougeScore r1 = rouge_n(cand, reference_flat, 1);
  const RougeScore r2 = rouge_n(cand, reference_flat, 2);
  return 0.5 * (r1.f1 + r2.f1);
}

std::vector<int> greedy_oracle(const data::Example& ex, std::size_t max_select) {
  const std::size_t n = ex.num_sentences();
  std::vector<int> labels(n, 0);
  const Tokens ref = flatten(ex.reference_summary);
  if (ref.empty() || n == 0) return labels;
  std::vector<std::size_t> selection;
  double best_score = 0.0;
  while (selection.size() < max_select) {
    double gain_best = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i]) continue;
      std::vector<std::size_t> trial = selection;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), i), i);
      const double s = oracle_objective(ex.sentences, trial, ref);
      // Strictly-better requirement; ties between candidates break toward
      // the smaller index because of scan order.
      if (s > best_score && s - best_score > gain_best) {
        gain_best = s - best_score;
        pick = i;
      }
    }
    if (pick == n) break;
    labels[pick] = 1;
    selection.insert(std::lower_bound(selection.begin(), selection.end(), pick), pick);
    best_score += gain_best;
  }
  return labels;
}

}  // namespace graphsum::rouge
