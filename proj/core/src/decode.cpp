#include "graphsum/decode.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace graphsum::decode {

namespace {

std::vector<std::size_t> rank_desc(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

std::set<std::tuple<std::string, std::string, std::string>> trigrams_of(
    const std::vector<std::string>& tokens) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (std::size_t i = 0; i + 3 <= tokens.size(); ++i) {
    out.emplace(tokens[i], tokens[i + 1], tokens[i + 2]);
  }
  return out;
}

}  // namespace

Selection select_topk(const std::vector<double>& scores, std::size_t k) {
  if (k == 0) throw std::runtime_error("select_topk: k must be positive");
  auto order = rank_desc(scores);
  if (order.size() > k) order.resize(k);
  std::sort(order.begin(), order.end());
  return {order, scores};
}

Selection trigram_blocking(const std::vector<double>& scores,
                           const std::vector<std::vector<std::string>>& sentences,
                           std::size_t k) {
  if (k == 0) throw std::runtime_error("trigram_blocking: k must be positive");
  if (scores.size() != sentences.size()) {
    throw std::runtime_error("trigram_blocking: score/sentence count mismatch");
  }
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::vector<std::size_t> accepted;
  for (std::size_t i : rank_desc(scores)) {
    auto tri = trigrams_of(sentences[i]);
    bool blocked = false;
    for (const auto& t : tri) {
      if (seen.count(t)) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    accepted.push_back(i);
    seen.insert(tri.begin(), tri.end());
    if (accepted.size() == k) break;
  }
  std::sort(accepted.begin(), accepted.end());
  return {accepted, scores};
}

}  // namespace graphsum::decode
