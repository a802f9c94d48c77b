#include "graphsum/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "graphsum/text.hpp"

namespace graphsum::text {

Vocabulary build_vocab(const std::vector<data::Example>& corpus, std::size_t limit) {
  if (corpus.empty()) throw std::runtime_error("build_vocab: empty corpus");
  if (limit < 2) throw std::runtime_error("build_vocab: limit below special token count");
  // std::map keeps word order lexicographic, which settles frequency ties.
  std::map<std::string, std::int64_t> tf;
  std::map<std::string, std::int64_t> df;
  std::int64_t num_docs = 0;
  for (const auto& ex : corpus) {
    for (const auto& [b, e] : ex.doc_boundaries) {
      ++num_docs;
      std::unordered_set<std::string> seen;
      for (std::size_t i = b; i < e; ++i) {
        for (const auto& tok : ex.sentences[i]) {
          ++tf[tok];
          seen.insert(tok);
        }
      }
      for (const auto& w : seen) ++df[w];
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> ranked(tf.begin(), tf.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocabulary v;
  v.num_docs = num_docs;
  v.id_to_word = {kPadToken, kUnkToken};
  v.term_freq = {0, 0};
  v.doc_freq = {0, 0};
  for (const auto& [word, count] : ranked) {
    if (v.id_to_word.size() >= limit + 2) break;
    v.term_freq.push_back(count);
    v.doc_freq.push_back(df[word]);
    v.id_to_word.push_back(word);
  }
  for (std::size_t i = 0; i < v.id_to_word.size(); ++i) {
    v.word_to_id[v.id_to_word[i]] = static_cast<int>(i);
  }
  return v;
}

void compute_word_filter(Vocabulary& vocab, double fraction) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw std::runtime_error("compute_word_filter: fraction must be in [0, 1)");
  }
  vocab.filtered_set.clear();
  std::vector<std::pair<double, int>> scored;  // (tfidf, id) over remaining words
  for (int id = 2; id < static_cast<int>(vocab.size()); ++id) {
    const std::string& w = vocab.id_to_word[id];
    if (is_stopword(w) || is_punctuation(w)) {
      vocab.filtered_set.insert(id);
      continue;
    }
    const double idf = std::log(static_cast<double>(vocab.num_docs) /
                                (1.0 + static_cast<double>(vocab.doc_freq[id])));
    scored.emplace_back(static_cast<double>(vocab.term_freq[id]) * idf, id);
  }
  const std::size_t drop =
      static_cast<std::size_t>(fraction * static_cast<double>(scored.size()));
  std::sort(scored.begin(), scored.end(), [&vocab](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return vocab.id_to_word[a.second] < vocab.id_to_word[b.second];
  });
  for (std::size_t i = 0; i < drop && i < scored.size(); ++i) {
    vocab.filtered_set.insert(scored[i].second);
  }
}

std::vector<double> random_embeddings(std::size_t vocab_size, std::size_t dim,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.1);
  std::vector<double> table(vocab_size * dim);
  for (double& v : table) v = dist(rng);
  // Pad row stays zero.
  for (std::size_t j = 0; j < dim; ++j) table[kPadId * dim + j] = 0.0;
  return table;
}

std::vector<double> load_embeddings(const Vocabulary& vocab, std::size_t dim,
                                    const std::string& path, std::uint64_t seed) {
  std::vector<double> table = random_embeddings(vocab.size(), dim, seed);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    auto it = vocab.word_to_id.find(word);
    if (it == vocab.word_to_id.end()) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(ss >> table[static_cast<std::size_t>(it->second) * dim + j])) {
        throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                                 ": expected " + std::to_string(dim) + " values");
      }
    }
  }
  return table;
}

}  // namespace graphsum::text
