#include "graphsum/text.hpp"

#include <cctype>

namespace graphsum::text {

namespace {

bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }

bool is_joiner(unsigned char c) { return c == '.' || c == '\'' || c == '-'; }

}  // namespace

std::vector<std::string> tokenize(const std::string& raw) {
  std::vector<std::string> out;
  std::string chunk;
  auto flush_chunk = [&]() {
    if (chunk.empty()) return;
    std::string cur;
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const unsigned char c = chunk[i];
      if (is_alnum(c)) {
        cur.push_back(static_cast<char>(std::tolower(c)));
      } else if (is_joiner(c) && !cur.empty() && i + 1 < chunk.size() &&
                 is_alnum(static_cast<unsigned char>(chunk[i + 1]))) {
        cur.push_back(static_cast<char>(c));
      } else {
        if (!cur.empty()) {
          out.push_back(cur);
          cur.clear();
        }
        out.push_back(std::string(1, static_cast<char>(c)));
      }
    }
    if (!cur.empty()) out.push_back(cur);
    chunk.clear();
  };
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      flush_chunk();
    } else {
      chunk.push_back(static_cast<char>(c));
    }
  }
  flush_chunk();
  return out;
}

bool is_punctuation(const std::string& token) {
  for (unsigned char c : token) {
    if (is_alnum(c)) return false;
  }
  return true;
}

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> kStopwords = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
      "any", "are", "aren't", "as", "at", "be", "because", "been", "before", "being",
      "below", "between", "both", "but", "by", "can", "can't", "cannot", "could",
      "couldn't", "did", "didn't", "do", "does", "doesn't", "doing", "don't", "down",
      "during", "each", "few", "for", "from", "further", "had", "hadn't", "has",
      "hasn't", "have", "haven't", "having", "he", "he'd", "he'll", "he's", "her",
      "here", "here's", "hers", "herself", "him", "himself", "his", "how", "how's",
      "i", "i'd", "i'll", "i'm", "i've", "if", "in", "into", "is", "isn't", "it",
      "it's", "its", "itself", "let's", "me", "more", "most", "mustn't", "my",
      "myself", "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other",
      "ought", "our", "ours", "ourselves", "out", "over", "own", "same", "shan't",
      "she", "she'd", "she'll", "she's", "should", "shouldn't", "so", "some", "such",
      "than", "that", "that's", "the", "their", "theirs", "them", "themselves",
      "then", "there", "there's", "these", "they", "they'd", "they'll", "they're",
      "they've", "this", "those", "through", "to", "too", "under", "until", "up",
      "very", "was", "wasn't", "we", "we'd", "we'll", "we're", "we've", "were",
      "weren't", "what", "what's", "when", "when's", "where", "where's", "which",
      "while", "who", "who's", "whom", "why", "why's", "with", "won't", "would",
      "wouldn't", "you", "you'd", "you'll", "you're", "you've", "your", "yours",
      "yourself", "yourselves"};
  return kStopwords;
}

bool is_stopword(const std::string& token) { return stopwords().count(token) > 0; }

}  // namespace graphsum::text
