#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace graphsum::data {

// One training/evaluation unit. Sentences are token lists after the
// pipeline tokenizer; doc_boundaries partition [0, n) into per-source-doc
// ranges (a single range for single-document input).
struct Example {
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::vector<std::string>> reference_summary;
  std::optional<std::vector<int>> labels;
  std::vector<std::pair<std::size_t, std::size_t>> doc_boundaries;  // [begin, end)
  // Raw sentence strings, preserved for output assembly.
  std::vector<std::string> raw_sentences;

  std::size_t num_sentences() const { return sentences.size(); }
  bool multi_doc() const { return doc_boundaries.size() > 1; }
  void validate() const;  // throws on boundary/label inconsistency
};

// JSON Lines: {"text": [sentence, ...] or [[sentence, ...] per source doc],
// "summary": [sentence, ...], optional "label": [0/1, ...]}.
std::vector<Example> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, const std::vector<Example>& examples);

// Single-doc: keep the first max_sentences sentences. Multi-doc: per source
// document keep leading sentences within the token budget (a sentence that
// would cross it is dropped), then apply the global sentence cap.
Example truncate(const Example& ex, std::size_t max_sentences,
                 std::size_t max_tokens_multidoc);

}  // namespace graphsum::data
