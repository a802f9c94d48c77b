#include "graphsum/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "graphsum/text.hpp"

namespace graphsum::data {

using nlohmann::json;

void Example::validate() const {
  if (labels && labels->size() != sentences.size()) {
    throw std::runtime_error("example: label count " + std::to_string(labels->size()) +
                             " does not match sentence count " +
                             std::to_string(sentences.size()));
  }
  std::size_t expect = 0;
  for (const auto& [b, e] : doc_boundaries) {
    if (b != expect || e < b) {
      throw std::runtime_error("example: doc_boundaries do not partition sentences");
    }
    expect = e;
  }
  if (expect != sentences.size()) {
    throw std::runtime_error("example: doc_boundaries do not cover all sentences");
  }
}

namespace {

Example parse_line(const json& j, std::size_t line_no) {
  Example ex;
  if (!j.contains("text") || !j.contains("summary")) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": missing \"text\" or \"summary\"");
  }
  const json& text = j.at("text");
  if (!text.is_array() || text.empty()) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": \"text\" must be a nonempty array");
  }
  auto add_doc = [&ex](const json& doc_sents) {
    const std::size_t begin = ex.sentences.size();
    for (const auto& s : doc_sents) {
      ex.raw_sentences.push_back(s.get<std::string>());
      ex.sentences.push_back(text::tokenize(s.get<std::string>()));
    }
    ex.doc_boundaries.emplace_back(begin, ex.sentences.size());
  };
  if (text[0].is_array()) {
    for (const auto& doc : text) add_doc(doc);
  } else {
    add_doc(text);
  }
  for (const auto& s : j.at("summary")) {
    ex.reference_summary.push_back(text::tokenize(s.get<std::string>()));
  }
  if (j.contains("label")) {
    ex.labels = j.at("label").get<std::vector<int>>();
  }
  ex.validate();
  return ex;
}

}  // namespace

std::vector<Example> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::vector<Example> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw std::runtime_error("malformed JSON on line " + std::to_string(line_no) +
                               " of " + path);
    }
    try {
      out.push_back(parse_line(j, line_no));
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + " (" + path + ")");
    }
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<Example>& examples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const auto& ex : examples) {
    json j;
    if (ex.multi_doc()) {
      json docs = json::array();
      for (const auto& [b, e] : ex.doc_boundaries) {
        json doc = json::array();
        for (std::size_t i = b; i < e; ++i) doc.push_back(ex.raw_sentences[i]);
        docs.push_back(doc);
      }
      j["text"] = docs;
    } else {
      j["text"] = ex.raw_sentences;
    }
    json summ = json::array();
    for (const auto& s : ex.reference_summary) {
      std::string joined;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) joined += ' ';
        joined += s[i];
      }
      summ.push_back(joined);
    }
    j["summary"] = summ;
    if (ex.labels) j["label"] = *ex.labels;
    out << j.dump() << "\n";
  }
}

Example truncate(const Example& ex, std::size_t max_sentences,
                 std::size_t max_tokens_multidoc) {
  Example out;
  std::vector<std::size_t> keep;  // original sentence indices, in order
  if (!ex.multi_doc()) {
    for (std::size_t i = 0; i < ex.sentences.size() && i < max_sentences; ++i) {
      keep.push_back(i);
    }
    out.doc_boundaries.emplace_back(0, keep.size());
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (const auto& [b, e] : ex.doc_boundaries) {
      const std::size_t begin = keep.size();
      std::size_t tokens = 0;
      for (std::size_t i = b; i < e; ++i) {
        tokens += ex.sentences[i].size();
        if (tokens > max_tokens_multidoc) break;
        keep.push_back(i);
      }
      ranges.emplace_back(begin, keep.size());
    }
    // Global sentence cap across the concatenation.
    if (keep.size() > max_sentences) {
      keep.resize(max_sentences);
      for (auto& [b, e] : ranges) {
        b = std::min(b, max_sentences);
        e = std::min(e, max_sentences);
      }
    }
    for (const auto& [b, e] : ranges) {
      if (e > b) out.doc_boundaries.emplace_back(b, e);
    }
    if (out.doc_boundaries.empty()) out.doc_boundaries.emplace_back(0, 0);
  }
  for (std::size_t i : keep) {
    out.sentences.push_back(ex.sentences[i]);
    out.raw_sentences.push_back(i < ex.raw_sentences.size() ? ex.raw_sentences[i] : "");
  }
  out.reference_summary = ex.reference_summary;
  if (ex.labels) {
    std::vector<int> labels;
    for (std::size_t i : keep) labels.push_back((*ex.labels)[i]);
    out.labels = labels;
  }
  return out;
}

}  // namespace graphsum::data
