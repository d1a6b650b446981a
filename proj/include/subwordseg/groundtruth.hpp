#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "subwordseg/components.hpp"
#include "subwordseg/raster.hpp"

namespace subwordseg {

struct LetterLabel {
  std::string name;
  std::string shape;        // Isolated / Initial / Medial / Final
  std::uint32_t codepoint = 0;

  bool operator==(const LetterLabel&) const = default;
};

struct WordTruth {
  std::string id;
  std::vector<Box> subwords;
  std::vector<LetterLabel> letters;

  bool operator==(const WordTruth&) const = default;
};

// Ground-truth document, UTF-8 XML:
//
//   <word id="S0001">
//     <subword idx="1"><a x="12" y="7"/><b x="58" y="40"/></subword>
//     <letter name="Alif" shape="Isolated" code="0627"/>
//   </word>
//
// or the JSON mirror {"id": ..., "subword": [{"idx", "a": {x, y}, "b": {x, y}}],
// "letter": [{"name", "shape", "code"}]}. Unknown elements are ignored.
// Violations throw SchemaError carrying the 1-based sub-word position.
WordTruth parse_truth(std::span<const std::uint8_t> bytes);
WordTruth parse_truth(const std::string& text);

Bytes write_truth(const WordTruth& t);
Bytes write_truth_json(const WordTruth& t);

struct DatasetStats {
  std::map<std::size_t, std::size_t> histogram;  // sub-words per word -> words
  std::size_t words = 0;
  std::size_t subwords = 0;

  bool operator==(const DatasetStats&) const = default;
};

DatasetStats dataset_stats(std::span<const WordTruth> truths);

std::string to_json(const DatasetStats& s);

}  // namespace subwordseg
