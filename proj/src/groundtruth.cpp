#include "subwordseg/groundtruth.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "subwordseg/error.hpp"

namespace subwordseg {

using json = nlohmann::json;
namespace pt = boost::property_tree;

namespace {

int parse_coord(const std::optional<std::string>& raw, const char* name, std::size_t index) {
  if (!raw) throw SchemaError(std::string("missing coordinate ") + name, index);
  int value = 0;
  const char* first = raw->data();
  const char* last = raw->data() + raw->size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw SchemaError(std::string("coordinate ") + name + " is not an integer: '" + *raw + "'", index);
  }
  if (value < 0) throw SchemaError(std::string("coordinate ") + name + " is negative", index);
  return value;
}

std::uint32_t parse_code(const std::string& raw) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value, 16);
  if (raw.empty() || ec != std::errc{} || ptr != raw.data() + raw.size()) {
    throw SchemaError("letter code is not hexadecimal: '" + raw + "'", 0);
  }
  return value;
}

Box checked_box(int ax, int ay, int bx, int by, std::size_t index) {
  if (ax > bx) throw SchemaError("ax > bx (" + std::to_string(ax) + " > " + std::to_string(bx) + ")", index);
  if (ay > by) throw SchemaError("ay > by (" + std::to_string(ay) + " > " + std::to_string(by) + ")", index);
  return {ax, ay, bx, by};
}

std::optional<std::string> attr(const pt::ptree& node, const char* name) {
  if (auto v = node.get_optional<std::string>(std::string("<xmlattr>.") + name)) return *v;
  return std::nullopt;
}

WordTruth parse_xml(const std::string& text) {
  pt::ptree doc;
  try {
    std::istringstream in(text);
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    throw SchemaError(std::string("malformed XML: ") + e.message() + " at line " +
                          std::to_string(e.line()),
                      0);
  }
  const auto word = doc.get_child_optional("word");
  if (!word) throw SchemaError("missing <word> element", 0);

  WordTruth t;
  const auto id = attr(*word, "id");
  if (!id || id->empty()) throw SchemaError("missing word id", 0);
  t.id = *id;

  for (const auto& [tag, node] : *word) {
    if (tag == "subword") {
      const std::size_t index = t.subwords.size() + 1;
      const auto a = node.get_child_optional("a");
      const auto b = node.get_child_optional("b");
      if (!a) throw SchemaError("missing corner <a>", index);
      if (!b) throw SchemaError("missing corner <b>", index);
      t.subwords.push_back(checked_box(parse_coord(attr(*a, "x"), "ax", index),
                                       parse_coord(attr(*a, "y"), "ay", index),
                                       parse_coord(attr(*b, "x"), "bx", index),
                                       parse_coord(attr(*b, "y"), "by", index), index));
    } else if (tag == "letter") {
      t.letters.push_back({attr(node, "name").value_or(""), attr(node, "shape").value_or(""),
                           parse_code(attr(node, "code").value_or(""))});
    }
  }
  if (t.subwords.empty()) throw SchemaError("word " + t.id + " has no subwords", 0);
  return t;
}

std::optional<std::string> json_coord(const json& corner, const char* key) {
  if (!corner.is_object() || !corner.contains(key)) return std::nullopt;
  const auto& v = corner.at(key);
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_string()) return v.get<std::string>();
  return std::string("?");
}

WordTruth parse_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what(), 0);
  }
  WordTruth t;
  if (!doc.is_object() || !doc.contains("id") || !doc.at("id").is_string() ||
      doc.at("id").get<std::string>().empty()) {
    throw SchemaError("missing word id", 0);
  }
  t.id = doc.at("id").get<std::string>();
  if (doc.contains("subword")) {
    for (const auto& node : doc.at("subword")) {
      const std::size_t index = t.subwords.size() + 1;
      if (!node.contains("a")) throw SchemaError("missing corner a", index);
      if (!node.contains("b")) throw SchemaError("missing corner b", index);
      const auto& a = node.at("a");
      const auto& b = node.at("b");
      t.subwords.push_back(checked_box(parse_coord(json_coord(a, "x"), "ax", index),
                                       parse_coord(json_coord(a, "y"), "ay", index),
                                       parse_coord(json_coord(b, "x"), "bx", index),
                                       parse_coord(json_coord(b, "y"), "by", index), index));
    }
  }
  if (doc.contains("letter")) {
    for (const auto& node : doc.at("letter")) {
      t.letters.push_back({node.value("name", ""), node.value("shape", ""),
                           parse_code(node.value("code", ""))});
    }
  }
  if (t.subwords.empty()) throw SchemaError("word " + t.id + " has no subwords", 0);
  return t;
}

std::string escape_attr(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string hex_code(std::uint32_t code) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04X", code);
  return buf;
}

void check_writable(const WordTruth& t) {
  if (t.id.empty()) throw SchemaError("missing word id", 0);
  if (t.subwords.empty()) throw SchemaError("word " + t.id + " has no subwords", 0);
  for (std::size_t i = 0; i < t.subwords.size(); ++i) {
    const Box& b = t.subwords[i];
    checked_box(b.ax, b.ay, b.bx, b.by, i + 1);
    if (b.ax < 0 || b.ay < 0) throw SchemaError("negative coordinate", i + 1);
  }
}

}  // namespace

WordTruth parse_truth(const std::string& text) {
  for (const char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? parse_json(text) : parse_xml(text);
  }
  throw SchemaError("empty document", 0);
}

WordTruth parse_truth(std::span<const std::uint8_t> bytes) {
  return parse_truth(std::string(bytes.begin(), bytes.end()));
}

Bytes write_truth(const WordTruth& t) {
  check_writable(t);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<word id=\"" + escape_attr(t.id) + "\">\n";
  for (std::size_t i = 0; i < t.subwords.size(); ++i) {
    const Box& b = t.subwords[i];
    out += "  <subword idx=\"" + std::to_string(i + 1) + "\"><a x=\"" + std::to_string(b.ax) +
           "\" y=\"" + std::to_string(b.ay) + "\"/><b x=\"" + std::to_string(b.bx) + "\" y=\"" +
           std::to_string(b.by) + "\"/></subword>\n";
  }
  for (const auto& l : t.letters) {
    out += "  <letter name=\"" + escape_attr(l.name) + "\" shape=\"" + escape_attr(l.shape) +
           "\" code=\"" + hex_code(l.codepoint) + "\"/>\n";
  }
  out += "</word>\n";
  return Bytes(out.begin(), out.end());
}

Bytes write_truth_json(const WordTruth& t) {
  check_writable(t);
  json subwords = json::array();
  for (std::size_t i = 0; i < t.subwords.size(); ++i) {
    const Box& b = t.subwords[i];
    subwords.push_back({{"idx", i + 1}, {"a", {{"x", b.ax}, {"y", b.ay}}}, {"b", {{"x", b.bx}, {"y", b.by}}}});
  }
  json doc = {{"id", t.id}, {"subword", subwords}};
  if (!t.letters.empty()) {
    json letters = json::array();
    for (const auto& l : t.letters) {
      letters.push_back({{"name", l.name}, {"shape", l.shape}, {"code", hex_code(l.codepoint)}});
    }
    doc["letter"] = letters;
  }
  const std::string text = doc.dump(2) + "\n";
  return Bytes(text.begin(), text.end());
}

DatasetStats dataset_stats(std::span<const WordTruth> truths) {
  DatasetStats s;
  for (const auto& t : truths) {
    ++s.histogram[t.subwords.size()];
    ++s.words;
    s.subwords += t.subwords.size();
  }
  return s;
}

std::string to_json(const DatasetStats& s) {
  json hist = json::object();
  for (const auto& [k, v] : s.histogram) hist[std::to_string(k)] = v;
  const json j = {{"histogram", hist}, {"words", s.words}, {"subwords", s.subwords}};
  return j.dump(2) + "\n";
}

}  // namespace subwordseg
