#include <json.hpp>

#include "procnet/classify.h"

namespace procnet {

namespace {

using nlohmann::json;

[[noreturn]] void format_error(const std::string &msg) {
  throw ClassifyError(ClassifyError::Kind::kFormat, msg);
}

bool read_flag(const json &obj, const char *key, int line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    format_error("line " + std::to_string(line) + ": missing field '" + key +
                 "'");
  }
  if (it->is_boolean()) return it->get<bool>();
  if (it->is_number_integer()) {
    auto v = it->get<long long>();
    if (v == 0 || v == 1) return v == 1;
  }
  format_error("line " + std::to_string(line) + ": field '" + key +
               "' must be 0 or 1");
}

std::string read_string(const json &obj, const char *key, int line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    format_error("line " + std::to_string(line) + ": missing string field '" +
                 key + "'");
  }
  return it->get<std::string>();
}

template <typename Fn>
void for_each_json_line(std::istream &in, Fn &&fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      format_error("line " + std::to_string(line_no) + ": invalid JSON (" +
                   e.what() + ")");
    }
    if (!obj.is_object()) {
      format_error("line " + std::to_string(line_no) + ": expected an object");
    }
    fn(obj, line_no);
  }
}

}  // namespace

std::vector<LabeledSentence> read_labeled_jsonl(std::istream &in) {
  std::vector<LabeledSentence> out;
  for_each_json_line(in, [&](const json &obj, int line) {
    LabeledSentence s;
    s.id = read_string(obj, "id", line);
    s.text = read_string(obj, "text", line);
    s.label = read_flag(obj, "label", line);
    if (s.text.empty()) {
      format_error("line " + std::to_string(line) + ": empty text");
    }
    out.push_back(std::move(s));
  });
  return out;
}

void write_labeled_jsonl(std::ostream &out,
                         std::span<const LabeledSentence> sentences) {
  for (const auto &s : sentences) {
    json obj = {{"id", s.id}, {"text", s.text}, {"label", s.label ? 1 : 0}};
    out << obj.dump() << '\n';
  }
}

std::map<std::string, bool> read_external_predictions(std::istream &in) {
  std::map<std::string, bool> out;
  for_each_json_line(in, [&](const json &obj, int line) {
    out[read_string(obj, "id", line)] = read_flag(obj, "relevant", line);
  });
  return out;
}

std::string save_classifier(const TextClassifier &model) {
  json doc;
  doc["format"] = "procnet-text-classifier/1";
  doc["vocabulary"] = model.tfidf.vocabulary();
  doc["idf"] = model.tfidf.idf();
  doc["doc_count"] = model.tfidf.doc_count();
  doc["weights"] = model.logreg.weights;
  doc["bias"] = model.logreg.bias;
  doc["threshold"] = model.logreg.threshold;
  doc["hyper"] = {{"learning_rate", model.logreg.hyper.learning_rate},
                  {"l2", model.logreg.hyper.l2},
                  {"epochs", model.logreg.hyper.epochs},
                  {"seed", model.logreg.hyper.seed}};
  return doc.dump(1) + "\n";
}

TextClassifier load_classifier(std::string_view json_text) {
  try {
    json doc = json::parse(json_text);
    TextClassifier model;
    model.tfidf = TfidfModel::from_parts(
        doc.at("vocabulary").get<std::map<std::string, int>>(),
        doc.at("idf").get<std::vector<double>>(), doc.at("doc_count").get<int>());
    model.logreg.weights = doc.at("weights").get<std::vector<double>>();
    model.logreg.bias = doc.at("bias").get<double>();
    model.logreg.threshold = doc.value("threshold", 0.5);
    if (doc.contains("hyper")) {
      const json &h = doc["hyper"];
      model.logreg.hyper.learning_rate = h.value("learning_rate", 0.0);
      model.logreg.hyper.l2 = h.value("l2", 0.0);
      model.logreg.hyper.epochs = h.value("epochs", 0);
      model.logreg.hyper.seed = h.value("seed", uint64_t{0});
    }
    if (model.logreg.weights.size() != model.tfidf.size()) {
      format_error("weight count does not match vocabulary size");
    }
    return model;
  } catch (const json::exception &e) {
    format_error(std::string("invalid model file: ") + e.what());
  }
}

}  // namespace procnet
