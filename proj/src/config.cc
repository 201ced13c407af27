#include "procnet/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "procnet/text.h"

namespace procnet {

namespace {

struct Entry {
  TomlValue value;
  int line = 0;
};

bool is_bare_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
}

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class TomlParser {
 public:
  explicit TomlParser(std::string_view text) : text_(text) {}

  std::map<std::string, Entry> parse() {
    std::string prefix;
    while (pos_ < text_.size()) {
      skip_blank();
      if (pos_ >= text_.size()) break;
      char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
      } else if (c == '#') {
        skip_comment();
      } else if (c == '[') {
        ++pos_;
        size_t close = text_.find(']', pos_);
        size_t eol = text_.find('\n', pos_);
        if (close == std::string_view::npos || close > eol) fail("unterminated table header");
        std::string name(trim(text_.substr(pos_, close - pos_)));
        if (name.empty()) fail("empty table name");
        for (char k : name) {
          if (!is_bare_key_char(k)) fail("bad table name '" + name + "'");
        }
        prefix = name + ".";
        pos_ = close + 1;
        end_of_line();
      } else {
        size_t start = pos_;
        while (pos_ < text_.size() && is_bare_key_char(text_[pos_])) ++pos_;
        std::string key(text_.substr(start, pos_ - start));
        if (key.empty()) fail("expected a key");
        skip_blank();
        if (pos_ >= text_.size() || text_[pos_] != '=') fail("expected '=' after " + key);
        ++pos_;
        skip_blank();
        int at = line_;
        TomlValue v = value();
        end_of_line();
        std::string full = prefix + key;
        if (!out_.emplace(full, Entry{std::move(v), at}).second) {
          line_ = at;
          fail("duplicate key " + full);
        }
      }
    }
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string &what) { throw ConfigError(line_, what); }

  void skip_blank() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void skip_comment() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

  // Blank lines and comments inside arrays.
  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      skip_blank();
      if (pos_ < text_.size() && text_[pos_] == '#') skip_comment();
      if (pos_ < text_.size() && text_[pos_] == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      break;
    }
  }

  void end_of_line() {
    skip_blank();
    if (pos_ < text_.size() && text_[pos_] == '#') skip_comment();
    if (pos_ < text_.size()) {
      if (text_[pos_] != '\n') fail("unexpected text after value");
      ++pos_;
      ++line_;
    }
  }

  std::string basic_string() {
    ++pos_;
    std::string s;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') return s;
      if (c != '\\') {
        s += c;
        continue;
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      char e = text_[pos_++];
      switch (e) {
        case '"': s += '"'; break;
        case '\\': s += '\\'; break;
        case 'n': s += '\n'; break;
        case 't': s += '\t'; break;
        case 'r': s += '\r'; break;
        case 'u': {
          if (pos_ + 4 > text_.size()) fail("short \\u escape");
          uint32_t cp = 0;
          auto r = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, cp, 16);
          if (r.ptr != text_.data() + pos_ + 4) fail("bad \\u escape");
          pos_ += 4;
          utf8_append(s, cp);
          break;
        }
        default:
          fail(std::string("unknown escape \\") + e);
      }
    }
  }

  std::string literal_string() {
    ++pos_;
    size_t close = text_.find('\'', pos_);
    size_t eol = text_.find('\n', pos_);
    if (close == std::string_view::npos || close > eol) fail("unterminated string");
    std::string s(text_.substr(pos_, close - pos_));
    pos_ = close + 1;
    return s;
  }

  std::string string_value() {
    return text_[pos_] == '"' ? basic_string() : literal_string();
  }

  TomlValue value() {
    if (pos_ >= text_.size()) fail("missing value");
    char c = text_[pos_];
    if (c == '"' || c == '\'') return string_value();
    if (c == '[') {
      ++pos_;
      std::vector<std::string> items;
      while (true) {
        skip_space_and_comments();
        if (pos_ >= text_.size()) fail("unterminated array");
        if (text_[pos_] == ']') {
          ++pos_;
          return items;
        }
        if (text_[pos_] != '"' && text_[pos_] != '\'') fail("arrays may only hold strings");
        items.push_back(string_value());
        skip_space_and_comments();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
        } else if (pos_ < text_.size() && text_[pos_] != ']') {
          fail("expected ',' or ']' in array");
        }
      }
    }
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n' && text_[pos_] != '#' &&
           text_[pos_] != ' ' && text_[pos_] != '\t' && text_[pos_] != '\r') {
      ++pos_;
    }
    std::string_view word = text_.substr(start, pos_ - start);
    if (word == "true") return true;
    if (word == "false") return false;
    std::string digits;
    for (char d : word) {
      if (d != '_') digits += d;
    }
    if (digits.find_first_of(".eE") == std::string::npos ||
        digits.rfind("0x", 0) == 0) {
      int64_t i = 0;
      auto r = std::from_chars(digits.data(), digits.data() + digits.size(), i);
      if (r.ec == std::errc() && r.ptr == digits.data() + digits.size()) return i;
    } else {
      double d = 0;
      auto r = std::from_chars(digits.data(), digits.data() + digits.size(), d);
      if (r.ec == std::errc() && r.ptr == digits.data() + digits.size()) return d;
    }
    fail("cannot read value '" + std::string(word) + "'");
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, Entry> out_;
};

using Setter = std::function<void(PipelineConfig &, const Entry &, const std::string &)>;

[[noreturn]] void wrong_type(const Entry &e, const std::string &key,
                             const char *expected) {
  throw ConfigError(e.line, key + " must be " + expected);
}

template <typename Field>
Setter labels(Field field) {
  return [field](PipelineConfig &c, const Entry &e, const std::string &key) {
    auto *items = std::get_if<std::vector<std::string>>(&e.value);
    if (!items) wrong_type(e, key, "an array of strings");
    field(c) = LabelSet(items->begin(), items->end());
  };
}

template <typename Field>
Setter flag(Field field) {
  return [field](PipelineConfig &c, const Entry &e, const std::string &key) {
    if (auto *b = std::get_if<bool>(&e.value)) {
      field(c) = *b;
      return;
    }
    // "on"/"off" read naturally for the heuristic switch.
    if (auto *s = std::get_if<std::string>(&e.value)) {
      if (*s == "on") {
        field(c) = true;
        return;
      }
      if (*s == "off") {
        field(c) = false;
        return;
      }
    }
    wrong_type(e, key, "a boolean or \"on\"/\"off\"");
  };
}

template <typename Field>
Setter text(Field field) {
  return [field](PipelineConfig &c, const Entry &e, const std::string &key) {
    auto *s = std::get_if<std::string>(&e.value);
    if (!s) wrong_type(e, key, "a string");
    field(c) = *s;
  };
}

template <typename Field>
Setter real(Field field) {
  return [field](PipelineConfig &c, const Entry &e, const std::string &key) {
    if (auto *d = std::get_if<double>(&e.value)) {
      field(c) = *d;
    } else if (auto *i = std::get_if<int64_t>(&e.value)) {
      field(c) = static_cast<double>(*i);
    } else {
      wrong_type(e, key, "a number");
    }
  };
}

template <typename Field>
Setter integer(Field field, int64_t min_value) {
  return [field, min_value](PipelineConfig &c, const Entry &e, const std::string &key) {
    auto *i = std::get_if<int64_t>(&e.value);
    if (!i) wrong_type(e, key, "an integer");
    if (*i < min_value) {
      throw ConfigError(e.line, key + " must be at least " + std::to_string(min_value));
    }
    field(c) = static_cast<std::remove_reference_t<decltype(field(c))>>(*i);
  };
}

#define PROCNET_FIELD(expr) [](PipelineConfig &c) -> auto & { return c.expr; }

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = {
      {"pipeline.classifier",
       [](PipelineConfig &c, const Entry &e, const std::string &key) {
         auto *s = std::get_if<std::string>(&e.value);
         if (!s) wrong_type(e, key, "a string");
         try {
           c.classifier = parse_classifier_kind(*s);
         } catch (const ConfigError &err) {
           throw ConfigError(e.line, err.what());
         }
       }},
      {"pipeline.model", text(PROCNET_FIELD(model_path))},
      {"pipeline.predictions", text(PROCNET_FIELD(predictions_path))},
      {"pipeline.threshold", real(PROCNET_FIELD(threshold))},
      {"pipeline.vvimp", flag(PROCNET_FIELD(extraction.use_vvimp_heuristic))},
      {"pipeline.jobs", integer(PROCNET_FIELD(jobs), 1)},
      {"pipeline.outputs",
       [](PipelineConfig &c, const Entry &e, const std::string &key) {
         auto *items = std::get_if<std::vector<std::string>>(&e.value);
         if (!items) wrong_type(e, key, "an array of strings");
         c.outputs = {false, false, false};
         for (const auto &f : *items) {
           if (f == "json") {
             c.outputs.json = true;
           } else if (f == "pnml") {
             c.outputs.pnml = true;
           } else if (f == "dot") {
             c.outputs.dot = true;
           } else {
             throw ConfigError(e.line, "unknown output format '" + f + "'");
           }
         }
       }},
      {"rule.subject_deprels", labels(PROCNET_FIELD(rule.subject_deprels))},
      {"rule.imperative_xpos", labels(PROCNET_FIELD(rule.imperative_xpos))},
      {"extract.subject_deprels", labels(PROCNET_FIELD(extraction.subject_deprels))},
      {"extract.object_deprels", labels(PROCNET_FIELD(extraction.object_deprels))},
      {"extract.modifier_deprels", labels(PROCNET_FIELD(extraction.modifier_deprels))},
      {"extract.verb_chain_deprels", labels(PROCNET_FIELD(extraction.verb_chain_deprels))},
      {"extract.particle_deprels", labels(PROCNET_FIELD(extraction.particle_deprels))},
      {"extract.negation_deprels", labels(PROCNET_FIELD(extraction.negation_deprels))},
      {"extract.passive_agent_deprels",
       labels(PROCNET_FIELD(extraction.passive_agent_deprels))},
      {"extract.passive_subject_as_object",
       flag(PROCNET_FIELD(extraction.passive_subject_as_object))},
      {"extract.auxiliary_xpos", labels(PROCNET_FIELD(extraction.auxiliary_xpos))},
      {"extract.exists_markers", labels(PROCNET_FIELD(extraction.exists_markers))},
      {"extract.all_markers", labels(PROCNET_FIELD(extraction.all_markers))},
      {"extract.imperative_xpos", labels(PROCNET_FIELD(extraction.imperative_xpos))},
      {"extract.finite_xpos", labels(PROCNET_FIELD(extraction.finite_xpos))},
      {"order.before_adverbs", labels(PROCNET_FIELD(ordering.before_adverbs))},
      {"order.and_adverbs", labels(PROCNET_FIELD(ordering.and_adverbs))},
      {"order.and_conjunctions", labels(PROCNET_FIELD(ordering.and_conjunctions))},
      {"order.or_conjunctions", labels(PROCNET_FIELD(ordering.or_conjunctions))},
      {"order.coordination_deprels", labels(PROCNET_FIELD(ordering.coordination_deprels))},
      {"order.conjunction_deprels", labels(PROCNET_FIELD(ordering.conjunction_deprels))},
      {"net.include_negated", flag(PROCNET_FIELD(net.include_negated))},
      {"train.learning_rate", real(PROCNET_FIELD(hyper.learning_rate))},
      {"train.l2", real(PROCNET_FIELD(hyper.l2))},
      {"train.epochs", integer(PROCNET_FIELD(hyper.epochs), 1)},
      {"train.seed", integer(PROCNET_FIELD(hyper.seed), 0)},
      {"similarity.state_budget", integer(PROCNET_FIELD(state_budget), 1)},
  };
  return table;
}

#undef PROCNET_FIELD

std::string quoted(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string array(const LabelSet &items) {
  std::vector<std::string> parts;
  for (const auto &i : items) parts.push_back(quoted(i));
  return "[" + join(parts, ", ") + "]";
}

}  // namespace

std::map<std::string, TomlValue> parse_toml(std::string_view text) {
  std::map<std::string, TomlValue> out;
  for (auto &[k, e] : TomlParser(text).parse()) out.emplace(k, std::move(e.value));
  return out;
}

const char *classifier_kind_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kRule:
      return "rule";
    case ClassifierKind::kLogreg:
      return "logreg";
    case ClassifierKind::kExternal:
      return "external";
    case ClassifierKind::kNone:
      return "none";
  }
  return "?";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
  if (name == "rule") return ClassifierKind::kRule;
  if (name == "logreg") return ClassifierKind::kLogreg;
  if (name == "external") return ClassifierKind::kExternal;
  if (name == "none") return ClassifierKind::kNone;
  throw ConfigError(0, "unknown classifier '" + std::string(name) +
                           "' (expected rule, logreg, external or none)");
}

PipelineConfig apply_config(std::string_view toml, PipelineConfig base) {
  const auto &table = setters();
  for (const auto &[key, entry] : TomlParser(toml).parse()) {
    auto it = table.find(key);
    if (it == table.end()) throw ConfigError(entry.line, "unknown setting " + key);
    it->second(base, entry, key);
  }
  return base;
}

PipelineConfig load_config(const std::string &path, PipelineConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return apply_config(buf.str(), std::move(base));
}

void check_config(const PipelineConfig &config) {
  if (config.classifier == ClassifierKind::kExternal && config.predictions_path.empty()) {
    throw ConfigError(0, "--classifier external needs a predictions file");
  }
  if (config.classifier == ClassifierKind::kLogreg && config.model_path.empty()) {
    throw ConfigError(0, "--classifier logreg needs a model file");
  }
  if (config.threshold > 1.0) throw ConfigError(0, "threshold must not exceed 1");
}

std::string config_to_toml(const PipelineConfig &c) {
  std::ostringstream out;
  auto b = [](bool v) { return v ? "true" : "false"; };
  out << "[pipeline]\n";
  out << "classifier = " << quoted(classifier_kind_name(c.classifier)) << "\n";
  out << "model = " << quoted(c.model_path) << "\n";
  out << "predictions = " << quoted(c.predictions_path) << "\n";
  out << "threshold = " << number(c.threshold) << "\n";
  out << "vvimp = " << b(c.extraction.use_vvimp_heuristic) << "\n";
  out << "jobs = " << c.jobs << "\n";
  LabelSet formats;
  if (c.outputs.json) formats.insert("json");
  if (c.outputs.pnml) formats.insert("pnml");
  if (c.outputs.dot) formats.insert("dot");
  out << "outputs = " << array(formats) << "\n\n";

  out << "[rule]\n";
  out << "subject_deprels = " << array(c.rule.subject_deprels) << "\n";
  out << "imperative_xpos = " << array(c.rule.imperative_xpos) << "\n\n";

  const ExtractionConfig &x = c.extraction;
  out << "[extract]\n";
  out << "subject_deprels = " << array(x.subject_deprels) << "\n";
  out << "object_deprels = " << array(x.object_deprels) << "\n";
  out << "modifier_deprels = " << array(x.modifier_deprels) << "\n";
  out << "verb_chain_deprels = " << array(x.verb_chain_deprels) << "\n";
  out << "particle_deprels = " << array(x.particle_deprels) << "\n";
  out << "negation_deprels = " << array(x.negation_deprels) << "\n";
  out << "passive_agent_deprels = " << array(x.passive_agent_deprels) << "\n";
  out << "passive_subject_as_object = " << b(x.passive_subject_as_object) << "\n";
  out << "auxiliary_xpos = " << array(x.auxiliary_xpos) << "\n";
  out << "exists_markers = " << array(x.exists_markers) << "\n";
  out << "all_markers = " << array(x.all_markers) << "\n";
  out << "imperative_xpos = " << array(x.imperative_xpos) << "\n";
  out << "finite_xpos = " << array(x.finite_xpos) << "\n\n";

  const OrderingConfig &o = c.ordering;
  out << "[order]\n";
  out << "before_adverbs = " << array(o.before_adverbs) << "\n";
  out << "and_adverbs = " << array(o.and_adverbs) << "\n";
  out << "and_conjunctions = " << array(o.and_conjunctions) << "\n";
  out << "or_conjunctions = " << array(o.or_conjunctions) << "\n";
  out << "coordination_deprels = " << array(o.coordination_deprels) << "\n";
  out << "conjunction_deprels = " << array(o.conjunction_deprels) << "\n\n";

  out << "[net]\n";
  out << "include_negated = " << b(c.net.include_negated) << "\n\n";

  out << "[train]\n";
  out << "learning_rate = " << number(c.hyper.learning_rate) << "\n";
  out << "l2 = " << number(c.hyper.l2) << "\n";
  out << "epochs = " << c.hyper.epochs << "\n";
  out << "seed = " << c.hyper.seed << "\n\n";

  out << "[similarity]\n";
  out << "state_budget = " << c.state_budget << "\n";
  return out.str();
}

}  // namespace procnet
