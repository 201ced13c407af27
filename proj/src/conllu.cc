#include "procnet/conllu.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "procnet/text.h"

namespace procnet {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool parse_int(std::string_view s, int *out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::string malformed(int line, const std::string &msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

struct PendingSentence {
  std::vector<Token> tokens;
  std::string text;
  std::string sent_id;
  int first_line = 0;
};

}  // namespace

DepTree::DepTree(std::vector<Token> tokens, std::string text, int index,
                 std::string sent_id)
    : tokens_(std::move(tokens)),
      text_(std::move(text)),
      index_(index),
      sent_id_(std::move(sent_id)) {
  const int n = static_cast<int>(tokens_.size());
  for (int i = 0; i < n; ++i) {
    Token &t = tokens_[i];
    if (t.id != i + 1) {
      throw ConlluError(ConlluError::Kind::kMalformedLine,
                        "token ids must run 1..n, got " + std::to_string(t.id) +
                            " at position " + std::to_string(i + 1));
    }
    if (t.head < 0 || t.head > n) {
      throw ConlluError(ConlluError::Kind::kBadHead,
                        "token " + std::to_string(t.id) + " has head " +
                            std::to_string(t.head) + " outside 0.." +
                            std::to_string(n));
    }
    if (t.head == t.id) {
      throw ConlluError(ConlluError::Kind::kCyclicTree,
                        "token " + std::to_string(t.id) + " heads itself");
    }
    if (t.deprel.empty()) {
      throw ConlluError(ConlluError::Kind::kMalformedLine,
                        "token " + std::to_string(t.id) + " has empty deprel");
    }
  }
  for (Token &t : tokens_) {
    if (t.head != 0) continue;
    if (root_ == 0) {
      root_ = t.id;
    } else {
      t.head = root_;
      t.deprel = "dep";
    }
  }
  // Every token must reach the root; a walk longer than n steps is a cycle.
  for (const Token &t : tokens_) {
    int cur = t.id;
    int steps = 0;
    while (cur != 0) {
      if (++steps > n) {
        throw ConlluError(ConlluError::Kind::kCyclicTree,
                          "head relation of token " + std::to_string(t.id) +
                              " contains a cycle");
      }
      cur = tokens_[cur - 1].head;
    }
  }
  if (text_.empty()) {
    std::vector<std::string> forms;
    for (const Token &t : tokens_) forms.push_back(t.form);
    text_ = join(forms, " ");
  }
}

const Token &DepTree::token(int id) const {
  if (!contains(id)) {
    throw ConlluError(ConlluError::Kind::kUnknownToken,
                      "unknown token id " + std::to_string(id));
  }
  return tokens_[id - 1];
}

std::string DepTree::key() const {
  return sent_id_.empty() ? std::to_string(index_) : sent_id_;
}

std::vector<DepTree> parse_conllu(std::istream &in) {
  std::vector<DepTree> trees;
  PendingSentence pending;
  std::string raw;
  int line_no = 0;

  auto flush = [&]() {
    if (pending.tokens.empty()) {
      pending = PendingSentence{};
      return;
    }
    try {
      trees.emplace_back(std::move(pending.tokens), std::move(pending.text),
                         static_cast<int>(trees.size()),
                         std::move(pending.sent_id));
    } catch (const ConlluError &e) {
      throw ConlluError(e.kind(),
                        "sentence starting at line " +
                            std::to_string(pending.first_line) + ": " + e.what(),
                        pending.first_line);
    }
    pending = PendingSentence{};
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = trim(line.substr(1));
      auto take = [&](std::string_view key, std::string *dst) {
        if (body.substr(0, key.size()) != key) return;
        std::string_view rest = trim(body.substr(key.size()));
        if (rest.empty() || rest.front() != '=') return;
        *dst = std::string(trim(rest.substr(1)));
      };
      take("text", &pending.text);
      take("sent_id", &pending.sent_id);
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 10) {
      throw ConlluError(ConlluError::Kind::kMalformedLine,
                        malformed(line_no, "expected 10 tab-separated columns, got " +
                                               std::to_string(fields.size())),
                        line_no);
    }
    if (fields[0].find_first_of("-.") != std::string_view::npos) continue;
    Token tok;
    if (!parse_int(fields[0], &tok.id)) {
      throw ConlluError(ConlluError::Kind::kMalformedLine,
                        malformed(line_no, "bad token id '" +
                                               std::string(fields[0]) + "'"),
                        line_no);
    }
    if (!parse_int(fields[6], &tok.head)) {
      throw ConlluError(ConlluError::Kind::kBadHead,
                        malformed(line_no, "bad head '" +
                                               std::string(fields[6]) + "'"),
                        line_no);
    }
    tok.form = fields[1];
    tok.lemma = fields[2];
    tok.upos = fields[3];
    tok.xpos = fields[4];
    tok.deprel = fields[7];
    if (pending.tokens.empty()) pending.first_line = line_no;
    pending.tokens.push_back(std::move(tok));
  }
  flush();
  return trees;
}

std::vector<DepTree> parse_conllu(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in);
}

std::string serialize_conllu(const std::vector<DepTree> &trees) {
  std::ostringstream out;
  for (const DepTree &tree : trees) {
    if (!tree.sent_id().empty()) out << "# sent_id = " << tree.sent_id() << '\n';
    out << "# text = " << tree.text() << '\n';
    for (const Token &t : tree.tokens()) {
      out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t'
          << t.xpos << "\t_\t" << t.head << '\t' << t.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
  return out.str();
}

std::vector<Token> children(const DepTree &tree, int parent) {
  tree.token(parent);
  std::vector<Token> out;
  for (const Token &t : tree.tokens()) {
    if (t.head == parent) out.push_back(t);
  }
  return out;
}

std::vector<Token> children(const DepTree &tree, int parent,
                            const LabelSet &labels) {
  std::vector<Token> out = children(tree, parent);
  std::erase_if(out, [&](const Token &t) { return !labels.contains(t.deprel); });
  return out;
}

std::vector<int> subtree_ids(const DepTree &tree, int head) {
  tree.token(head);
  std::vector<int> out;
  for (const Token &t : tree.tokens()) {
    int cur = t.id;
    while (cur != 0 && cur != head) cur = tree.token(cur).head;
    if (cur == head) out.push_back(t.id);
  }
  return out;
}

std::string subtree_text(const DepTree &tree, int head) {
  std::vector<std::string> forms;
  for (int id : subtree_ids(tree, head)) forms.push_back(tree.token(id).form);
  return join(forms, " ");
}

bool is_verb(const Token &token) {
  return token.upos == "VERB" || token.upos == "AUX" ||
         (!token.xpos.empty() && token.xpos.front() == 'V');
}

bool has_verb(const DepTree &tree) {
  return std::any_of(tree.tokens().begin(), tree.tokens().end(), is_verb);
}

}  // namespace procnet
