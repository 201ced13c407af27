#ifndef PROCNET_CONLLU_H_
#define PROCNET_CONLLU_H_

#include <istream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace procnet {

using LabelSet = std::set<std::string>;

// One word line of a CoNLL-U sentence. Only the columns the rule modules use
// are kept; FEATS, DEPS and MISC are dropped at parse time.
struct Token {
  int id = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;  // STTS tag, e.g. VVIMP
  int head = 0;      // 0 for the root
  std::string deprel;

  bool operator==(const Token &) const = default;
};

class ConlluError : public std::runtime_error {
 public:
  enum class Kind { kMalformedLine, kBadHead, kCyclicTree, kUnknownToken };

  ConlluError(Kind kind, const std::string &what, int line = 0)
      : std::runtime_error(what), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  // 1-based input line, 0 when not tied to a line.
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

// A parsed sentence. Immutable after construction; the constructor enforces
// the tree invariants: ids are 1..n in order, every head resolves, exactly one
// root (additional roots are re-attached to the first one with deprel "dep"),
// and the head relation is acyclic.
class DepTree {
 public:
  DepTree(std::vector<Token> tokens, std::string text, int index,
          std::string sent_id = "");

  const std::vector<Token> &tokens() const { return tokens_; }
  size_t size() const { return tokens_.size(); }
  bool contains(int id) const {
    return id >= 1 && id <= static_cast<int>(tokens_.size());
  }
  // Throws ConlluError(kUnknownToken).
  const Token &token(int id) const;
  int root() const { return root_; }

  const std::string &text() const { return text_; }
  int index() const { return index_; }
  // Value of the "# sent_id" comment, empty when absent.
  const std::string &sent_id() const { return sent_id_; }
  // sent_id when present, otherwise the decimal sentence index.
  std::string key() const;

 private:
  std::vector<Token> tokens_;
  std::string text_;
  int index_;
  std::string sent_id_;
  int root_ = 0;
};

// Reads every sentence block of a CoNLL-U stream. Multiword ranges ("3-4")
// and empty nodes ("3.1") are skipped.
std::vector<DepTree> parse_conllu(std::istream &in);
std::vector<DepTree> parse_conllu(std::string_view text);

// Writes the ten-column form back out; dropped columns are written as "_".
std::string serialize_conllu(const std::vector<DepTree> &trees);

// Direct dependents of `parent` in surface order, optionally restricted to
// the given deprels. Throws ConlluError(kUnknownToken).
std::vector<Token> children(const DepTree &tree, int parent);
std::vector<Token> children(const DepTree &tree, int parent,
                            const LabelSet &labels);

// Ids of `head` and all transitive dependents in surface order.
std::vector<int> subtree_ids(const DepTree &tree, int head);
// Surface forms of the subtree of `head`, space-joined in surface order.
std::string subtree_text(const DepTree &tree, int head);

// Verb-class token: UPOS VERB/AUX or an STTS tag starting with 'V'.
bool is_verb(const Token &token);
bool has_verb(const DepTree &tree);

}  // namespace procnet

#endif  // PROCNET_CONLLU_H_
