#include "procnet/order.h"

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>

#include "procnet/text.h"

namespace procnet {

const char *relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::kAnd:
      return "AND";
    case RelationKind::kOr:
      return "OR";
    case RelationKind::kBefore:
      return "BEFORE";
  }
  return "?";
}

const char *relation_scope_name(RelationScope scope) {
  return scope == RelationScope::kIntra ? "INTRA" : "INTER";
}

void sort_relations(std::vector<Relation> *relations) {
  std::sort(relations->begin(), relations->end());
  relations->erase(std::unique(relations->begin(), relations->end()),
                   relations->end());
}

namespace {

bool lexicon_match(const Token &t, const LabelSet &lexicon) {
  std::string lemma = (t.lemma.empty() || t.lemma == "_") ? t.form : t.lemma;
  return lexicon.contains(utf8_lower(lemma)) ||
         lexicon.contains(utf8_lower(t.form));
}

bool in_group(const Activity &a, int id) {
  return std::binary_search(a.verb_token_ids.begin(), a.verb_token_ids.end(), id);
}

// The verb-group token whose head lies outside the group.
int group_top(const DepTree &tree, const Activity &a) {
  for (int id : a.verb_token_ids) {
    int head = tree.token(id).head;
    if (head == 0 || !in_group(a, head)) return id;
  }
  return a.verb_token_ids.front();
}

std::vector<int> path_to_root(const DepTree &tree, int id) {
  std::vector<int> path;
  for (int cur = id; cur != 0; cur = tree.token(cur).head) path.push_back(cur);
  return path;
}

// Tokens on the tree path between two tokens when every edge of that path
// is a coordination edge; nullopt otherwise.
std::optional<std::vector<int>> coordination_path(const DepTree &tree, int from,
                                                  int to,
                                                  const OrderingConfig &config) {
  auto up_from = path_to_root(tree, from);
  auto up_to = path_to_root(tree, to);
  int lca = 0;
  for (int id : up_from) {
    if (std::find(up_to.begin(), up_to.end(), id) != up_to.end()) {
      lca = id;
      break;
    }
  }
  if (lca == 0) return std::nullopt;
  std::vector<int> path;
  for (const auto *side : {&up_from, &up_to}) {
    for (int id : *side) {
      if (id == lca) break;
      if (!config.coordination_deprels.contains(tree.token(id).deprel)) {
        return std::nullopt;
      }
      path.push_back(id);
    }
  }
  path.push_back(lca);
  return path;
}

std::optional<RelationKind> conjunction_kind(const Token &t,
                                             const OrderingConfig &config) {
  if (lexicon_match(t, config.or_conjunctions)) return RelationKind::kOr;
  if (lexicon_match(t, config.and_conjunctions)) return RelationKind::kAnd;
  return std::nullopt;
}

std::optional<RelationKind> coordination_kind(const DepTree &tree,
                                              const std::vector<int> &path,
                                              const OrderingConfig &config) {
  for (int id : path) {
    const Token &t = tree.token(id);
    if (!config.conjunction_deprels.contains(t.deprel)) continue;
    if (auto kind = conjunction_kind(t, config)) return kind;
  }
  for (int id : path) {
    for (const Token &c : children(tree, id, config.conjunction_deprels)) {
      if (auto kind = conjunction_kind(c, config)) return kind;
    }
  }
  return std::nullopt;
}

// Lexicon adverbs hanging directly off the activity's verb group.
bool has_adverb(const DepTree &tree, const Activity &a, const LabelSet &lexicon) {
  for (const Token &t : tree.tokens()) {
    if (t.head != 0 && in_group(a, t.head) && !in_group(a, t.id) &&
        lexicon_match(t, lexicon)) {
      return true;
    }
  }
  return false;
}

int first_token(const Activity &a) {
  return a.verb_token_ids.empty() ? std::numeric_limits<int>::max()
                                  : a.verb_token_ids.front();
}

// Activities by position of their first verb token.
std::vector<Activity> textual_order(std::vector<Activity> acts) {
  std::sort(acts.begin(), acts.end(), [](const Activity &a, const Activity &b) {
    return std::pair(first_token(a), a.id) < std::pair(first_token(b), b.id);
  });
  return acts;
}

const Activity *first_activity(const std::vector<Activity> &acts) {
  const Activity *best = nullptr;
  for (const Activity &a : acts) {
    if (!best || std::pair(first_token(a), a.id) <
                     std::pair(first_token(*best), best->id)) {
      best = &a;
    }
  }
  return best;
}

}  // namespace

std::vector<Relation> intra_sentence_relations(
    const DepTree &tree, const std::vector<Activity> &unordered,
    const std::vector<Activity> &previous, const OrderingConfig &config,
    std::vector<std::string> *warnings) {
  const std::vector<Activity> activities = textual_order(unordered);
  std::vector<Relation> out;
  for (size_t i = 0; i < activities.size(); ++i) {
    for (size_t j = i + 1; j < activities.size(); ++j) {
      auto path = coordination_path(tree, group_top(tree, activities[i]),
                                    group_top(tree, activities[j]), config);
      if (!path) continue;
      if (auto kind = coordination_kind(tree, *path, config)) {
        out.push_back({*kind, activities[i].id, activities[j].id,
                       RelationScope::kIntra});
      }
    }
  }
  for (size_t k = 0; k < activities.size(); ++k) {
    const Activity &a = activities[k];
    bool before = has_adverb(tree, a, config.before_adverbs);
    bool parallel = has_adverb(tree, a, config.and_adverbs);
    if (k == 0) {
      if (before && activities.size() > 1 && warnings) {
        warnings->push_back("sentence " + std::to_string(tree.index()) +
                            ": BEFORE adverb on the first of " +
                            std::to_string(activities.size()) +
                            " activities is ignored");
      }
      continue;
    }
    if (parallel) {
      out.push_back({RelationKind::kAnd, activities[k - 1].id, a.id,
                     RelationScope::kIntra});
    }
    if (before) {
      for (const Activity &p : previous) {
        out.push_back({RelationKind::kBefore, a.id, p.id, RelationScope::kInter});
      }
    }
  }
  sort_relations(&out);
  return out;
}

bool parallel_marker(const DepTree &tree, const std::vector<Activity> &activities,
                     const OrderingConfig &config) {
  const Activity *first = first_activity(activities);
  return first && has_adverb(tree, *first, config.and_adverbs);
}

bool before_marker(const DepTree &tree, const std::vector<Activity> &activities,
                   const OrderingConfig &config) {
  return activities.size() == 1 &&
         has_adverb(tree, activities.front(), config.before_adverbs);
}

std::vector<Relation> inter_sentence_relations(
    const DepTree &tree, const std::vector<Activity> &activities,
    const std::vector<Activity> &previous, const OrderingConfig &config) {
  std::vector<Relation> out;
  bool parallel = parallel_marker(tree, activities, config);
  bool before = before_marker(tree, activities, config);
  for (const Activity &a : activities) {
    for (const Activity &p : previous) {
      if (parallel) {
        out.push_back({RelationKind::kAnd, p.id, a.id, RelationScope::kInter});
      }
      if (before) {
        out.push_back({RelationKind::kBefore, a.id, p.id, RelationScope::kInter});
      }
    }
  }
  sort_relations(&out);
  return out;
}

}  // namespace procnet
