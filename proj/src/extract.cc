#include "procnet/extract.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "procnet/text.h"

namespace procnet {

const char *quantifier_name(Quantifier q) {
  return q == Quantifier::kExists ? "EXISTS" : "ALL";
}

namespace {

int find_root(std::vector<int> &parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

std::string normalized_lemma(const Token &t) {
  if (t.lemma.empty() || t.lemma == "_") return utf8_lower(t.form);
  return utf8_lower(t.lemma);
}

void add_unique(std::vector<std::string> *v, std::string s) {
  if (std::find(v->begin(), v->end(), s) == v->end()) v->push_back(std::move(s));
}

bool marker_match(const Token &t, const LabelSet &markers) {
  return markers.contains(normalized_lemma(t)) ||
         markers.contains(utf8_lower(t.form));
}

bool in_group(const Activity &a, int id) {
  return std::binary_search(a.verb_token_ids.begin(), a.verb_token_ids.end(), id);
}

}  // namespace

std::vector<Activity> extract_activities(const DepTree &tree,
                                         const ExtractionConfig &config) {
  const int n = static_cast<int>(tree.size());
  std::vector<int> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (const Token &t : tree.tokens()) {
    if (!is_verb(t) || t.head == 0) continue;
    if (!config.verb_chain_deprels.contains(t.deprel)) continue;
    if (!is_verb(tree.token(t.head))) continue;
    parent[find_root(parent, t.id)] = find_root(parent, t.head);
  }

  // Groups keyed by union-find root, ordered by their first token.
  std::map<int, std::vector<int>> by_root;
  for (const Token &t : tree.tokens()) {
    if (is_verb(t)) by_root[find_root(parent, t.id)].push_back(t.id);
  }
  std::vector<std::vector<int>> groups;
  for (auto &[root, ids] : by_root) groups.push_back(std::move(ids));
  std::sort(groups.begin(), groups.end(),
            [](const auto &a, const auto &b) { return a.front() < b.front(); });

  std::vector<Activity> out;
  for (const auto &ids : groups) {
    Activity a;
    a.id = "s" + std::to_string(tree.index()) + "a" + std::to_string(out.size());
    a.sentence_index = tree.index();
    a.verb_token_ids = ids;

    std::vector<int> lexical;
    for (int id : ids) {
      if (!config.auxiliary_xpos.contains(tree.token(id).xpos)) {
        lexical.push_back(id);
      }
    }
    if (lexical.empty()) lexical = ids;
    for (int id : lexical) {
      const Token &v = tree.token(id);
      std::string lemma = normalized_lemma(v);
      for (const Token &c : children(tree, id, config.particle_deprels)) {
        lemma = utf8_lower(c.form) + lemma;
      }
      add_unique(&a.verbs, v.form);
      add_unique(&a.lemmas, lemma);
    }

    bool passive = false;
    if (config.passive_subject_as_object) {
      for (int id : ids) {
        if (!children(tree, id, config.passive_agent_deprels).empty()) {
          passive = true;
        }
      }
    }
    for (const Token &c : tree.tokens()) {
      if (c.head == 0 || !in_group(a, c.head) || in_group(a, c.id)) continue;
      if (is_verb(c)) continue;
      bool subject = config.subject_deprels.contains(c.deprel);
      bool object = config.object_deprels.contains(c.deprel);
      if (passive && subject && !config.passive_agent_deprels.contains(c.deprel)) {
        subject = false;
        object = true;
      }
      if (subject) {
        add_unique(&a.subjects, subtree_text(tree, c.id));
      } else if (object) {
        add_unique(&a.objects, subtree_text(tree, c.id));
      } else if (config.modifier_deprels.contains(c.deprel)) {
        add_unique(&a.modifiers, subtree_text(tree, c.id));
      }
    }
    a.negated = detect_negation(tree, a, config);
    a.quantifier = quantify(tree, a, config);
    out.push_back(std::move(a));
  }
  return out;
}

bool detect_negation(const DepTree &tree, const Activity &activity,
                     const ExtractionConfig &config) {
  for (const Token &t : tree.tokens()) {
    if (!config.negation_deprels.contains(t.deprel)) continue;
    if (in_group(activity, t.id)) return true;
    if (t.head != 0 && in_group(activity, t.head)) return true;
  }
  return false;
}

Quantifier quantify(const DepTree &tree, const Activity &activity,
                    const ExtractionConfig &config) {
  std::vector<const Token *> scope;
  for (const Token &t : tree.tokens()) {
    if (in_group(activity, t.id)) {
      scope.push_back(&t);
    } else if (t.head != 0 && in_group(activity, t.head) &&
               (config.modifier_deprels.contains(t.deprel) ||
                config.verb_chain_deprels.contains(t.deprel))) {
      scope.push_back(&t);
    }
  }
  // An ALL marker reads the same as no marker at all: mandatory.
  for (const Token *t : scope) {
    if (marker_match(*t, config.exists_markers)) return Quantifier::kExists;
  }
  return Quantifier::kAll;
}

std::vector<Activity> filter_subordinate(std::vector<Activity> activities,
                                         const DepTree &tree,
                                         const ExtractionConfig &config) {
  if (!config.use_vvimp_heuristic) return activities;
  bool imperative = false, finite = false;
  for (const Token &t : tree.tokens()) {
    if (!is_verb(t)) continue;
    if (config.imperative_xpos.contains(t.xpos)) imperative = true;
    if (config.finite_xpos.contains(t.xpos)) finite = true;
  }
  if (!imperative || !finite) return activities;
  std::erase_if(activities, [&](const Activity &a) {
    return std::none_of(a.verb_token_ids.begin(), a.verb_token_ids.end(),
                        [&](int id) {
                          return config.imperative_xpos.contains(
                              tree.token(id).xpos);
                        });
  });
  return activities;
}

}  // namespace procnet
