#ifndef PROCNET_EXTRACT_H_
#define PROCNET_EXTRACT_H_

#include <string>
#include <vector>

#include "procnet/conllu.h"

namespace procnet {

enum class Quantifier { kAll, kExists };

const char *quantifier_name(Quantifier q);

// One activity (verbs, subjects, objects, modifiers) read off a sentence.
// `verbs` keeps surface forms, `lemmas` the normalized verbs used for
// labeling (a separable particle is prefixed to its verb's lemma).
struct Activity {
  std::string id;
  int sentence_index = 0;
  std::vector<std::string> verbs;
  std::vector<std::string> lemmas;
  std::vector<std::string> subjects;
  std::vector<std::string> objects;
  std::vector<std::string> modifiers;
  bool negated = false;
  Quantifier quantifier = Quantifier::kAll;
  std::vector<int> verb_token_ids;  // ascending
};

struct ExtractionConfig {
  LabelSet subject_deprels{"sb", "sbp"};
  LabelSet object_deprels{"oa", "og"};
  LabelSet modifier_deprels{"mo", "mnr"};
  // Links between two verb tokens that merge them into one activity.
  LabelSet verb_chain_deprels{"oc", "aux"};
  LabelSet particle_deprels{"svp", "compound:prt"};
  LabelSet negation_deprels{"ng"};
  // Passive agent ("von ..."). When present, sb dependents become objects.
  LabelSet passive_agent_deprels{"sbp"};
  bool passive_subject_as_object = true;
  // Verb-group members with these tags are left out of `verbs`/`lemmas`
  // unless nothing else remains.
  LabelSet auxiliary_xpos{"VAFIN", "VAIMP", "VAINF", "VAPP",
                          "VMFIN", "VMINF", "VMPP"};
  LabelSet exists_markers{"können",  "dürfen",   "mögen",     "sollten",
                          "kann",    "vielleicht", "optional", "eventuell",
                          "gegebenenfalls"};
  LabelSet all_markers{"müssen"};
  bool use_vvimp_heuristic = true;
  LabelSet imperative_xpos{"VVIMP"};
  LabelSet finite_xpos{"VVFIN", "VAFIN", "VMFIN"};
};

// Groups verb tokens joined by verb-chain links into activities, collects
// their subject/object/modifier phrases and fills `negated` and
// `quantifier`. Ordered by first verb token. Ids are "s<index>a<k>".
std::vector<Activity> extract_activities(const DepTree &tree,
                                         const ExtractionConfig &config = {});

// True when a verb-group token or one of its direct dependents carries a
// negation deprel.
bool detect_negation(const DepTree &tree, const Activity &activity,
                     const ExtractionConfig &config = {});

// EXISTS when the verb group, a chained auxiliary or a direct modifier
// carries an optionality marker (lemma or lowercased form); ALL otherwise.
Quantifier quantify(const DepTree &tree, const Activity &activity,
                    const ExtractionConfig &config = {});

// Drops non-imperative activities from sentences that mix imperative and
// non-imperative finite verbs. Output is an order-preserving subset.
std::vector<Activity> filter_subordinate(std::vector<Activity> activities,
                                         const DepTree &tree,
                                         const ExtractionConfig &config = {});

}  // namespace procnet

#endif  // PROCNET_EXTRACT_H_
