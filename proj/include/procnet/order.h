#ifndef PROCNET_ORDER_H_
#define PROCNET_ORDER_H_

#include <string>
#include <vector>

#include "procnet/conllu.h"
#include "procnet/extract.h"

namespace procnet {

enum class RelationKind { kAnd, kOr, kBefore };
enum class RelationScope { kIntra, kInter };

const char *relation_kind_name(RelationKind kind);
const char *relation_scope_name(RelationScope scope);

// BEFORE reads "left happens before right".
struct Relation {
  RelationKind kind = RelationKind::kAnd;
  std::string left;
  std::string right;
  RelationScope scope = RelationScope::kIntra;

  auto operator<=>(const Relation &) const = default;
};

struct OrderingConfig {
  LabelSet before_adverbs{"zuvor",     "davor",    "vorab",  "vordem",
                          "vorher",    "vorweg",   "zuerst", "zunächst",
                          "anfänglich", "anfangs", "eingangs", "erst",
                          "vorerst"};
  LabelSet and_adverbs{"inzwischen",  "dabei",           "währenddessen",
                       "dazwischen",  "mittlerweile",    "solange",
                       "zwischenzeitlich", "derweil",    "einstweilen"};
  LabelSet and_conjunctions{"und"};
  LabelSet or_conjunctions{"oder"};
  LabelSet coordination_deprels{"cd", "cj"};
  LabelSet conjunction_deprels{"cd"};
};

// Relations carried inside one sentence: AND/OR from coordination, AND from
// an AND-adverb on a non-first activity (to its predecessor), BEFORE from a
// BEFORE-adverb on a non-first activity (towards every activity of
// `previous`, scope INTER). A BEFORE-adverb on the first of several
// activities yields nothing and appends a message to `warnings`. "First"
// and "previous" follow the position of the first verb token, whatever the
// input order. Output is sorted.
std::vector<Relation> intra_sentence_relations(
    const DepTree &tree, const std::vector<Activity> &activities,
    const std::vector<Activity> &previous, const OrderingConfig &config = {},
    std::vector<std::string> *warnings = nullptr);

// An AND-adverb hangs off the verb group of the textually first activity.
bool parallel_marker(const DepTree &tree, const std::vector<Activity> &activities,
                     const OrderingConfig &config = {});

// The sentence has exactly one activity and a BEFORE-adverb hangs off it.
bool before_marker(const DepTree &tree, const std::vector<Activity> &activities,
                   const OrderingConfig &config = {});

// Cross-sentence relations implied by the two markers above, pairing every
// activity of this sentence with every activity of `previous`. Sorted.
std::vector<Relation> inter_sentence_relations(
    const DepTree &tree, const std::vector<Activity> &activities,
    const std::vector<Activity> &previous, const OrderingConfig &config = {});

void sort_relations(std::vector<Relation> *relations);

}  // namespace procnet

#endif  // PROCNET_ORDER_H_
