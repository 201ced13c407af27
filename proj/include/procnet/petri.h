#ifndef PROCNET_PETRI_H_
#define PROCNET_PETRI_H_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "procnet/extract.h"
#include "procnet/order.h"

namespace procnet {

class PetriError : public std::runtime_error {
 public:
  enum class Kind {
    kInvalidNet,
    kNoActivities,
    kLastNotFound,
    kEmptyDocument,
    kMalformedPnml,
  };
  PetriError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Transition {
  std::string id;
  std::optional<std::string> label;  // nullopt: silent

  bool silent() const { return !label.has_value(); }
  bool operator==(const Transition &) const = default;
};

// (from, to); one end is a place, the other a transition.
using Arc = std::pair<std::string, std::string>;

// Place/transition net with a designated source and sink place. Node ids are
// unique across places and transitions. Mutators only keep the node and arc
// sets consistent; structural workflow-net properties are checked by
// validate().
class WorkflowNet {
 public:
  bool empty() const { return places_.empty() && transitions_.empty(); }

  // Throws PetriError(kInvalidNet) on a duplicate id or missing endpoint.
  void add_place(const std::string &id);
  void add_transition(const std::string &id,
                      std::optional<std::string> label = std::nullopt);
  void add_arc(const std::string &from, const std::string &to);
  void remove_arc(const std::string &from, const std::string &to);
  // Renames a node and every arc touching it; source/sink follow.
  void rename(const std::string &from, const std::string &to);

  bool has_place(const std::string &id) const { return places_.contains(id); }
  bool has_transition(const std::string &id) const {
    return transitions_.contains(id);
  }
  bool has_node(const std::string &id) const {
    return has_place(id) || has_transition(id);
  }
  bool has_arc(const std::string &from, const std::string &to) const {
    return arcs_.contains({from, to});
  }

  const std::set<std::string> &places() const { return places_; }
  const std::map<std::string, Transition> &transitions() const {
    return transitions_;
  }
  const std::set<Arc> &arcs() const { return arcs_; }

  std::vector<std::string> preset(const std::string &id) const;
  std::vector<std::string> postset(const std::string &id) const;

  const std::string &source() const { return source_; }
  const std::string &sink() const { return sink_; }
  void set_source(std::string id) { source_ = std::move(id); }
  void set_sink(std::string id) { sink_ = std::move(id); }

  // An id not used by this net (nor rejected by `taken`), of the form
  // <prefix><n>.
  std::string fresh_id(std::string_view prefix) const;
  template <typename Taken>
  std::string fresh_id(std::string_view prefix, Taken &&taken) const {
    for (;;) {
      std::string id = std::string(prefix) + std::to_string(next_id_++);
      if (!has_node(id) && !taken(id)) return id;
    }
  }
  std::string add_fresh_place();
  std::string add_fresh_transition(std::optional<std::string> label);

  size_t labeled_transition_count() const;
  size_t silent_transition_count() const;
  // Distinct labels of labeled transitions, sorted.
  std::vector<std::string> labels() const;

  bool operator==(const WorkflowNet &other) const {
    return places_ == other.places_ && transitions_ == other.transitions_ &&
           arcs_ == other.arcs_ && source_ == other.source_ &&
           sink_ == other.sink_;
  }

 private:
  std::set<std::string> places_;
  std::map<std::string, Transition> transitions_;
  std::set<Arc> arcs_;
  std::string source_;
  std::string sink_;
  mutable size_t next_id_ = 0;
};

// Structural workflow-net checks: non-empty, arcs bipartite and resolvable,
// exactly one source and one sink place matching the declared ones, every
// transition with input and output, every node on a source-to-sink path, no
// cycles. Returns human-readable violations; empty means valid.
std::vector<std::string> validate(const WorkflowNet &net);

// Same graph up to renaming node ids: places to places, transitions to
// transitions with equal labels, source to source, sink to sink.
bool isomorphic(const WorkflowNet &a, const WorkflowNet &b);

// A fragment for composition. Entry and exit are the net's source and sink.
struct SubNet {
  WorkflowNet net;

  bool empty() const { return net.empty(); }
  const std::string &entry() const { return net.source(); }
  const std::string &exit() const { return net.sink(); }
};

struct NetConfig {
  bool include_negated = false;
};

// Sorted lowercased lemmas joined by '+', followed by "(objects)" with the
// sorted lowercased objects comma-joined when there are any.
std::string activity_label(const Activity &activity);

// OR-related activities share an input and an output place (free choice),
// AND groups sit between a silent split and a silent join, everything else
// follows textual order. An EXISTS activity gets a silent skip alternative.
// Relations naming activities outside `activities` are ignored.
// Throws PetriError(kNoActivities).
SubNet sub_net_for_sentence(const std::vector<Activity> &activities,
                            const std::vector<Relation> &relations,
                            const NetConfig &config = {});

// Fuses sub's entry with net's sink. Sub nodes whose ids clash with the net
// are renamed; `placed` receives the sub-net as it sits in the result.
// Appending to an empty net yields the sub-net. Throws kInvalidNet.
WorkflowNet append(const WorkflowNet &net, const SubNet &sub,
                   SubNet *placed = nullptr);

// Puts `sub` in parallel to `last` (which must already be part of `net`)
// between a new silent AND-split and AND-join. `relocated_last` receives
// last's new position. Falls back to append when `last` is empty.
// Throws kLastNotFound, kInvalidNet.
WorkflowNet add_parallel(const WorkflowNet &net, const SubNet &last,
                         const SubNet &sub, SubNet *placed = nullptr,
                         SubNet *relocated_last = nullptr);

// Splices `sub` into the sequence right before `last`. Falls back to append
// when `last` is empty. Throws kLastNotFound, kInvalidNet.
WorkflowNet insert_before(const WorkflowNet &net, const SubNet &last,
                          const SubNet &sub, SubNet *placed = nullptr,
                          SubNet *relocated_last = nullptr);

// What the net generator needs to know about one sentence.
struct SentencePlan {
  int sentence_index = 0;
  std::vector<Activity> activities;
  // Intra-sentence relations plus INTER BEFORE relations whose left side is
  // an activity of this sentence.
  std::vector<Relation> relations;
  bool parallel = false;  // AND-adverb on the first activity
  bool before = false;    // BEFORE-adverb on the only activity
};

// Folds sentences into one net: a parallel sentence goes next to the
// previous sub-net, activities marked BEFORE the previous sentence are
// spliced in front of it, everything else is appended. Sentences without
// usable activities are skipped. Throws kEmptyDocument, kInvalidNet.
WorkflowNet generate_workflow_net(const std::vector<SentencePlan> &sentences,
                                  const NetConfig &config = {});

// PNML 2009 place/transition net. Places, transitions and arcs are each
// written sorted by id. Throws kInvalidNet.
std::string to_pnml(const WorkflowNet &net, std::string_view name = "net");
// Throws kMalformedPnml, kInvalidNet.
WorkflowNet parse_pnml(std::string_view document);
// Throws kInvalidNet.
std::string to_dot(const WorkflowNet &net, std::string_view name = "net");

}  // namespace procnet

#endif  // PROCNET_PETRI_H_
