#ifndef PROCNET_SIMILARITY_H_
#define PROCNET_SIMILARITY_H_

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "procnet/petri.h"

namespace procnet {

class SimilarityError : public std::runtime_error {
 public:
  enum class Kind { kCyclicNet, kStateBudgetExceeded, kEmptyCorpus };
  SimilarityError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr size_t kDefaultStateBudget = 100000;

using Trace = std::vector<std::string>;

// Every label sequence of a firing sequence from one token on the source to
// one token on the sink. Silent transitions are left out of the sequences.
// `budget` caps the number of explored states.
// Throws SimilarityError(kCyclicNet, kStateBudgetExceeded),
// PetriError(kInvalidNet).
std::set<Trace> traces(const WorkflowNet &net,
                       size_t budget = kDefaultStateBudget);

enum class FootprintRelation {
  kCausal,         // a before b in every trace holding both
  kInverseCausal,  // b before a in every trace holding both
  kConcurrent,     // both orders occur
  kExclusive,      // never in one trace
};

const char *footprint_relation_name(FootprintRelation r);

struct CausalFootprint {
  std::vector<std::string> labels;  // sorted, distinct
  // Every ordered pair of distinct labels.
  std::map<std::pair<std::string, std::string>, FootprintRelation> relation;

  FootprintRelation at(const std::string &a, const std::string &b) const {
    return relation.at({a, b});
  }
};

// Footprint over the labeled transitions, computed on the reachability
// graph (one pass per reachable marking) instead of enumerating traces.
// `budget` caps the number of reachable markings.
CausalFootprint causal_footprint(const WorkflowNet &net,
                                 size_t budget = kDefaultStateBudget);

struct SimilarityReport {
  double score = 0.0;
  std::vector<std::string> shared_labels;
  std::vector<std::string> only_left;
  std::vector<std::string> only_right;
  size_t pair_agreements = 0;  // shared pair-relation atoms
};

// Cosine similarity of binary indicator vectors over footprint atoms: one
// atom per label and one per related label pair. Labels match exactly.
// Two empty footprints score 1, one empty footprint scores 0.
SimilarityReport cfp_similarity(const CausalFootprint &left,
                                const CausalFootprint &right);

struct NetPair {
  std::string left_name;
  std::string right_name;
  WorkflowNet left;
  WorkflowNet right;
};

struct PairReport {
  std::string left_name;
  std::string right_name;
  SimilarityReport report;
};

struct CorpusReport {
  double mean = 0.0;
  std::vector<PairReport> pairs;
};

// Throws SimilarityError(kEmptyCorpus) plus whatever footprinting throws.
CorpusReport compare_corpus(const std::vector<NetPair> &pairs,
                            size_t budget = kDefaultStateBudget);

}  // namespace procnet

#endif  // PROCNET_SIMILARITY_H_
