#ifndef PROCNET_TESTS_SUPPORT_H_
#define PROCNET_TESTS_SUPPORT_H_

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "procnet/classify.h"
#include "procnet/conllu.h"
#include "procnet/petri.h"
#include "procnet/pipeline.h"
#include "procnet/similarity.h"

namespace procnet::testing {

std::string fixture_path(const std::string &name);
std::string read_fixture(const std::string &name);
std::vector<DepTree> load_conllu_fixture(const std::string &name);
// The block with the given sent_id.
DepTree fixture_sentence(const std::string &file, const std::string &sent_id);

// ("ja", true) x 10 and ("nein", false) x 10.
std::vector<LabeledSentence> toy_corpus();

// Imperative recipe steps (relevant) against descriptive or narrative
// sentences (irrelevant), half each, shuffled with `seed`.
std::vector<LabeledSentence> synthetic_corpus(size_t n, uint64_t seed);

// Appends tokens in surface order; heads are token ids (0 = root).
class TreeBuilder {
 public:
  int add(const std::string &form, const std::string &lemma,
          const std::string &upos, const std::string &xpos, int head,
          const std::string &deprel);
  void attach(int id, int head, const std::string &deprel);
  int size() const { return static_cast<int>(tokens_.size()); }
  DepTree build(int index, const std::string &sent_id = "") const;

 private:
  std::vector<Token> tokens_;
};

struct FuzzOptions {
  int min_sentences = 1;
  int max_sentences = 10;
  int max_activities = 3;
};

// Random recipe-like document: per sentence 0..max_activities coordinated
// instruction clauses with random und/oder coordination, temporal adverbs,
// optionality markers, negation and modal constructions.
Document random_document(std::mt19937_64 &rng, int number,
                         const FuzzOptions &options = {});

// Footprint straight from the definition over an explicit trace set.
CausalFootprint footprint_from_traces(const std::vector<std::string> &labels,
                                      const std::set<Trace> &traces);

// Footprint of a net whose labeled transitions fire in one fixed order.
CausalFootprint sequential_footprint(const std::vector<std::string> &order);

// Renames every label with `prefix` prepended.
WorkflowNet relabel(const WorkflowNet &net, const std::string &prefix);

// Hand-wired canonical nets over labeled transitions.
WorkflowNet sequence_net(const std::vector<std::string> &labels);
WorkflowNet and_net(const std::vector<std::string> &labels);
WorkflowNet or_net(const std::vector<std::string> &labels);

}  // namespace procnet::testing

#endif  // PROCNET_TESTS_SUPPORT_H_
