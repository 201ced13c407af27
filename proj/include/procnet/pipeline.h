#ifndef PROCNET_PIPELINE_H_
#define PROCNET_PIPELINE_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procnet/classify.h"
#include "procnet/config.h"
#include "procnet/conllu.h"
#include "procnet/extract.h"
#include "procnet/order.h"
#include "procnet/petri.h"
#include "procnet/similarity.h"

namespace procnet {

struct Document {
  std::string name;
  std::vector<DepTree> sentences;
};

// Decides which sentences reach extraction.
class RelevanceGate {
 public:
  // Everything is relevant.
  static RelevanceGate open();
  static RelevanceGate rule(RuleConfig config = {});
  // threshold < 0 keeps the model's threshold.
  static RelevanceGate logreg(TextClassifier model, double threshold = -1.0);
  // Keys are sentence ids; "<document>:<id>" entries take precedence.
  static RelevanceGate external(std::map<std::string, bool> predictions);
  // Builds the gate a config asks for, reading model and prediction files.
  // Throws ConfigError, ClassifyError.
  static RelevanceGate from_config(const PipelineConfig &config);

  struct Decision {
    bool relevant = true;
    std::optional<double> probability;
  };
  // Throws ClassifyError(kFormat) when an external prediction is missing.
  Decision decide(const DepTree &tree, const std::string &document) const;
  // Same for raw sentence text keyed by `id`. The rule gate needs a parse
  // and throws ClassifyError(kFormat).
  Decision decide_text(std::string_view text, const std::string &id,
                       const std::string &document) const;

  ClassifierKind kind() const { return kind_; }

 private:
  ClassifierKind kind_ = ClassifierKind::kNone;
  RuleConfig rule_;
  std::optional<TextClassifier> model_;
  std::map<std::string, bool> predictions_;
};

struct SentenceRecord {
  int index = 0;
  std::string key;
  bool relevant = true;
  std::optional<double> probability;
  size_t activity_count = 0;  // after subordinate filtering
};

struct DocumentResult {
  std::string name;
  std::vector<SentenceRecord> sentences;
  std::vector<Activity> activities;
  std::vector<Relation> relations;  // sorted
  std::vector<SentencePlan> plans;
  std::vector<std::string> warnings;
  std::optional<WorkflowNet> net;
  std::string error;  // set when no net could be built
  bool empty_document = false;
};

// Gate, extract, filter, order and build the net for one document. Net
// construction errors end up in `error`; input errors propagate.
DocumentResult process_document(const Document &document,
                                const PipelineConfig &config,
                                const RelevanceGate &gate);

// {"document", "sentences", "activities", "relations", "warnings"}.
std::string document_json(const DocumentResult &result);
std::string activity_json(const Activity &activity);
std::string corpus_report_json(const CorpusReport &report);

// Runs fn(0..n-1) on at most `jobs` threads. The exception of the lowest
// failing index is rethrown after all workers stop.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)> &fn);

}  // namespace procnet

#endif  // PROCNET_PIPELINE_H_
