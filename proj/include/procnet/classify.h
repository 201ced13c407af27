#ifndef PROCNET_CLASSIFY_H_
#define PROCNET_CLASSIFY_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "procnet/conllu.h"

namespace procnet {

class ClassifyError : public std::runtime_error {
 public:
  enum class Kind {
    kEmptyCorpus,
    kSingleClassCorpus,
    kLengthMismatch,
    kFormat,
  };
  ClassifyError(Kind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Rule baseline

// Tag sets the imperative baseline keys on. Kept as data because tagger
// output for imperatives drifts between models.
struct RuleConfig {
  LabelSet subject_deprels{"sb", "sbp"};
  LabelSet imperative_xpos{"VVIMP"};
};

// A sentence is relevant when every subject hangs off an imperative verb.
// Sentences without subjects are relevant if they contain a verb; verbless
// sentences are never relevant. Depends only on xpos, deprel and head.
bool vvimp_relevant(const DepTree &tree, const RuleConfig &config = {});

// ---------------------------------------------------------------------------
// tf-idf + logistic regression

struct LabeledSentence {
  std::string id;
  std::string text;
  bool label = false;
};

// Sorted by column index, no duplicate columns.
using SparseVector = std::vector<std::pair<int, double>>;

inline constexpr std::string_view kUrlTerm = "$URL";

// Lowercased word sequences. URLs (http://, https://, www.) become kUrlTerm.
std::vector<std::string> tokenize_terms(std::string_view text);

class TfidfModel {
 public:
  TfidfModel() = default;
  // Smooth idf: ln((1 + N) / (1 + df)) + 1. Throws kEmptyCorpus.
  static TfidfModel fit(std::span<const LabeledSentence> corpus);
  static TfidfModel from_parts(std::map<std::string, int> vocabulary,
                               std::vector<double> idf, int doc_count);

  // Raw term counts times idf, L2-normalized. Unknown terms are dropped.
  SparseVector transform(std::string_view text) const;

  const std::map<std::string, int> &vocabulary() const { return vocabulary_; }
  const std::vector<double> &idf() const { return idf_; }
  int doc_count() const { return doc_count_; }
  size_t size() const { return idf_.size(); }
  std::optional<int> column(const std::string &term) const;

 private:
  std::map<std::string, int> vocabulary_;
  std::vector<double> idf_;
  int doc_count_ = 0;
};

struct LogRegHyper {
  double learning_rate = 2.0;
  double l2 = 1e-4;
  int epochs = 400;
  uint64_t seed = 13;
};

struct LogRegModel {
  std::vector<double> weights;
  double bias = 0.0;
  double threshold = 0.5;
  LogRegHyper hyper;

  double score(const SparseVector &x) const;
};

// Mean log-loss plus (l2 / 2) * |w|^2, the objective train_logreg descends.
double logreg_loss(const LogRegModel &model,
                   const std::vector<SparseVector> &features,
                   const std::vector<bool> &labels);

// Full-batch gradient descent from zero weights. When `loss_trace` is
// non-null it receives the objective before every step and after the last.
// Throws kEmptyCorpus, kSingleClassCorpus.
LogRegModel train_logreg(std::span<const LabeledSentence> corpus,
                         const TfidfModel &tfidf, const LogRegHyper &hyper,
                         std::vector<double> *loss_trace = nullptr);

struct Prediction {
  double probability = 0.5;
  bool relevant = true;
};

double sigmoid(double z);
Prediction predict_relevance(const LogRegModel &model, const TfidfModel &tfidf,
                             std::string_view text);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Binary scores with `true` as the positive class; a zero denominator gives
// zero. Throws kLengthMismatch.
F1Score evaluate_f1(const std::vector<bool> &predictions,
                    const std::vector<bool> &gold);

// A fitted tf-idf vectorizer with its classifier; what model files hold.
struct TextClassifier {
  TfidfModel tfidf;
  LogRegModel logreg;

  Prediction predict(std::string_view text) const {
    return predict_relevance(logreg, tfidf, text);
  }
};

TextClassifier train_text_classifier(std::span<const LabeledSentence> corpus,
                                     const LogRegHyper &hyper);

// ---------------------------------------------------------------------------
// Files

// {"id": string, "text": string, "label": 0|1} per line; blank lines are
// skipped. Throws kFormat naming the offending line.
std::vector<LabeledSentence> read_labeled_jsonl(std::istream &in);
void write_labeled_jsonl(std::ostream &out,
                         std::span<const LabeledSentence> sentences);

// {"id": string, "relevant": 0|1} per line, keyed by id. Throws kFormat.
std::map<std::string, bool> read_external_predictions(std::istream &in);

// Single JSON document; keys are written in sorted order so equal models
// serialize to identical bytes.
std::string save_classifier(const TextClassifier &model);
// Throws kFormat.
TextClassifier load_classifier(std::string_view json_text);

}  // namespace procnet

#endif  // PROCNET_CLASSIFY_H_
