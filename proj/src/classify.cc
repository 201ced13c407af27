#include "procnet/classify.h"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "procnet/text.h"

namespace procnet {

bool vvimp_relevant(const DepTree &tree, const RuleConfig &config) {
  if (!has_verb(tree)) return false;
  for (const Token &t : tree.tokens()) {
    if (!config.subject_deprels.contains(t.deprel)) continue;
    if (t.head == 0) return false;
    if (!config.imperative_xpos.contains(tree.token(t.head).xpos)) return false;
  }
  return true;
}

namespace {

void split_words(std::string_view text, std::vector<std::string> *out) {
  std::string word;
  size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = utf8_next(text, pos);
    if (is_word_char(cp)) {
      utf8_append(word, cp);
    } else if (!word.empty()) {
      out->push_back(utf8_lower(word));
      word.clear();
    }
  }
  if (!word.empty()) out->push_back(utf8_lower(word));
}

}  // namespace

std::vector<std::string> tokenize_terms(std::string_view text) {
  static const std::regex kUrl(R"((https?://|www\.)[^\s]+)",
                               std::regex::icase | std::regex::optimize);
  std::vector<std::string> terms;
  std::string owned(text);
  auto begin = std::sregex_iterator(owned.begin(), owned.end(), kUrl);
  size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    split_words(std::string_view(owned).substr(last, it->position() - last),
                &terms);
    terms.emplace_back(kUrlTerm);
    last = it->position() + it->length();
  }
  split_words(std::string_view(owned).substr(last), &terms);
  return terms;
}

TfidfModel TfidfModel::fit(std::span<const LabeledSentence> corpus) {
  if (corpus.empty()) {
    throw ClassifyError(ClassifyError::Kind::kEmptyCorpus,
                        "cannot fit tf-idf on an empty corpus");
  }
  std::map<std::string, int> df;
  for (const LabeledSentence &s : corpus) {
    auto terms = tokenize_terms(s.text);
    std::set<std::string> unique(terms.begin(), terms.end());
    for (const auto &t : unique) ++df[t];
  }
  TfidfModel model;
  model.doc_count_ = static_cast<int>(corpus.size());
  const double n = static_cast<double>(corpus.size());
  int column = 0;
  for (const auto &[term, count] : df) {
    model.vocabulary_[term] = column++;
    model.idf_.push_back(std::log((1.0 + n) / (1.0 + count)) + 1.0);
  }
  return model;
}

TfidfModel TfidfModel::from_parts(std::map<std::string, int> vocabulary,
                                  std::vector<double> idf, int doc_count) {
  std::vector<bool> seen(idf.size(), false);
  for (const auto &[term, col] : vocabulary) {
    if (col < 0 || col >= static_cast<int>(idf.size()) || seen[col]) {
      throw ClassifyError(ClassifyError::Kind::kFormat,
                          "vocabulary index for '" + term +
                              "' is not a dense column");
    }
    seen[col] = true;
  }
  if (vocabulary.size() != idf.size()) {
    throw ClassifyError(ClassifyError::Kind::kFormat,
                        "vocabulary and idf sizes differ");
  }
  for (double v : idf) {
    if (!(v >= 0.0)) {
      throw ClassifyError(ClassifyError::Kind::kFormat, "negative idf weight");
    }
  }
  TfidfModel model;
  model.vocabulary_ = std::move(vocabulary);
  model.idf_ = std::move(idf);
  model.doc_count_ = doc_count;
  return model;
}

std::optional<int> TfidfModel::column(const std::string &term) const {
  auto it = vocabulary_.find(term);
  if (it == vocabulary_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfidfModel::transform(std::string_view text) const {
  std::map<int, double> counts;
  for (const auto &term : tokenize_terms(text)) {
    if (auto col = column(term)) counts[*col] += 1.0;
  }
  SparseVector x;
  double norm2 = 0.0;
  for (const auto &[col, tf] : counts) {
    double v = tf * idf_[col];
    x.emplace_back(col, v);
    norm2 += v * v;
  }
  if (norm2 > 0.0) {
    double scale = 1.0 / std::sqrt(norm2);
    for (auto &entry : x) entry.second *= scale;
  }
  return x;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double LogRegModel::score(const SparseVector &x) const {
  double z = bias;
  for (const auto &[col, v] : x) {
    if (col < static_cast<int>(weights.size())) z += weights[col] * v;
  }
  return z;
}

namespace {

// -log sigmoid(z) without overflow.
double softplus_neg(double z) {
  return std::log1p(std::exp(-std::abs(z))) + std::max(-z, 0.0);
}

void check_trainable(std::span<const LabeledSentence> corpus) {
  if (corpus.empty()) {
    throw ClassifyError(ClassifyError::Kind::kEmptyCorpus,
                        "cannot train on an empty corpus");
  }
  bool pos = false, neg = false;
  for (const auto &s : corpus) (s.label ? pos : neg) = true;
  if (!pos || !neg) {
    throw ClassifyError(ClassifyError::Kind::kSingleClassCorpus,
                        "training corpus contains only one class");
  }
}

}  // namespace

double logreg_loss(const LogRegModel &model,
                   const std::vector<SparseVector> &features,
                   const std::vector<bool> &labels) {
  double loss = 0.0;
  for (size_t i = 0; i < features.size(); ++i) {
    double z = model.score(features[i]);
    loss += labels[i] ? softplus_neg(z) : softplus_neg(-z);
  }
  if (!features.empty()) loss /= static_cast<double>(features.size());
  double w2 = 0.0;
  for (double w : model.weights) w2 += w * w;
  return loss + 0.5 * model.hyper.l2 * w2;
}

LogRegModel train_logreg(std::span<const LabeledSentence> corpus,
                         const TfidfModel &tfidf, const LogRegHyper &hyper,
                         std::vector<double> *loss_trace) {
  check_trainable(corpus);
  std::vector<SparseVector> features;
  std::vector<bool> labels;
  features.reserve(corpus.size());
  for (const auto &s : corpus) {
    features.push_back(tfidf.transform(s.text));
    labels.push_back(s.label);
  }

  LogRegModel model;
  model.hyper = hyper;
  model.weights.assign(tfidf.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.size());
  std::vector<double> grad(model.weights.size());

  if (loss_trace) loss_trace->clear();
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    if (loss_trace) loss_trace->push_back(logreg_loss(model, features, labels));
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (size_t i = 0; i < features.size(); ++i) {
      double residual =
          sigmoid(model.score(features[i])) - (labels[i] ? 1.0 : 0.0);
      for (const auto &[col, v] : features[i]) grad[col] += residual * v;
      grad_bias += residual;
    }
    for (size_t j = 0; j < grad.size(); ++j) {
      model.weights[j] -=
          hyper.learning_rate * (grad[j] * inv_n + hyper.l2 * model.weights[j]);
    }
    model.bias -= hyper.learning_rate * grad_bias * inv_n;
  }
  if (loss_trace) loss_trace->push_back(logreg_loss(model, features, labels));
  return model;
}

Prediction predict_relevance(const LogRegModel &model, const TfidfModel &tfidf,
                             std::string_view text) {
  Prediction p;
  p.probability = sigmoid(model.score(tfidf.transform(text)));
  p.relevant = p.probability >= model.threshold;
  return p;
}

F1Score evaluate_f1(const std::vector<bool> &predictions,
                    const std::vector<bool> &gold) {
  if (predictions.size() != gold.size()) {
    throw ClassifyError(ClassifyError::Kind::kLengthMismatch,
                        "predictions and gold differ in length (" +
                            std::to_string(predictions.size()) + " vs " +
                            std::to_string(gold.size()) + ")");
  }
  double tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] && gold[i]) ++tp;
    if (predictions[i] && !gold[i]) ++fp;
    if (!predictions[i] && gold[i]) ++fn;
  }
  F1Score s;
  s.precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
  s.recall = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
  s.f1 = (s.precision + s.recall) > 0
             ? 2 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

TextClassifier train_text_classifier(std::span<const LabeledSentence> corpus,
                                     const LogRegHyper &hyper) {
  check_trainable(corpus);
  TextClassifier model;
  model.tfidf = TfidfModel::fit(corpus);
  model.logreg = train_logreg(corpus, model.tfidf, hyper);
  return model;
}

}  // namespace procnet
