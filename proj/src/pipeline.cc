#include "procnet/pipeline.h"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace procnet {

using Json = nlohmann::ordered_json;

RelevanceGate RelevanceGate::open() { return RelevanceGate(); }

RelevanceGate RelevanceGate::rule(RuleConfig config) {
  RelevanceGate g;
  g.kind_ = ClassifierKind::kRule;
  g.rule_ = std::move(config);
  return g;
}

RelevanceGate RelevanceGate::logreg(TextClassifier model, double threshold) {
  RelevanceGate g;
  g.kind_ = ClassifierKind::kLogreg;
  if (threshold >= 0.0) model.logreg.threshold = threshold;
  g.model_ = std::move(model);
  return g;
}

RelevanceGate RelevanceGate::external(std::map<std::string, bool> predictions) {
  RelevanceGate g;
  g.kind_ = ClassifierKind::kExternal;
  g.predictions_ = std::move(predictions);
  return g;
}

RelevanceGate RelevanceGate::from_config(const PipelineConfig &config) {
  check_config(config);
  switch (config.classifier) {
    case ClassifierKind::kNone:
      return open();
    case ClassifierKind::kRule:
      return rule(config.rule);
    case ClassifierKind::kLogreg: {
      std::ifstream in(config.model_path, std::ios::binary);
      if (!in) throw ConfigError(0, "cannot read model file " + config.model_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      return logreg(load_classifier(buf.str()), config.threshold);
    }
    case ClassifierKind::kExternal: {
      std::ifstream in(config.predictions_path, std::ios::binary);
      if (!in) {
        throw ConfigError(0, "cannot read predictions file " + config.predictions_path);
      }
      return external(read_external_predictions(in));
    }
  }
  return open();
}

RelevanceGate::Decision RelevanceGate::decide(const DepTree &tree,
                                              const std::string &document) const {
  if (kind_ == ClassifierKind::kRule) {
    Decision d;
    d.relevant = vvimp_relevant(tree, rule_);
    return d;
  }
  return decide_text(tree.text(), tree.key(), document);
}

RelevanceGate::Decision RelevanceGate::decide_text(
    std::string_view text, const std::string &id,
    const std::string &document) const {
  Decision d;
  switch (kind_) {
    case ClassifierKind::kNone:
      break;
    case ClassifierKind::kRule:
      throw ClassifyError(ClassifyError::Kind::kFormat,
                          "the rule classifier needs parsed sentences");
    case ClassifierKind::kLogreg: {
      Prediction p = model_->predict(text);
      d.relevant = p.relevant;
      d.probability = p.probability;
      break;
    }
    case ClassifierKind::kExternal: {
      auto it = predictions_.find(document + ":" + id);
      if (it == predictions_.end()) it = predictions_.find(id);
      if (it == predictions_.end()) {
        throw ClassifyError(ClassifyError::Kind::kFormat,
                            "no external prediction for sentence " + id +
                                (document.empty() ? "" : " of " + document));
      }
      d.relevant = it->second;
      break;
    }
  }
  return d;
}

DocumentResult process_document(const Document &document,
                                const PipelineConfig &config,
                                const RelevanceGate &gate) {
  DocumentResult r;
  r.name = document.name;
  std::vector<Activity> previous;
  for (const DepTree &tree : document.sentences) {
    SentenceRecord rec;
    rec.index = tree.index();
    rec.key = tree.key();
    auto decision = gate.decide(tree, document.name);
    rec.relevant = decision.relevant;
    rec.probability = decision.probability;
    if (!rec.relevant) {
      r.sentences.push_back(std::move(rec));
      continue;
    }
    auto acts = extract_activities(tree, config.extraction);
    if (config.extraction.use_vvimp_heuristic) {
      acts = filter_subordinate(std::move(acts), tree, config.extraction);
    }
    rec.activity_count = acts.size();
    r.sentences.push_back(std::move(rec));
    if (acts.empty()) continue;

    SentencePlan plan;
    plan.sentence_index = tree.index();
    plan.activities = acts;
    plan.relations = intra_sentence_relations(tree, acts, previous, config.ordering,
                                              &r.warnings);
    for (auto &rel : inter_sentence_relations(tree, acts, previous, config.ordering)) {
      plan.relations.push_back(std::move(rel));
    }
    sort_relations(&plan.relations);
    plan.parallel = parallel_marker(tree, acts, config.ordering);
    plan.before = before_marker(tree, acts, config.ordering);

    r.activities.insert(r.activities.end(), acts.begin(), acts.end());
    r.relations.insert(r.relations.end(), plan.relations.begin(), plan.relations.end());

    std::vector<Activity> usable;
    for (const auto &a : acts) {
      if (!a.negated || config.net.include_negated) usable.push_back(a);
    }
    // A sentence the net skips leaves the predecessor in place.
    if (!usable.empty()) previous = std::move(usable);
    r.plans.push_back(std::move(plan));
  }
  sort_relations(&r.relations);

  try {
    r.net = generate_workflow_net(r.plans, config.net);
  } catch (const PetriError &e) {
    r.empty_document = e.kind() == PetriError::Kind::kEmptyDocument;
    r.error = e.what();
  }
  return r;
}

namespace {

Json activity_to_json(const Activity &a) {
  Json j;
  j["id"] = a.id;
  j["sentence_index"] = a.sentence_index;
  j["verbs"] = a.verbs;
  j["subjects"] = a.subjects;
  j["objects"] = a.objects;
  j["modifiers"] = a.modifiers;
  j["negated"] = a.negated;
  j["quantifier"] = quantifier_name(a.quantifier);
  j["lemmas"] = a.lemmas;
  j["label"] = activity_label(a);
  return j;
}

Json relation_to_json(const Relation &r) {
  Json j;
  j["kind"] = relation_kind_name(r.kind);
  j["left"] = r.left;
  j["right"] = r.right;
  j["scope"] = relation_scope_name(r.scope);
  return j;
}

}  // namespace

std::string activity_json(const Activity &activity) {
  return activity_to_json(activity).dump();
}

std::string document_json(const DocumentResult &result) {
  Json j;
  j["document"] = result.name;
  Json sentences = Json::array();
  for (const auto &s : result.sentences) {
    Json e;
    e["index"] = s.index;
    e["id"] = s.key;
    e["relevant"] = s.relevant;
    if (s.probability) e["probability"] = *s.probability;
    e["activities"] = s.activity_count;
    sentences.push_back(std::move(e));
  }
  j["sentences"] = std::move(sentences);
  Json acts = Json::array();
  for (const auto &a : result.activities) acts.push_back(activity_to_json(a));
  j["activities"] = std::move(acts);
  Json rels = Json::array();
  for (const auto &r : result.relations) rels.push_back(relation_to_json(r));
  j["relations"] = std::move(rels);
  j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

std::string corpus_report_json(const CorpusReport &report) {
  Json j;
  j["mean"] = report.mean;
  Json pairs = Json::array();
  for (const auto &p : report.pairs) {
    Json e;
    e["left"] = p.left_name;
    e["right"] = p.right_name;
    e["score"] = p.report.score;
    e["shared_labels"] = p.report.shared_labels;
    e["only_left"] = p.report.only_left;
    e["only_right"] = p.report.only_right;
    e["pair_agreements"] = p.report.pair_agreements;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  return j.dump(2) + "\n";
}

void parallel_for(size_t n, int jobs, const std::function<void(size_t)> &fn) {
  size_t workers = std::min(n, static_cast<size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  size_t failure_index = n;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        {
          std::lock_guard lock(failure_mutex);
          if (i > failure_index) return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (i < failure_index) {
            failure_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto &t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace procnet
