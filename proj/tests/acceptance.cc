// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "procnet/classify.h"
#include "procnet/cli.h"
#include "procnet/extract.h"
#include "procnet/petri.h"
#include "procnet/pipeline.h"
#include "procnet/similarity.h"
#include "support/support.h"

using namespace procnet;
using namespace procnet::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
using Strings = std::vector<std::string>;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string &what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

int failures = 0;

void report(const std::string &name, const std::function<Outcome()> &check) {
  auto start = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception &e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(3);
  line << (o.pass ? "PASS " : "FAIL ") << name << " (" << secs << " s)";
  if (!o.detail.empty()) line << ": " << o.detail;
  std::cout << line.str() << std::endl;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << std::fixed << v;
  return s.str();
}

Activity activity(const std::string &id, const std::string &verb) {
  Activity a;
  a.id = id;
  a.verbs = {verb};
  a.lemmas = {verb};
  return a;
}

std::vector<Document> fuzz_documents() {
  std::mt19937_64 rng(20240601);
  FuzzOptions options;
  options.min_sentences = 1;
  options.max_sentences = 10;
  options.max_activities = 3;
  std::vector<Document> docs;
  for (int d = 0; d < 1000; ++d) docs.push_back(random_document(rng, d, options));
  return docs;
}

std::vector<WorkflowNet> fuzz_nets;

Outcome worked_example() {
  Outcome o;
  auto start = Clock::now();
  auto acts = extract_activities(load_conllu_fixture("fig1.conllu").at(0));
  double secs = seconds_since(start);
  o.require(acts.size() == 1, "expected one activity, got " + std::to_string(acts.size()));
  if (acts.size() == 1) {
    const Activity &a = acts[0];
    o.require(a.verbs == Strings{"aufschäumen", "lassen"}, "verbs differ");
    o.require(a.subjects.empty(), "subjects not empty");
    o.require(a.objects == Strings{"Butter"}, "objects differ");
    o.require(a.modifiers == Strings{"in einer heißen Pfanne"}, "modifiers differ");
  }
  o.require(secs < 1.0, "took " + num(secs) + " s");
  if (o.pass) o.detail = "v={aufschäumen, lassen} s={} o={Butter} m={in einer heißen Pfanne}";
  return o;
}

Outcome subordinate_filtering() {
  Outcome o;
  DepTree t = load_conllu_fixture("two_clause.conllu").at(0);
  auto acts = extract_activities(t);
  o.require(acts.size() == 2, "expected two extracted activities");
  if (acts.size() != 2) return o;
  const Activity &a2 = acts[1];
  o.require(a2.verbs == Strings{"schmeckt"} && a2.subjects == Strings{"das"} &&
                a2.objects.empty() && a2.modifiers == Strings{"am besten"},
            "a2 fields differ");
  ExtractionConfig on;
  ExtractionConfig off;
  off.use_vvimp_heuristic = false;
  auto kept = filter_subordinate(acts, t, on);
  o.require(kept.size() == 1 && kept[0].verbs == Strings{"aufschäumen", "lassen"},
            "with the heuristic: expected a1 only");
  auto all = filter_subordinate(acts, t, off);
  o.require(all.size() == 2, "without the heuristic: expected a1 and a2");
  if (o.pass) o.detail = "on keeps {a1}, off keeps {a1, a2}";
  return o;
}

Outcome pattern_oracle() {
  Outcome o;
  Activity a1 = activity("s0a0", "a1");
  Activity a2 = activity("s0a1", "a2");
  Activity b2 = activity("s1a0", "a2");

  SentencePlan first{0, {a1}, {}, false, false};
  SentencePlan second{1, {b2}, {}, false, false};
  WorkflowNet seq = generate_workflow_net({first, second});
  WorkflowNet par =
      sub_net_for_sentence({a1, a2}, {{RelationKind::kAnd, a1.id, a2.id}}).net;
  WorkflowNet alt =
      sub_net_for_sentence({a1, a2}, {{RelationKind::kOr, a1.id, a2.id}}).net;

  struct Case {
    const char *name;
    const WorkflowNet &net;
    std::set<Trace> expected;
    FootprintRelation relation;
  };
  std::vector<Case> cases = {
      {"sequence", seq, {{"a1", "a2"}}, FootprintRelation::kCausal},
      {"AND", par, {{"a1", "a2"}, {"a2", "a1"}}, FootprintRelation::kConcurrent},
      {"OR", alt, {{"a1"}, {"a2"}}, FootprintRelation::kExclusive},
  };
  for (const Case &c : cases) {
    o.require(validate(c.net).empty(), std::string(c.name) + " net is invalid");
    o.require(traces(c.net) == c.expected, std::string(c.name) + " traces differ");
    o.require(causal_footprint(c.net).at("a1", "a2") == c.relation,
              std::string(c.name) + " footprint differs");
  }
  if (o.pass) o.detail = "sequence CAUSAL, AND CONCURRENT, OR EXCLUSIVE";
  return o;
}

Outcome soundness() {
  Outcome o;
  auto start = Clock::now();
  auto docs = fuzz_documents();
  PipelineConfig config;
  config.classifier = ClassifierKind::kNone;
  RelevanceGate gate = RelevanceGate::open();
  int bad = 0;
  int empty = 0;
  std::string first_violation;
  for (const Document &d : docs) {
    DocumentResult r = process_document(d, config, gate);
    if (!r.net) {
      if (r.empty_document) {
        ++empty;
      } else {
        ++bad;
        if (first_violation.empty()) first_violation = d.name + ": " + r.error;
      }
      continue;
    }
    auto violations = validate(*r.net);
    if (!violations.empty()) {
      ++bad;
      if (first_violation.empty()) first_violation = d.name + ": " + violations[0];
    }
    fuzz_nets.push_back(std::move(*r.net));
  }
  double secs = seconds_since(start);
  o.require(bad == 0, std::to_string(bad) + " failures, first " + first_violation);
  o.require(secs < 60.0, "took " + num(secs) + " s");
  if (o.pass) {
    o.detail = std::to_string(docs.size()) + " documents, " +
               std::to_string(fuzz_nets.size()) + " nets valid, " +
               std::to_string(empty) + " without activities";
  }
  return o;
}

Outcome similarity_axioms() {
  Outcome o;
  o.require(!fuzz_nets.empty(), "no fuzz nets");
  std::vector<CausalFootprint> fps;
  for (const auto &n : fuzz_nets) fps.push_back(causal_footprint(n));
  int failures_here = 0;
  size_t n = fps.size();
  for (size_t i = 0; i < n; ++i) {
    bool ok = cfp_similarity(fps[i], fps[i]).score == 1.0;
    for (size_t j : {(i + 1) % n, (i * 7 + 3) % n}) {
      double lr = cfp_similarity(fps[i], fps[j]).score;
      double rl = cfp_similarity(fps[j], fps[i]).score;
      ok = ok && std::abs(lr - rl) <= 1e-12 && lr >= 0.0 && lr <= 1.0;
    }
    auto disjoint = causal_footprint(relabel(fuzz_nets[(i + 1) % n], "other:"));
    ok = ok && cfp_similarity(fps[i], disjoint).score == 0.0;
    if (!ok) ++failures_here;
  }
  o.require(failures_here == 0, std::to_string(failures_here) + " nets violate an axiom");
  if (o.pass) o.detail = std::to_string(n) + " nets, 0 failures";
  return o;
}

Outcome pnml_round_trip() {
  Outcome o;
  o.require(!fuzz_nets.empty(), "no fuzz nets");
  int bad = 0;
  for (size_t i = 0; i < fuzz_nets.size(); ++i) {
    const WorkflowNet &n = fuzz_nets[i];
    if (!isomorphic(parse_pnml(to_pnml(n, "n" + std::to_string(i))), n)) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " nets change");
  if (o.pass) o.detail = std::to_string(fuzz_nets.size()) + " nets, 0 failures";
  return o;
}

F1Score held_out_f1(const std::vector<LabeledSentence> &corpus, uint64_t seed,
                    size_t *train_size, size_t *test_size) {
  std::vector<LabeledSentence> train, held;
  for (const auto &s : corpus) {
    (split_of(s.id, seed) == Split::kTrain ? train : held).push_back(s);
  }
  LogRegHyper hyper;
  hyper.seed = seed;
  TextClassifier model = train_text_classifier(train, hyper);
  std::vector<bool> pred, gold;
  for (const auto &s : held) {
    pred.push_back(model.predict(s.text).relevant);
    gold.push_back(s.label);
  }
  *train_size = train.size();
  *test_size = held.size();
  return evaluate_f1(pred, gold);
}

Outcome classifier_sanity() {
  Outcome o;
  auto toy = toy_corpus();
  TextClassifier toy_model = train_text_classifier(toy, LogRegHyper{});
  std::vector<bool> pred, gold;
  for (const auto &s : toy) {
    pred.push_back(toy_model.predict(s.text).relevant);
    gold.push_back(s.label);
  }
  double toy_f1 = evaluate_f1(pred, gold).f1;
  o.require(toy_f1 == 1.0, "toy F1 " + num(toy_f1));

  size_t train = 0, test = 0;
  F1Score syn = held_out_f1(synthetic_corpus(500, 2024), 13, &train, &test);
  o.require(syn.f1 >= 0.95, "synthetic held-out F1 " + num(syn.f1));
  if (o.pass) {
    o.detail = "toy F1 " + num(toy_f1) + ", synthetic held-out F1 " + num(syn.f1) +
               " (train " + std::to_string(train) + ", held out " +
               std::to_string(test) + ")";
  }
  return o;
}

void labeled_corpus() {
  const char *path = std::getenv("PROCNET_LABELED_CORPUS");
  if (path == nullptr || *path == '\0') {
    std::cout << "SKIP labeled-corpus classifier F1 >= 0.85: "
                 "PROCNET_LABELED_CORPUS not set\n";
    return;
  }
  report("labeled-corpus classifier F1 >= 0.85", [&] {
    Outcome o;
    std::ifstream in(path);
    if (!in) throw std::runtime_error(std::string("cannot read ") + path);
    auto corpus = read_labeled_jsonl(in);
    size_t train = 0, test = 0;
    F1Score f = held_out_f1(corpus, 13, &train, &test);
    o.require(f.f1 >= 0.85, "held-out F1 " + num(f.f1));
    o.detail = "held-out F1 " + num(f.f1) + " (train " + std::to_string(train) +
               ", held out " + std::to_string(test) + ")";
    return o;
  });
}

Outcome gating_effect() {
  Outcome o;
  auto start = Clock::now();
  fs::path root = fs::path(PROCNET_FIXTURES) / "gating";
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(root / "docs")) {
    if (e.path().extension() == ".conllu") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  o.require(files.size() == 10, "expected 10 documents");

  TextClassifier model = train_text_classifier(synthetic_corpus(500, 2024), LogRegHyper{});
  PipelineConfig config;
  auto mean_for = [&](const RelevanceGate &gate) {
    std::vector<NetPair> pairs;
    for (const auto &f : files) {
      Document d;
      d.name = f.stem().string();
      std::ifstream in(f);
      d.sentences = parse_conllu(in);
      DocumentResult r = process_document(d, config, gate);
      if (!r.net) throw std::runtime_error(d.name + ": " + r.error);
      std::ifstream gold_in(root / "gold" / (d.name + ".pnml"));
      std::stringstream gold;
      gold << gold_in.rdbuf();
      pairs.push_back({d.name, d.name, *r.net, parse_pnml(gold.str())});
    }
    return compare_corpus(pairs).mean;
  };
  double ungated = mean_for(RelevanceGate::open());
  double logreg = mean_for(RelevanceGate::logreg(model));
  double rule = mean_for(RelevanceGate::rule());
  double secs = seconds_since(start);
  o.require(logreg > ungated, "logreg-gated " + num(logreg) + " <= ungated " + num(ungated));
  o.require(rule > ungated, "rule-gated " + num(rule) + " <= ungated " + num(ungated));
  o.require(secs < 30.0, "took " + num(secs) + " s");
  if (o.pass) {
    o.detail = "mean CFP-Sim logreg-gated " + num(logreg) + ", rule-gated " + num(rule) +
               ", ungated " + num(ungated);
  }
  return o;
}

}  // namespace

int main() {
  report("worked-example extraction", worked_example);
  report("subordinate-clause filtering", subordinate_filtering);
  report("pattern trace and footprint oracle", pattern_oracle);
  report("net soundness fuzz", soundness);
  report("similarity axioms", similarity_axioms);
  report("PNML round trip", pnml_round_trip);
  report("classifier sanity", classifier_sanity);
  labeled_corpus();
  report("pipeline gating effect", gating_effect);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
