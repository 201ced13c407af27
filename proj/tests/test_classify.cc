#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "procnet/classify.h"
#include "support/support.h"

using namespace procnet;
using procnet::testing::fixture_sentence;
using procnet::testing::load_conllu_fixture;

TEST_CASE("vvimp baseline") {
  CHECK(vvimp_relevant(load_conllu_fixture("fig1.conllu")[0]));
  CHECK_FALSE(vvimp_relevant(fixture_sentence("misc.conllu", "descriptive")));
  CHECK_FALSE(vvimp_relevant(fixture_sentence("misc.conllu", "punct_only")));
  CHECK(vvimp_relevant(fixture_sentence("misc.conllu", "imperative_subject")));
  CHECK_FALSE(vvimp_relevant(fixture_sentence("misc.conllu", "modal_all")));
}

TEST_CASE("vvimp tag sets come from the config") {
  auto t = fixture_sentence("misc.conllu", "descriptive");
  RuleConfig c;
  c.imperative_xpos = {"VVFIN"};
  CHECK(vvimp_relevant(t, c));
  c = RuleConfig{};
  c.subject_deprels = {};
  CHECK(vvimp_relevant(t, c));
}

TEST_CASE("vvimp ignores surface forms") {
  std::mt19937_64 rng(3);
  std::vector<DepTree> trees = load_conllu_fixture("misc.conllu");
  for (int d = 0; d < 40; ++d) {
    for (auto &t : procnet::testing::random_document(rng, d).sentences) {
      trees.push_back(std::move(t));
    }
  }
  for (const DepTree &t : trees) {
    std::vector<Token> tokens = t.tokens();
    for (Token &tok : tokens) {
      tok.form = "x" + std::to_string(rng() % 1000);
      tok.lemma = "y";
    }
    DepTree scrambled(tokens, "", t.index(), t.sent_id());
    CHECK(vvimp_relevant(t) == vvimp_relevant(scrambled));
  }
}

TEST_CASE("tokenize_terms") {
  CHECK(tokenize_terms("Butter aufschäumen") ==
        std::vector<std::string>{"butter", "aufschäumen"});
  CHECK(tokenize_terms("Siehe https://a.example/x dazu") ==
        std::vector<std::string>{"siehe", "$URL", "dazu"});
  CHECK(tokenize_terms("").empty());
  CHECK(tokenize_terms("Mehr unter www.example.org.") ==
        std::vector<std::string>{"mehr", "unter", "$URL"});
  CHECK(tokenize_terms("Äpfel, 200 g!") ==
        std::vector<std::string>{"äpfel", "200", "g"});
}

TEST_CASE("tf-idf of a single document") {
  std::vector<LabeledSentence> corpus{{"d", "a a b", true}};
  TfidfModel m = TfidfModel::fit(corpus);
  REQUIRE(m.size() == 2);
  CHECK(m.idf()[*m.column("a")] == doctest::Approx(1.0));
  CHECK(m.idf()[*m.column("b")] == doctest::Approx(1.0));
  SparseVector v = m.transform("a a b");
  REQUIRE(v.size() == 2);
  std::map<int, double> dense(v.begin(), v.end());
  CHECK(dense[*m.column("a")] == doctest::Approx(2.0 / std::sqrt(5.0)));
  CHECK(dense[*m.column("b")] == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("tf-idf idf values") {
  std::vector<LabeledSentence> corpus{{"1", "x a", true},
                                      {"2", "x b", false},
                                      {"3", "x a c", true},
                                      {"4", "x", false}};
  TfidfModel m = TfidfModel::fit(corpus);
  CHECK(m.idf()[*m.column("x")] == doctest::Approx(1.0));
  CHECK(m.idf()[*m.column("a")] == doctest::Approx(std::log(5.0 / 3.0) + 1));
  CHECK(m.idf()[*m.column("c")] == doctest::Approx(std::log(5.0 / 2.0) + 1));
  CHECK_FALSE(m.column("unseen"));
  CHECK(m.transform("unseen words only").empty());
  CHECK(m.doc_count() == 4);
  CHECK_THROWS_AS(TfidfModel::fit({}), ClassifyError);
}

TEST_CASE("tf-idf vectors match a dense recomputation") {
  auto corpus = procnet::testing::synthetic_corpus(60, 5);
  TfidfModel m = TfidfModel::fit(corpus);
  // Dense oracle straight from the formula.
  std::map<std::string, int> df;
  for (const auto &s : corpus) {
    auto terms = tokenize_terms(s.text);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (const auto &t : terms) ++df[t];
  }
  CHECK(df.size() == m.size());
  const double n = static_cast<double>(corpus.size());
  for (const auto &s : corpus) {
    std::map<std::string, double> w;
    for (const auto &t : tokenize_terms(s.text)) w[t] += 1.0;
    double norm = 0;
    for (auto &[t, x] : w) {
      x *= std::log((1 + n) / (1 + df[t])) + 1;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    SparseVector v = m.transform(s.text);
    REQUIRE(v.size() == w.size());
    for (const auto &[col, x] : v) {
      std::string term;
      for (const auto &[t, c] : m.vocabulary()) {
        if (c == col) term = t;
      }
      CHECK(x == doctest::Approx(w[term] / norm));
    }
  }
}

TEST_CASE("vocabulary indices are dense") {
  TfidfModel m = TfidfModel::fit(procnet::testing::synthetic_corpus(40, 2));
  std::vector<int> cols;
  for (const auto &[t, c] : m.vocabulary()) cols.push_back(c);
  std::sort(cols.begin(), cols.end());
  for (size_t i = 0; i < cols.size(); ++i) CHECK(cols[i] == static_cast<int>(i));
  for (double idf : m.idf()) CHECK(idf >= 0.0);
}

TEST_CASE("toy corpus separates") {
  auto corpus = procnet::testing::toy_corpus();
  TextClassifier c = train_text_classifier(corpus, {});
  std::vector<bool> pred, gold;
  for (const auto &s : corpus) {
    pred.push_back(c.predict(s.text).relevant);
    gold.push_back(s.label);
  }
  CHECK(evaluate_f1(pred, gold).f1 == 1.0);
  CHECK(c.predict("ja").relevant);
  CHECK_FALSE(c.predict("nein").relevant);
}

TEST_CASE("zero epochs leave a zero model") {
  auto corpus = procnet::testing::toy_corpus();
  TfidfModel t = TfidfModel::fit(corpus);
  LogRegHyper h;
  h.epochs = 0;
  LogRegModel m = train_logreg(corpus, t, h);
  for (double w : m.weights) CHECK(w == 0.0);
  CHECK(m.bias == 0.0);
  CHECK(predict_relevance(m, t, "ja").probability == 0.5);
  CHECK(predict_relevance(m, t, "irgendwas").probability == 0.5);
}

TEST_CASE("single-class corpus is rejected") {
  std::vector<LabeledSentence> corpus{{"1", "ja", true}, {"2", "ja ja", true}};
  TfidfModel t = TfidfModel::fit(corpus);
  CHECK_THROWS_AS(train_logreg(corpus, t, {}), ClassifyError);
  try {
    train_logreg(corpus, t, {});
  } catch (const ClassifyError &e) {
    CHECK(e.kind() == ClassifyError::Kind::kSingleClassCorpus);
  }
}

TEST_CASE("empty text scores the bias") {
  auto corpus = procnet::testing::toy_corpus();
  TextClassifier c = train_text_classifier(corpus, {});
  CHECK(c.predict("").probability == doctest::Approx(sigmoid(c.logreg.bias)));
}

TEST_CASE("training loss never increases") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    auto corpus = procnet::testing::synthetic_corpus(80, seed);
    TfidfModel t = TfidfModel::fit(corpus);
    LogRegHyper h;
    h.epochs = 150;
    std::vector<double> trace;
    train_logreg(corpus, t, h, &trace);
    REQUIRE(trace.size() == 151);
    for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
  }
  auto toy = procnet::testing::toy_corpus();
  std::vector<double> trace;
  train_logreg(toy, TfidfModel::fit(toy), {}, &trace);
  for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
}

TEST_CASE("gradient matches finite differences") {
  auto corpus = procnet::testing::synthetic_corpus(30, 9);
  TfidfModel t = TfidfModel::fit(corpus);
  std::vector<SparseVector> x;
  std::vector<bool> y;
  for (const auto &s : corpus) {
    x.push_back(t.transform(s.text));
    y.push_back(s.label);
  }
  LogRegHyper h;
  h.epochs = 1;
  h.learning_rate = 1e-3;
  h.l2 = 0.01;
  // One step of size lr from zero moves along the negative gradient.
  LogRegModel zero;
  zero.weights.assign(t.size(), 0.0);
  zero.hyper = h;
  LogRegModel step = train_logreg(corpus, t, h);
  const double eps = 1e-6;
  for (int col : {0, 3, static_cast<int>(t.size()) - 1}) {
    LogRegModel plus = zero, minus = zero;
    plus.weights[col] += eps;
    minus.weights[col] -= eps;
    double g = (logreg_loss(plus, x, y) - logreg_loss(minus, x, y)) / (2 * eps);
    CHECK(step.weights[col] == doctest::Approx(-h.learning_rate * g).epsilon(1e-4));
  }
  LogRegModel plus = zero, minus = zero;
  plus.bias += eps;
  minus.bias -= eps;
  double g = (logreg_loss(plus, x, y) - logreg_loss(minus, x, y)) / (2 * eps);
  CHECK(step.bias == doctest::Approx(-h.learning_rate * g).epsilon(1e-4));
}

TEST_CASE("probability is in (0,1) and monotone in the score") {
  auto corpus = procnet::testing::synthetic_corpus(100, 4);
  TextClassifier c = train_text_classifier(corpus, {});
  std::vector<std::pair<double, double>> pts;
  for (const auto &s : procnet::testing::synthetic_corpus(100, 44)) {
    SparseVector x = c.tfidf.transform(s.text);
    Prediction p = c.predict(s.text);
    CHECK(p.probability > 0.0);
    CHECK(p.probability < 1.0);
    CHECK(p.relevant == (p.probability >= c.logreg.threshold));
    pts.emplace_back(c.logreg.score(x), p.probability);
  }
  std::sort(pts.begin(), pts.end());
  for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].second >= pts[i - 1].second);
  CHECK(sigmoid(-800) >= 0.0);
  CHECK(sigmoid(800) <= 1.0);
  CHECK(sigmoid(0) == 0.5);
}

TEST_CASE("evaluate_f1") {
  std::vector<bool> gold{true, false, true, false};
  CHECK(evaluate_f1(gold, gold).f1 == 1.0);
  F1Score none = evaluate_f1({false, false, false, false}, gold);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  F1Score f = evaluate_f1({true, true, true, false, false},
                          {true, true, false, true, false});
  CHECK(f.precision == doctest::Approx(2.0 / 3));
  CHECK(f.recall == doctest::Approx(2.0 / 3));
  CHECK(f.f1 == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(evaluate_f1({true}, {true, false}), ClassifyError);
  CHECK(evaluate_f1({}, {}).f1 == 0.0);
}

TEST_CASE("evaluate_f1 is invariant under joint permutation") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    size_t n = 1 + rng() % 30;
    std::vector<std::pair<bool, bool>> rows;
    for (size_t i = 0; i < n; ++i) rows.emplace_back(rng() % 2, rng() % 2);
    auto score = [&] {
      std::vector<bool> p, g;
      for (auto [a, b] : rows) {
        p.push_back(a);
        g.push_back(b);
      }
      return evaluate_f1(p, g);
    };
    F1Score before = score();
    std::shuffle(rows.begin(), rows.end(), rng);
    F1Score after = score();
    CHECK(before.precision == after.precision);
    CHECK(before.recall == after.recall);
    CHECK(before.f1 == after.f1);
  }
}

TEST_CASE("labeled JSONL") {
  std::istringstream in(
      "{\"id\": \"a\", \"text\": \"Butter schmelzen.\", \"label\": 1}\n"
      "\n"
      "{\"id\": \"b\", \"text\": \"Lecker!\", \"label\": false}\n");
  auto rows = read_labeled_jsonl(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label);
  CHECK_FALSE(rows[1].label);
  std::ostringstream out;
  write_labeled_jsonl(out, rows);
  std::istringstream back(out.str());
  auto again = read_labeled_jsonl(back);
  CHECK(again[1].text == "Lecker!");

  std::istringstream missing("{\"id\": \"a\", \"text\": \"x\", \"label\": 1}\n"
                             "{\"id\": \"b\", \"text\": \"y\"}\n");
  try {
    read_labeled_jsonl(missing);
    FAIL("no error");
  } catch (const ClassifyError &e) {
    CHECK(e.kind() == ClassifyError::Kind::kFormat);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream broken("{not json\n");
  CHECK_THROWS_AS(read_labeled_jsonl(broken), ClassifyError);
}

TEST_CASE("external predictions") {
  std::istringstream in("{\"id\": \"s1\", \"relevant\": 1}\n"
                        "{\"id\": \"s2\", \"relevant\": 0}\n");
  auto p = read_external_predictions(in);
  CHECK(p.at("s1"));
  CHECK_FALSE(p.at("s2"));
  std::istringstream bad("{\"id\": \"s1\"}\n");
  CHECK_THROWS_AS(read_external_predictions(bad), ClassifyError);
}

TEST_CASE("model files round-trip and are byte-stable") {
  auto corpus = procnet::testing::synthetic_corpus(120, 8);
  TextClassifier a = train_text_classifier(corpus, {});
  TextClassifier b = train_text_classifier(corpus, {});
  std::string sa = save_classifier(a);
  CHECK(sa == save_classifier(b));
  TextClassifier back = load_classifier(sa);
  CHECK(save_classifier(back) == sa);
  for (const auto &s : procnet::testing::synthetic_corpus(30, 80)) {
    CHECK(back.predict(s.text).probability == a.predict(s.text).probability);
  }
  CHECK_THROWS_AS(load_classifier("{}"), ClassifyError);
  CHECK_THROWS_AS(load_classifier("not json"), ClassifyError);
}

TEST_CASE("synthetic corpus is balanced and seeded") {
  auto a = procnet::testing::synthetic_corpus(500, 21);
  auto b = procnet::testing::synthetic_corpus(500, 21);
  CHECK(a.size() == 500);
  size_t pos = std::count_if(a.begin(), a.end(), [](const auto &s) { return s.label; });
  CHECK(pos == 250);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].text == b[i].text);
}
