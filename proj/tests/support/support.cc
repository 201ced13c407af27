#include "support.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace procnet::testing {

std::string fixture_path(const std::string &name) {
  return std::string(PROCNET_FIXTURES) + "/" + name;
}

std::string read_fixture(const std::string &name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<DepTree> load_conllu_fixture(const std::string &name) {
  return parse_conllu(read_fixture(name));
}

DepTree fixture_sentence(const std::string &file, const std::string &sent_id) {
  for (auto &t : load_conllu_fixture(file)) {
    if (t.sent_id() == sent_id) return t;
  }
  throw std::runtime_error("no sentence " + sent_id + " in " + file);
}

std::vector<LabeledSentence> toy_corpus() {
  std::vector<LabeledSentence> out;
  for (int i = 0; i < 10; ++i) {
    out.push_back({"ja" + std::to_string(i), "ja", true});
    out.push_back({"nein" + std::to_string(i), "nein", false});
  }
  return out;
}

namespace {

template <typename T>
const T &pick(std::mt19937_64 &rng, const std::vector<T> &items) {
  return items[std::uniform_int_distribution<size_t>(0, items.size() - 1)(rng)];
}

bool coin(std::mt19937_64 &rng, double p) {
  return std::bernoulli_distribution(p)(rng);
}

struct Noun {
  std::string article;    // nominative/accusative plural or feminine
  std::string accusative; // article in the accusative
  std::string form;
};

const std::vector<Noun> kNouns = {
    {"Die", "die", "Zwiebeln"},  {"Die", "die", "Kartoffeln"},
    {"Der", "den", "Teig"},      {"Die", "die", "Sauce"},
    {"Die", "die", "Butter"},    {"Der", "den", "Speck"},
    {"Die", "die", "Nudeln"},    {"Das", "das", "Fleisch"},
    {"Die", "die", "Möhren"},    {"Der", "den", "Knoblauch"},
    {"Die", "die", "Suppe"},     {"Das", "das", "Gemüse"},
    {"Die", "die", "Sahne"},     {"Der", "den", "Reis"},
};

const std::vector<std::string> kInfinitives = {
    "würfeln", "schneiden", "kochen",  "anbraten", "rühren",   "pürieren",
    "schälen", "waschen",   "backen",  "abgießen", "würzen",   "hacken",
    "dünsten", "reiben",    "mischen", "kneten",   "braten",   "erhitzen"};

const std::vector<std::string> kManner = {
    "fein", "grob", "kurz", "gut", "langsam", "vorsichtig", "kräftig",
    "sorgfältig", "gleichmäßig", "scharf"};

const std::vector<std::string> kTimes = {
    "zehn Minuten", "eine Stunde", "kurz", "fünf Minuten", "über Nacht",
    "zwei Stunden"};

const std::vector<std::string> kImperatives = {
    "Schneiden", "Kochen", "Rühren", "Geben", "Würzen", "Schälen",
    "Waschen", "Braten", "Mischen", "Erhitzen"};

const std::vector<std::string> kFiniteDescriptions = {
    "schmeckt", "ist", "wird", "bleibt", "war", "duftet", "gelingt", "passt"};

const std::vector<std::string> kAdjectives = {
    "köstlich", "lecker", "saftig", "zart", "würzig", "knusprig",
    "cremig", "schön", "besonders gut", "herrlich"};

const std::vector<std::string> kPeople = {
    "Oma", "Mutter", "Familie", "Freundin", "Tante", "Nachbarin"};

const std::vector<std::string> kPast = {
    "hat", "mochte", "liebte", "kochte", "machte", "bereitete"};

const std::vector<std::string> kContainers = {
    "einer Pfanne", "einem Topf", "einer Schüssel", "dem Ofen",
    "einer Auflaufform"};

std::string relevant_sentence(std::mt19937_64 &rng) {
  const Noun &n = pick(rng, kNouns);
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
      return n.article + " " + n.form + " " + pick(rng, kManner) + " " +
             pick(rng, kInfinitives) + ".";
    case 1:
      return pick(rng, kImperatives) + " Sie " + n.accusative + " " + n.form +
             " " + pick(rng, kManner) + ".";
    case 2:
      return n.article + " " + n.form + " in " + pick(rng, kContainers) + " " +
             pick(rng, kInfinitives) + ".";
    case 3:
      return n.article + " " + n.form + " " + pick(rng, kTimes) + " " +
             pick(rng, kInfinitives) + " lassen.";
    default:
      return "Anschließend " + n.accusative + " " + n.form + " " +
             pick(rng, kInfinitives) + " und " + pick(rng, kInfinitives) + ".";
  }
}

std::string irrelevant_sentence(std::mt19937_64 &rng) {
  const Noun &n = pick(rng, kNouns);
  switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
      return n.article + " " + n.form + " " + pick(rng, kFiniteDescriptions) +
             " " + pick(rng, kAdjectives) + ".";
    case 1:
      return "Meine " + pick(rng, kPeople) + " " + pick(rng, kPast) + " " +
             n.accusative + " " + n.form + " immer " + pick(rng, kAdjectives) +
             ".";
    case 2:
      return "Ich finde, " + n.accusative + " " + n.form + " " +
             pick(rng, kFiniteDescriptions) + " so am " + "besten.";
    case 3:
      return "Das Rezept " + pick(rng, kFiniteDescriptions) + " auch mit " +
             n.form + " " + pick(rng, kAdjectives) + ".";
    default:
      return pick(rng, std::vector<std::string>{
                 "Guten Appetit!", "Viel Spaß beim Nachkochen!",
                 "Dazu passt ein frischer Salat.", "Das Gericht ist schnell gemacht.",
                 "Mehr Rezepte unter https://example.org/rezepte.",
                 "Es schmeckt auch kalt sehr gut."});
  }
}

}  // namespace

std::vector<LabeledSentence> synthetic_corpus(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledSentence> out;
  for (size_t i = 0; i < n; ++i) {
    bool relevant = i % 2 == 0;
    out.push_back({"syn" + std::to_string(i),
                   relevant ? relevant_sentence(rng) : irrelevant_sentence(rng),
                   relevant});
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

int TreeBuilder::add(const std::string &form, const std::string &lemma,
                     const std::string &upos, const std::string &xpos, int head,
                     const std::string &deprel) {
  Token t;
  t.id = size() + 1;
  t.form = form;
  t.lemma = lemma;
  t.upos = upos;
  t.xpos = xpos;
  t.head = head;
  t.deprel = deprel;
  tokens_.push_back(std::move(t));
  return tokens_.back().id;
}

void TreeBuilder::attach(int id, int head, const std::string &deprel) {
  tokens_.at(id - 1).head = head;
  tokens_.at(id - 1).deprel = deprel;
}

DepTree TreeBuilder::build(int index, const std::string &sent_id) const {
  return DepTree(tokens_, "", index, sent_id);
}

namespace {

// One clause: [adverb] [det noun] [nicht] verb, or with a modal
// "Man kann [det noun] verb". Returns the id of the clause's top token.
struct ClausePlan {
  std::string adverb;  // lemma, empty for none
  bool exists = false;
  bool negated = false;
  bool modal = false;
  bool object = true;
};

int add_clause(TreeBuilder &b, std::mt19937_64 &rng, const ClausePlan &plan) {
  std::vector<std::pair<int, std::string>> attach_to_verb;
  int modal = 0;
  if (plan.modal) {
    int man = b.add("man", "man", "PRON", "PIS", 0, "sb");
    modal = b.add("kann", "können", "AUX", "VMFIN", 0, "ROOT");
    b.attach(man, modal, "sb");
  }
  if (!plan.adverb.empty()) {
    attach_to_verb.emplace_back(
        b.add(plan.adverb, plan.adverb, "ADV", "ADV", 0, "mo"), "mo");
  }
  if (plan.exists) {
    attach_to_verb.emplace_back(
        b.add("eventuell", "eventuell", "ADV", "ADV", 0, "mo"), "mo");
  }
  if (plan.object) {
    const Noun &n = pick(rng, kNouns);
    int det = b.add(n.accusative, "der", "DET", "ART", 0, "nk");
    int noun = b.add(n.form, n.form, "NOUN", "NN", 0, "oa");
    b.attach(det, noun, "nk");
    attach_to_verb.emplace_back(noun, "oa");
  }
  if (plan.negated) {
    attach_to_verb.emplace_back(
        b.add("nicht", "nicht", "PART", "PTKNEG", 0, "ng"), "ng");
  }
  const std::string &verb = pick(rng, kInfinitives);
  int v = b.add(verb, verb, "VERB", "VVINF", 0, "ROOT");
  for (const auto &[id, deprel] : attach_to_verb) b.attach(id, v, deprel);
  if (!modal) return v;
  b.attach(v, modal, "oc");
  return modal;
}

}  // namespace

Document random_document(std::mt19937_64 &rng, int number,
                         const FuzzOptions &options) {
  Document doc;
  doc.name = "fuzz" + std::to_string(number);
  int sentences = std::uniform_int_distribution<int>(options.min_sentences,
                                                     options.max_sentences)(rng);
  for (int s = 0; s < sentences; ++s) {
    int k = std::uniform_int_distribution<int>(0, options.max_activities)(rng);
    TreeBuilder b;
    if (k == 0) {
      if (coin(rng, 0.5)) {
        int guten = b.add("Guten", "gut", "ADJ", "ADJA", 0, "nk");
        int appetit = b.add("Appetit", "Appetit", "NOUN", "NN", 0, "ROOT");
        b.attach(guten, appetit, "nk");
        b.add("!", "--", "PUNCT", "$.", appetit, "punct");
      } else {
        int das = b.add("Das", "der", "PRON", "PDS", 0, "sb");
        int verb = b.add("schmeckt", "schmecken", "VERB", "VVFIN", 0, "ROOT");
        b.attach(das, verb, "sb");
        b.add("gut", "gut", "ADJ", "ADJD", verb, "mo");
        b.add(".", "--", "PUNCT", "$.", verb, "punct");
      }
      doc.sentences.push_back(b.build(s, doc.name + "s" + std::to_string(s)));
      continue;
    }
    int previous_top = 0, root = 0;
    for (int a = 0; a < k; ++a) {
      ClausePlan plan;
      double r = std::uniform_real_distribution<double>(0, 1)(rng);
      if (a == 0) {
        if (r < 0.15) {
          plan.adverb = "inzwischen";
        } else if (r < 0.3) {
          plan.adverb = "zuerst";
        }
      } else if (r < 0.15) {
        plan.adverb = "dabei";
      } else if (r < 0.3) {
        plan.adverb = "zuvor";
      }
      plan.exists = coin(rng, 0.15);
      plan.negated = coin(rng, 0.08);
      plan.modal = a == 0 && coin(rng, 0.1);
      plan.object = coin(rng, 0.85);
      int conj = 0;
      if (a > 0) {
        double c = std::uniform_real_distribution<double>(0, 1)(rng);
        if (c < 0.4) {
          conj = b.add("und", "und", "CCONJ", "KON", previous_top, "cd");
        } else if (c < 0.7) {
          conj = b.add("oder", "oder", "CCONJ", "KON", previous_top, "cd");
        } else {
          b.add(",", "--", "PUNCT", "$,", previous_top, "punct");
        }
      }
      int top = add_clause(b, rng, plan);
      if (a == 0) {
        b.attach(top, 0, "ROOT");
        root = top;
      } else if (conj) {
        b.attach(top, conj, "cj");
      } else {
        b.attach(top, previous_top, "cj");
      }
      previous_top = top;
    }
    b.add(".", "--", "PUNCT", "$.", root, "punct");
    doc.sentences.push_back(b.build(s, doc.name + "s" + std::to_string(s)));
  }
  return doc;
}

CausalFootprint footprint_from_traces(const std::vector<std::string> &labels,
                                      const std::set<Trace> &traces) {
  CausalFootprint fp;
  fp.labels = labels;
  std::sort(fp.labels.begin(), fp.labels.end());
  fp.labels.erase(std::unique(fp.labels.begin(), fp.labels.end()), fp.labels.end());
  for (const auto &a : fp.labels) {
    for (const auto &b : fp.labels) {
      if (a == b) continue;
      bool together = false, ab = false, ba = false;
      for (const Trace &t : traces) {
        std::vector<size_t> pa, pb;
        for (size_t i = 0; i < t.size(); ++i) {
          if (t[i] == a) pa.push_back(i);
          if (t[i] == b) pb.push_back(i);
        }
        if (pa.empty() || pb.empty()) continue;
        together = true;
        for (size_t i : pa) {
          for (size_t j : pb) {
            if (i < j) ab = true;
            if (j < i) ba = true;
          }
        }
      }
      FootprintRelation r = FootprintRelation::kExclusive;
      if (together) {
        if (ab && ba) {
          r = FootprintRelation::kConcurrent;
        } else if (ab) {
          r = FootprintRelation::kCausal;
        } else {
          r = FootprintRelation::kInverseCausal;
        }
      }
      fp.relation[{a, b}] = r;
    }
  }
  return fp;
}

CausalFootprint sequential_footprint(const std::vector<std::string> &order) {
  std::map<std::string, size_t> first, last;
  for (size_t i = 0; i < order.size(); ++i) {
    first.try_emplace(order[i], i);
    last[order[i]] = i;
  }
  CausalFootprint fp;
  for (const auto &[l, _] : first) fp.labels.push_back(l);
  for (const auto &a : fp.labels) {
    for (const auto &b : fp.labels) {
      if (a == b) continue;
      bool ab = first[a] < last[b];
      bool ba = first[b] < last[a];
      fp.relation[{a, b}] = ab && ba   ? FootprintRelation::kConcurrent
                            : ab       ? FootprintRelation::kCausal
                                       : FootprintRelation::kInverseCausal;
    }
  }
  return fp;
}

WorkflowNet relabel(const WorkflowNet &net, const std::string &prefix) {
  WorkflowNet out;
  for (const auto &p : net.places()) out.add_place(p);
  for (const auto &[id, t] : net.transitions()) {
    out.add_transition(id, t.label ? std::optional<std::string>(prefix + *t.label)
                                   : std::nullopt);
  }
  for (const auto &[from, to] : net.arcs()) out.add_arc(from, to);
  out.set_source(net.source());
  out.set_sink(net.sink());
  return out;
}

WorkflowNet sequence_net(const std::vector<std::string> &labels) {
  WorkflowNet n;
  n.add_place("p0");
  for (size_t i = 0; i < labels.size(); ++i) {
    std::string t = "t" + std::to_string(i);
    std::string next = "p" + std::to_string(i + 1);
    n.add_transition(t, labels[i]);
    n.add_place(next);
    n.add_arc("p" + std::to_string(i), t);
    n.add_arc(t, next);
  }
  n.set_source("p0");
  n.set_sink("p" + std::to_string(labels.size()));
  return n;
}

WorkflowNet and_net(const std::vector<std::string> &labels) {
  WorkflowNet n;
  for (const char *p : {"i", "o"}) n.add_place(p);
  n.add_transition("split", std::nullopt);
  n.add_transition("join", std::nullopt);
  n.add_arc("i", "split");
  n.add_arc("join", "o");
  for (size_t k = 0; k < labels.size(); ++k) {
    std::string s = std::to_string(k);
    n.add_place("in" + s);
    n.add_place("out" + s);
    n.add_transition("t" + s, labels[k]);
    n.add_arc("split", "in" + s);
    n.add_arc("in" + s, "t" + s);
    n.add_arc("t" + s, "out" + s);
    n.add_arc("out" + s, "join");
  }
  n.set_source("i");
  n.set_sink("o");
  return n;
}

WorkflowNet or_net(const std::vector<std::string> &labels) {
  WorkflowNet n;
  n.add_place("i");
  n.add_place("o");
  for (size_t k = 0; k < labels.size(); ++k) {
    std::string t = "t" + std::to_string(k);
    n.add_transition(t, labels[k]);
    n.add_arc("i", t);
    n.add_arc(t, "o");
  }
  n.set_source("i");
  n.set_sink("o");
  return n;
}

}  // namespace procnet::testing
