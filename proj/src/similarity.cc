#include "procnet/similarity.h"

#include <algorithm>
#include <cmath>

#include <boost/dynamic_bitset.hpp>

#include "procnet/text.h"

namespace procnet {

const char *footprint_relation_name(FootprintRelation r) {
  switch (r) {
    case FootprintRelation::kCausal:
      return "CAUSAL";
    case FootprintRelation::kInverseCausal:
      return "INVERSE_CAUSAL";
    case FootprintRelation::kConcurrent:
      return "CONCURRENT";
    case FootprintRelation::kExclusive:
      return "EXCLUSIVE";
  }
  return "?";
}

namespace {

using Marking = std::vector<uint32_t>;

// Index-based view of a net for the token game.
struct TokenGame {
  std::vector<std::string> labels;  // distinct labels, sorted
  struct Step {
    std::vector<int> pre, post;
    int label = -1;  // -1: silent
  };
  std::vector<Step> steps;
  Marking initial, final;

  explicit TokenGame(const WorkflowNet &net) {
    auto violations = validate(net);
    for (const auto &v : violations) {
      if (v.rfind("cycle", 0) == 0) {
        throw SimilarityError(SimilarityError::Kind::kCyclicNet,
                              "net contains a cycle; refusing to enumerate");
      }
    }
    if (!violations.empty()) {
      throw PetriError(PetriError::Kind::kInvalidNet,
                       "not a workflow net: " + join(violations, "; "));
    }
    labels = net.labels();
    std::map<std::string, int> place_index;
    for (const auto &p : net.places()) {
      place_index[p] = static_cast<int>(place_index.size());
    }
    for (const auto &[id, t] : net.transitions()) {
      Step s;
      for (const auto &p : net.preset(id)) s.pre.push_back(place_index[p]);
      for (const auto &p : net.postset(id)) s.post.push_back(place_index[p]);
      if (t.label) {
        s.label = static_cast<int>(
            std::lower_bound(labels.begin(), labels.end(), *t.label) -
            labels.begin());
      }
      steps.push_back(std::move(s));
    }
    initial.assign(place_index.size(), 0);
    final.assign(place_index.size(), 0);
    initial[place_index[net.source()]] = 1;
    final[place_index[net.sink()]] = 1;
  }

  bool enabled(const Marking &m, const Step &s) const {
    for (int p : s.pre) {
      if (m[p] == 0) return false;
    }
    return true;
  }

  Marking fire(const Marking &m, const Step &s) const {
    Marking next = m;
    for (int p : s.pre) --next[p];
    for (int p : s.post) ++next[p];
    return next;
  }
};

[[noreturn]] void over_budget(size_t budget) {
  throw SimilarityError(SimilarityError::Kind::kStateBudgetExceeded,
                        "state budget of " + std::to_string(budget) +
                            " exceeded");
}

// What can still happen from one marking on paths that reach the final
// marking: which labels occur, and which ordered label pairs (a then b).
struct Future {
  bool completes = false;
  boost::dynamic_bitset<> labels;
  boost::dynamic_bitset<> precedes;  // a * n + b
};

class FootprintSolver {
 public:
  FootprintSolver(const TokenGame &game, size_t budget)
      : game_(game), budget_(budget), n_(game.labels.size()) {}

  const Future &solve(const Marking &m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    if (memo_.size() >= budget_) over_budget(budget_);
    Future f;
    f.labels.resize(n_);
    f.precedes.resize(n_ * n_);
    if (m == game_.final) {
      f.completes = true;
    } else {
      for (const auto &step : game_.steps) {
        if (!game_.enabled(m, step)) continue;
        const Future &next = solve(game_.fire(m, step));
        if (!next.completes) continue;
        f.completes = true;
        f.labels |= next.labels;
        f.precedes |= next.precedes;
        if (step.label >= 0) {
          f.labels.set(step.label);
          for (size_t b = next.labels.find_first(); b != next.labels.npos;
               b = next.labels.find_next(b)) {
            f.precedes.set(step.label * n_ + b);
          }
        }
      }
    }
    return memo_.emplace(m, std::move(f)).first->second;
  }

 private:
  const TokenGame &game_;
  size_t budget_;
  size_t n_;
  std::map<Marking, Future> memo_;
};

}  // namespace

std::set<Trace> traces(const WorkflowNet &net, size_t budget) {
  TokenGame game(net);
  std::set<Trace> out;
  std::vector<int> labels;
  size_t visited = 0;
  auto walk = [&](auto &&self, const Marking &m) -> void {
    if (++visited > budget) over_budget(budget);
    if (m == game.final) {
      Trace t;
      for (int l : labels) t.push_back(game.labels[l]);
      out.insert(std::move(t));
      return;
    }
    for (const auto &step : game.steps) {
      if (!game.enabled(m, step)) continue;
      if (step.label >= 0) labels.push_back(step.label);
      self(self, game.fire(m, step));
      if (step.label >= 0) labels.pop_back();
    }
  };
  walk(walk, game.initial);
  return out;
}

CausalFootprint causal_footprint(const WorkflowNet &net, size_t budget) {
  TokenGame game(net);
  FootprintSolver solver(game, budget);
  const Future &root = solver.solve(game.initial);
  const size_t n = game.labels.size();
  CausalFootprint fp;
  fp.labels = game.labels;
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      bool ab = root.completes && root.precedes.test(a * n + b);
      bool ba = root.completes && root.precedes.test(b * n + a);
      FootprintRelation r = FootprintRelation::kExclusive;
      if (ab && ba) {
        r = FootprintRelation::kConcurrent;
      } else if (ab) {
        r = FootprintRelation::kCausal;
      } else if (ba) {
        r = FootprintRelation::kInverseCausal;
      }
      fp.relation[{game.labels[a], game.labels[b]}] = r;
    }
  }
  return fp;
}

namespace {

// Atoms are strings; the unit separator cannot occur in a label.
std::set<std::string> atoms(const CausalFootprint &fp) {
  constexpr char kSep = '\x1f';
  std::set<std::string> out;
  for (const auto &l : fp.labels) out.insert(std::string("L") + kSep + l);
  for (const auto &[pair, rel] : fp.relation) {
    const auto &[a, b] = pair;
    if (!(a < b)) continue;
    std::string tag;
    switch (rel) {
      case FootprintRelation::kCausal:
        tag = "C";
        break;
      case FootprintRelation::kInverseCausal:
        tag = "I";
        break;
      case FootprintRelation::kConcurrent:
        tag = "P";
        break;
      case FootprintRelation::kExclusive:
        tag = "X";
        break;
    }
    out.insert(tag + kSep + a + kSep + b);
  }
  return out;
}

}  // namespace

SimilarityReport cfp_similarity(const CausalFootprint &left,
                                const CausalFootprint &right) {
  SimilarityReport r;
  std::set_intersection(left.labels.begin(), left.labels.end(),
                        right.labels.begin(), right.labels.end(),
                        std::back_inserter(r.shared_labels));
  std::set_difference(left.labels.begin(), left.labels.end(),
                      right.labels.begin(), right.labels.end(),
                      std::back_inserter(r.only_left));
  std::set_difference(right.labels.begin(), right.labels.end(),
                      left.labels.begin(), left.labels.end(),
                      std::back_inserter(r.only_right));
  auto a = atoms(left), b = atoms(right);
  if (a.empty() && b.empty()) {
    r.score = 1.0;
    return r;
  }
  if (a.empty() || b.empty()) return r;
  size_t common = 0;
  for (const auto &atom : a) {
    if (b.contains(atom)) {
      ++common;
      if (atom[0] != 'L') ++r.pair_agreements;
    }
  }
  r.score = static_cast<double>(common) /
            std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
  r.score = std::clamp(r.score, 0.0, 1.0);
  return r;
}

CorpusReport compare_corpus(const std::vector<NetPair> &pairs, size_t budget) {
  if (pairs.empty()) {
    throw SimilarityError(SimilarityError::Kind::kEmptyCorpus,
                          "no net pairs to compare");
  }
  CorpusReport out;
  double total = 0.0;
  for (const NetPair &p : pairs) {
    PairReport pr;
    pr.left_name = p.left_name;
    pr.right_name = p.right_name;
    pr.report = cfp_similarity(causal_footprint(p.left, budget),
                               causal_footprint(p.right, budget));
    total += pr.report.score;
    out.pairs.push_back(std::move(pr));
  }
  out.mean = total / static_cast<double>(pairs.size());
  return out;
}

}  // namespace procnet
