#include <algorithm>
#include <map>
#include <numeric>

#include "procnet/petri.h"
#include "procnet/text.h"

namespace procnet {

namespace {

[[noreturn]] void fail(PetriError::Kind kind, const std::string &msg) {
  throw PetriError(kind, msg);
}

void require_valid(const WorkflowNet &net, const char *what) {
  auto violations = validate(net);
  if (!violations.empty()) {
    fail(PetriError::Kind::kInvalidNet,
         std::string(what) + " is not a valid workflow net: " +
             join(violations, "; "));
  }
}

int find_root(std::vector<int> &parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Partitions 0..n-1 by the given edges; components come back ordered by
// their smallest member, members ascending.
std::vector<std::vector<int>> components(
    int n, const std::vector<std::pair<int, int>> &edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (auto [a, b] : edges) parent[find_root(parent, a)] = find_root(parent, b);
  std::map<int, std::vector<int>> by_root;
  for (int i = 0; i < n; ++i) by_root[find_root(parent, i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto &[r, members] : by_root) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

// Alternatives between two places; a silent skip joins when any alternative
// is optional.
void wire_choice(WorkflowNet *net, const std::vector<const Activity *> &acts,
                 const std::string &entry, const std::string &exit) {
  bool optional = false;
  for (const Activity *a : acts) {
    std::string t = net->add_fresh_transition(activity_label(*a));
    net->add_arc(entry, t);
    net->add_arc(t, exit);
    optional = optional || a->quantifier == Quantifier::kExists;
  }
  if (optional) {
    std::string skip = net->add_fresh_transition(std::nullopt);
    net->add_arc(entry, skip);
    net->add_arc(skip, exit);
  }
}

// Maps every node of `sub` into `net`. Entry and exit may be pinned to
// existing places of `net`; other clashing ids are renamed. Returns the
// sub-net with its ids as they appear in `net`.
SubNet embed(WorkflowNet *net, const SubNet &sub, const std::string &entry_as,
             const std::string &exit_as = "") {
  std::map<std::string, std::string> rename;
  std::set<std::string> assigned;
  auto claim = [&](const std::string &id, const char *prefix) {
    std::string target = id;
    if (net->has_node(id) || assigned.contains(id)) {
      target = net->fresh_id(prefix, [&](const std::string &cand) {
        return assigned.contains(cand) || sub.net.has_node(cand);
      });
    }
    assigned.insert(target);
    return target;
  };
  rename[sub.entry()] = entry_as;
  assigned.insert(entry_as);
  if (!exit_as.empty()) {
    rename[sub.exit()] = exit_as;
    assigned.insert(exit_as);
  }
  for (const auto &p : sub.net.places()) {
    if (!rename.contains(p)) rename[p] = claim(p, "p");
  }
  for (const auto &[id, t] : sub.net.transitions()) rename[id] = claim(id, "t");

  SubNet placed;
  for (const auto &p : sub.net.places()) {
    const std::string &id = rename[p];
    if (!net->has_place(id)) net->add_place(id);
    placed.net.add_place(id);
  }
  for (const auto &[id, t] : sub.net.transitions()) {
    net->add_transition(rename[id], t.label);
    placed.net.add_transition(rename[id], t.label);
  }
  for (const auto &[a, b] : sub.net.arcs()) {
    net->add_arc(rename[a], rename[b]);
    placed.net.add_arc(rename[a], rename[b]);
  }
  placed.net.set_source(rename[sub.entry()]);
  placed.net.set_sink(rename[sub.exit()]);
  return placed;
}

void require_contained(const WorkflowNet &net, const SubNet &last) {
  auto missing = [&](const std::string &what) {
    fail(PetriError::Kind::kLastNotFound,
         "previous sub-net is not part of the net (" + what + ")");
  };
  for (const auto &p : last.net.places()) {
    if (!net.has_place(p)) missing("place " + p);
  }
  for (const auto &[id, t] : last.net.transitions()) {
    auto it = net.transitions().find(id);
    if (it == net.transitions().end() || it->second.label != t.label) {
      missing("transition " + id);
    }
  }
  for (const auto &[a, b] : last.net.arcs()) {
    if (!net.has_arc(a, b)) missing("arc " + a + " -> " + b);
  }
}

// Moves last's arcs at place `from` onto place `to`, in `net` and in the
// relocated copy of `last`.
void move_boundary(WorkflowNet *net, SubNet *last, const std::string &from,
                   const std::string &to, bool outgoing) {
  for (const auto &[id, t] : last->net.transitions()) {
    if (outgoing && net->has_arc(from, id)) {
      net->remove_arc(from, id);
      net->add_arc(to, id);
    }
    if (!outgoing && net->has_arc(id, from)) {
      net->remove_arc(id, from);
      net->add_arc(id, to);
    }
  }
  last->net.rename(from, to);
}

}  // namespace

std::string activity_label(const Activity &activity) {
  std::vector<std::string> verbs;
  const auto &source = activity.lemmas.empty() ? activity.verbs : activity.lemmas;
  for (const auto &v : source) verbs.push_back(utf8_lower(v));
  std::sort(verbs.begin(), verbs.end());
  verbs.erase(std::unique(verbs.begin(), verbs.end()), verbs.end());
  std::string label = join(verbs, "+");
  if (!activity.objects.empty()) {
    std::vector<std::string> objects;
    for (const auto &o : activity.objects) objects.push_back(utf8_lower(o));
    std::sort(objects.begin(), objects.end());
    label += "(" + join(objects, ",") + ")";
  }
  return label;
}

SubNet sub_net_for_sentence(const std::vector<Activity> &activities,
                            const std::vector<Relation> &relations,
                            const NetConfig &config) {
  std::vector<const Activity *> usable;
  for (const Activity &a : activities) {
    if (config.include_negated || !a.negated) usable.push_back(&a);
  }
  if (usable.empty()) {
    fail(PetriError::Kind::kNoActivities, "sentence has no usable activities");
  }
  const int n = static_cast<int>(usable.size());
  std::map<std::string, int> position;
  for (int i = 0; i < n; ++i) position[usable[i]->id] = i;

  std::vector<std::pair<int, int>> or_edges, and_edges;
  for (const Relation &r : relations) {
    if (r.scope != RelationScope::kIntra) continue;
    auto l = position.find(r.left), rr = position.find(r.right);
    if (l == position.end() || rr == position.end() || l->second == rr->second) {
      continue;
    }
    if (r.kind == RelationKind::kOr) or_edges.emplace_back(l->second, rr->second);
    if (r.kind == RelationKind::kAnd) and_edges.emplace_back(l->second, rr->second);
  }

  // OR components become choice blocks; AND edges then join blocks.
  auto blocks = components(n, or_edges);
  std::vector<int> block_of(n);
  for (size_t b = 0; b < blocks.size(); ++b) {
    for (int i : blocks[b]) block_of[i] = static_cast<int>(b);
  }
  std::vector<std::pair<int, int>> block_edges;
  for (auto [a, b] : and_edges) block_edges.emplace_back(block_of[a], block_of[b]);
  auto groups = components(static_cast<int>(blocks.size()), block_edges);

  SubNet sub;
  WorkflowNet &net = sub.net;
  std::string cursor = net.add_fresh_place();
  net.set_source(cursor);
  auto block_acts = [&](int b) {
    std::vector<const Activity *> acts;
    for (int i : blocks[b]) acts.push_back(usable[i]);
    return acts;
  };
  for (const auto &group : groups) {
    std::string next = net.add_fresh_place();
    if (group.size() == 1) {
      wire_choice(&net, block_acts(group.front()), cursor, next);
    } else {
      std::string split = net.add_fresh_transition(std::nullopt);
      std::string join_t = net.add_fresh_transition(std::nullopt);
      net.add_arc(cursor, split);
      net.add_arc(join_t, next);
      for (int b : group) {
        std::string in = net.add_fresh_place();
        std::string out = net.add_fresh_place();
        net.add_arc(split, in);
        net.add_arc(out, join_t);
        wire_choice(&net, block_acts(b), in, out);
      }
    }
    cursor = next;
  }
  net.set_sink(cursor);
  return sub;
}

WorkflowNet append(const WorkflowNet &net, const SubNet &sub, SubNet *placed) {
  require_valid(sub.net, "sub-net");
  if (net.empty()) {
    if (placed) *placed = sub;
    return sub.net;
  }
  require_valid(net, "net");
  WorkflowNet out = net;
  SubNet where = embed(&out, sub, out.sink());
  out.set_sink(where.exit());
  if (placed) *placed = std::move(where);
  return out;
}

WorkflowNet add_parallel(const WorkflowNet &net, const SubNet &last,
                         const SubNet &sub, SubNet *placed,
                         SubNet *relocated_last) {
  if (last.empty() || net.empty()) {
    if (relocated_last) *relocated_last = last;
    return append(net, sub, placed);
  }
  require_valid(sub.net, "sub-net");
  require_contained(net, last);
  WorkflowNet out = net;
  SubNet moved = last;
  const std::string entry = last.entry();
  const std::string exit = last.exit();
  std::string inner_entry = out.add_fresh_place();
  std::string inner_exit = out.add_fresh_place();
  move_boundary(&out, &moved, entry, inner_entry, true);
  move_boundary(&out, &moved, exit, inner_exit, false);

  std::string split = out.add_fresh_transition(std::nullopt);
  std::string join_t = out.add_fresh_transition(std::nullopt);
  out.add_arc(entry, split);
  out.add_arc(split, inner_entry);
  out.add_arc(inner_exit, join_t);
  out.add_arc(join_t, exit);

  std::string sub_entry = out.fresh_id("p", [&](const std::string &id) {
    return sub.net.has_node(id);
  });
  out.add_place(sub_entry);
  SubNet where = embed(&out, sub, sub_entry);
  out.add_arc(split, where.entry());
  out.add_arc(where.exit(), join_t);

  require_valid(out, "parallel composition");
  if (placed) *placed = std::move(where);
  if (relocated_last) *relocated_last = std::move(moved);
  return out;
}

WorkflowNet insert_before(const WorkflowNet &net, const SubNet &last,
                          const SubNet &sub, SubNet *placed,
                          SubNet *relocated_last) {
  if (last.empty() || net.empty()) {
    if (relocated_last) *relocated_last = last;
    return append(net, sub, placed);
  }
  require_valid(sub.net, "sub-net");
  require_contained(net, last);
  WorkflowNet out = net;
  SubNet moved = last;
  const std::string entry = last.entry();
  std::string middle = out.fresh_id("p", [&](const std::string &id) {
    return sub.net.has_node(id);
  });
  out.add_place(middle);
  move_boundary(&out, &moved, entry, middle, true);
  SubNet where = embed(&out, sub, entry, middle);

  require_valid(out, "sequence insertion");
  if (placed) *placed = std::move(where);
  if (relocated_last) *relocated_last = std::move(moved);
  return out;
}

WorkflowNet generate_workflow_net(const std::vector<SentencePlan> &sentences,
                                  const NetConfig &config) {
  WorkflowNet net;
  SubNet last;
  for (const SentencePlan &plan : sentences) {
    std::vector<Activity> usable;
    for (const Activity &a : plan.activities) {
      if (config.include_negated || !a.negated) usable.push_back(a);
    }
    if (usable.empty()) continue;

    std::set<std::string> hoist;
    if (!last.empty()) {
      for (const Activity &a : usable) {
        if (plan.before) hoist.insert(a.id);
      }
      for (const Relation &r : plan.relations) {
        if (r.kind == RelationKind::kBefore && r.scope == RelationScope::kInter) {
          hoist.insert(r.left);
        }
      }
    }
    std::vector<Activity> early, rest;
    for (Activity &a : usable) {
      (hoist.contains(a.id) ? early : rest).push_back(std::move(a));
    }

    SubNet current;
    if (!early.empty()) {
      SubNet sub = sub_net_for_sentence(early, plan.relations, config);
      net = insert_before(net, last, sub, &current, &last);
    }
    if (!rest.empty()) {
      SubNet sub = sub_net_for_sentence(rest, plan.relations, config);
      if (plan.parallel && !last.empty()) {
        net = add_parallel(net, last, sub, &current);
      } else {
        net = append(net, sub, &current);
      }
    }
    last = std::move(current);
  }
  if (net.empty()) {
    fail(PetriError::Kind::kEmptyDocument, "document has no usable activities");
  }
  require_valid(net, "generated net");
  return net;
}

}  // namespace procnet
