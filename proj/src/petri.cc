#include "procnet/petri.h"

#include <algorithm>
#include <functional>

namespace procnet {

namespace {

[[noreturn]] void invalid(const std::string &msg) {
  throw PetriError(PetriError::Kind::kInvalidNet, msg);
}

}  // namespace

void WorkflowNet::add_place(const std::string &id) {
  if (id.empty() || has_node(id)) invalid("duplicate or empty node id '" + id + "'");
  places_.insert(id);
}

void WorkflowNet::add_transition(const std::string &id,
                                 std::optional<std::string> label) {
  if (id.empty() || has_node(id)) invalid("duplicate or empty node id '" + id + "'");
  transitions_.emplace(id, Transition{id, std::move(label)});
}

void WorkflowNet::add_arc(const std::string &from, const std::string &to) {
  if (!has_node(from) || !has_node(to)) {
    invalid("arc " + from + " -> " + to + " references a missing node");
  }
  arcs_.emplace(from, to);
}

void WorkflowNet::remove_arc(const std::string &from, const std::string &to) {
  arcs_.erase({from, to});
}

void WorkflowNet::rename(const std::string &from, const std::string &to) {
  if (from == to) return;
  if (!has_node(from)) invalid("cannot rename missing node '" + from + "'");
  if (has_node(to)) invalid("cannot rename onto existing node '" + to + "'");
  if (places_.erase(from)) {
    places_.insert(to);
  } else {
    auto node = transitions_.extract(from);
    node.key() = to;
    node.mapped().id = to;
    transitions_.insert(std::move(node));
  }
  std::set<Arc> renamed;
  for (const auto &[a, b] : arcs_) {
    renamed.emplace(a == from ? to : a, b == from ? to : b);
  }
  arcs_ = std::move(renamed);
  if (source_ == from) source_ = to;
  if (sink_ == from) sink_ = to;
}

std::vector<std::string> WorkflowNet::preset(const std::string &id) const {
  std::vector<std::string> out;
  for (const auto &[a, b] : arcs_) {
    if (b == id) out.push_back(a);
  }
  return out;
}

std::vector<std::string> WorkflowNet::postset(const std::string &id) const {
  std::vector<std::string> out;
  auto it = arcs_.lower_bound({id, std::string()});
  for (; it != arcs_.end() && it->first == id; ++it) out.push_back(it->second);
  return out;
}

std::string WorkflowNet::fresh_id(std::string_view prefix) const {
  return fresh_id(prefix, [](const std::string &) { return false; });
}

std::string WorkflowNet::add_fresh_place() {
  std::string id = fresh_id("p");
  add_place(id);
  return id;
}

std::string WorkflowNet::add_fresh_transition(std::optional<std::string> label) {
  std::string id = fresh_id("t");
  add_transition(id, std::move(label));
  return id;
}

size_t WorkflowNet::labeled_transition_count() const {
  return std::count_if(transitions_.begin(), transitions_.end(),
                       [](const auto &kv) { return !kv.second.silent(); });
}

size_t WorkflowNet::silent_transition_count() const {
  return transitions_.size() - labeled_transition_count();
}

std::vector<std::string> WorkflowNet::labels() const {
  std::set<std::string> out;
  for (const auto &[id, t] : transitions_) {
    if (t.label) out.insert(*t.label);
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> validate(const WorkflowNet &net) {
  std::vector<std::string> v;
  if (net.empty()) {
    v.push_back("empty net");
    return v;
  }
  std::map<std::string, int> in_degree, out_degree;
  for (const auto &[a, b] : net.arcs()) {
    if (!net.has_node(a) || !net.has_node(b)) {
      v.push_back("dangling arc " + a + " -> " + b);
      continue;
    }
    if (net.has_place(a) == net.has_place(b)) {
      v.push_back("non-bipartite arc " + a + " -> " + b);
    }
    ++out_degree[a];
    ++in_degree[b];
  }

  std::vector<std::string> sources, sinks;
  for (const auto &p : net.places()) {
    if (in_degree[p] == 0) sources.push_back(p);
    if (out_degree[p] == 0) sinks.push_back(p);
  }
  if (sources.empty()) v.push_back("no source place");
  if (sources.size() > 1) v.push_back("multiple sources");
  if (sinks.empty()) v.push_back("no sink place");
  if (sinks.size() > 1) v.push_back("multiple sinks");
  if (sources.size() == 1 && sources.front() != net.source()) {
    v.push_back("declared source '" + net.source() + "' is not the source place");
  }
  if (sinks.size() == 1 && sinks.front() != net.sink()) {
    v.push_back("declared sink '" + net.sink() + "' is not the sink place");
  }
  for (const auto &[id, t] : net.transitions()) {
    if (in_degree[id] == 0) v.push_back("transition without input " + id);
    if (out_degree[id] == 0) v.push_back("transition without output " + id);
  }

  auto reach = [&](const std::string &start, bool forward) {
    std::set<std::string> seen;
    if (!net.has_place(start)) return seen;
    std::vector<std::string> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const auto &next : forward ? net.postset(cur) : net.preset(cur)) {
        if (seen.insert(next).second) stack.push_back(next);
      }
    }
    return seen;
  };
  auto from_source = reach(net.source(), true);
  auto to_sink = reach(net.sink(), false);
  auto check_node = [&](const std::string &id) {
    if (!from_source.contains(id)) v.push_back("unreachable node " + id);
    if (!to_sink.contains(id)) v.push_back("node cannot reach sink " + id);
  };
  for (const auto &p : net.places()) check_node(p);
  for (const auto &[id, t] : net.transitions()) check_node(id);

  // Iterative DFS with colours: 1 on stack, 2 done.
  std::map<std::string, int> colour;
  auto visit = [&](const std::string &root) {
    std::vector<std::pair<std::string, size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto &[node, next] = stack.back();
      auto succ = net.postset(node);
      if (next < succ.size()) {
        const std::string child = succ[next++];
        int c = colour[child];
        if (c == 1) {
          v.push_back("cycle through " + child);
          return false;
        }
        if (c == 0) {
          colour[child] = 1;
          stack.emplace_back(child, 0);
        }
      } else {
        colour[node] = 2;
        stack.pop_back();
      }
    }
    return true;
  };
  bool acyclic = true;
  for (const auto &p : net.places()) {
    if (acyclic && colour[p] == 0) acyclic = visit(p);
  }
  for (const auto &[id, t] : net.transitions()) {
    if (acyclic && colour[id] == 0) acyclic = visit(id);
  }
  return v;
}

namespace {

struct IndexedNet {
  std::vector<std::string> ids;
  std::vector<std::vector<int>> out, in;
  std::set<std::pair<int, int>> arcs;
  std::vector<std::string> base;  // initial colour signature
};

IndexedNet index_net(const WorkflowNet &net) {
  IndexedNet g;
  std::map<std::string, int> idx;
  for (const auto &p : net.places()) {
    idx[p] = static_cast<int>(g.ids.size());
    g.ids.push_back(p);
    std::string sig = "P";
    if (p == net.source()) sig += "|source";
    if (p == net.sink()) sig += "|sink";
    g.base.push_back(sig);
  }
  for (const auto &[id, t] : net.transitions()) {
    idx[id] = static_cast<int>(g.ids.size());
    g.ids.push_back(id);
    g.base.push_back(t.label ? "T|" + *t.label : std::string("T*"));
  }
  g.out.resize(g.ids.size());
  g.in.resize(g.ids.size());
  for (const auto &[a, b] : net.arcs()) {
    auto ia = idx.find(a), ib = idx.find(b);
    if (ia == idx.end() || ib == idx.end()) continue;
    g.out[ia->second].push_back(ib->second);
    g.in[ib->second].push_back(ia->second);
    g.arcs.emplace(ia->second, ib->second);
  }
  return g;
}

// Joint colour refinement so colours are comparable across both graphs.
void refine(const IndexedNet &a, const IndexedNet &b, std::vector<int> *ca,
            std::vector<int> *cb) {
  std::map<std::string, int> palette;
  auto init = [&](const IndexedNet &g, std::vector<int> *c) {
    c->clear();
    for (const auto &sig : g.base) {
      c->push_back(palette.emplace(sig, static_cast<int>(palette.size()))
                       .first->second);
    }
  };
  init(a, ca);
  init(b, cb);
  size_t classes = palette.size();
  for (;;) {
    std::map<std::vector<int>, int> next_palette;
    auto step = [&](const IndexedNet &g, const std::vector<int> &c) {
      std::vector<int> out(c.size());
      for (size_t i = 0; i < c.size(); ++i) {
        std::vector<int> sig{c[i], -1};
        std::vector<int> outs, ins;
        for (int j : g.out[i]) outs.push_back(c[j]);
        for (int j : g.in[i]) ins.push_back(c[j]);
        std::sort(outs.begin(), outs.end());
        std::sort(ins.begin(), ins.end());
        sig.insert(sig.end(), outs.begin(), outs.end());
        sig.push_back(-2);
        sig.insert(sig.end(), ins.begin(), ins.end());
        out[i] = next_palette.emplace(sig, static_cast<int>(next_palette.size()))
                     .first->second;
      }
      return out;
    };
    auto na = step(a, *ca);
    auto nb = step(b, *cb);
    *ca = std::move(na);
    *cb = std::move(nb);
    if (next_palette.size() == classes) return;
    classes = next_palette.size();
  }
}

}  // namespace

bool isomorphic(const WorkflowNet &a, const WorkflowNet &b) {
  if (a.places().size() != b.places().size() ||
      a.transitions().size() != b.transitions().size() ||
      a.arcs().size() != b.arcs().size()) {
    return false;
  }
  IndexedNet ga = index_net(a), gb = index_net(b);
  std::vector<int> ca, cb;
  refine(ga, gb, &ca, &cb);
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  const int n = static_cast<int>(ga.ids.size());
  std::map<int, std::vector<int>> by_colour;
  for (int j = 0; j < n; ++j) by_colour[cb[j]].push_back(j);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return by_colour[ca[x]].size() < by_colour[ca[y]].size();
  });

  std::vector<int> map_ab(n, -1), map_ba(n, -1);
  std::function<bool(int)> search = [&](int k) {
    if (k == n) return true;
    int u = order[k];
    for (int v : by_colour[ca[u]]) {
      if (map_ba[v] != -1) continue;
      bool ok = true;
      for (int w : ga.out[u]) {
        if (map_ab[w] != -1 && !gb.arcs.contains({v, map_ab[w]})) ok = false;
      }
      for (int w : ga.in[u]) {
        if (map_ab[w] != -1 && !gb.arcs.contains({map_ab[w], v})) ok = false;
      }
      for (int w : gb.out[v]) {
        if (map_ba[w] != -1 && !ga.arcs.contains({u, map_ba[w]})) ok = false;
      }
      for (int w : gb.in[v]) {
        if (map_ba[w] != -1 && !ga.arcs.contains({map_ba[w], u})) ok = false;
      }
      if (!ok) continue;
      map_ab[u] = v;
      map_ba[v] = u;
      if (search(k + 1)) return true;
      map_ab[u] = -1;
      map_ba[v] = -1;
    }
    return false;
  };
  return search(0);
}

}  // namespace procnet
