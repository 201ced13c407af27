#include <sstream>

#include "procnet/petri.h"
#include "procnet/text.h"

namespace procnet {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const WorkflowNet &net, std::string_view name) {
  auto violations = validate(net);
  if (!violations.empty()) {
    throw PetriError(PetriError::Kind::kInvalidNet,
                     "cannot draw invalid net: " + join(violations, "; "));
  }
  std::ostringstream out;
  out << "digraph " << quote(name) << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontname=\"Helvetica\", fontsize=10];\n";
  for (const auto &p : net.places()) {
    out << "  " << quote(p) << " [shape=circle, label=\"\"";
    if (p == net.source() || p == net.sink()) out << ", peripheries=2";
    out << "];\n";
  }
  for (const auto &[id, t] : net.transitions()) {
    out << "  " << quote(id);
    if (t.silent()) {
      out << " [shape=box, style=filled, fillcolor=black, label=\"\", "
             "width=0.15];\n";
    } else {
      out << " [shape=box, label=" << quote(*t.label) << "];\n";
    }
  }
  for (const auto &[from, to] : net.arcs()) {
    out << "  " << quote(from) << " -> " << quote(to) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace procnet
