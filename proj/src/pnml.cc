#include <algorithm>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "procnet/petri.h"
#include "procnet/text.h"

namespace procnet {

namespace {

constexpr const char *kPnmlNamespace =
    "http://www.pnml.org/version-2009/grammar/pnml";
constexpr const char *kPtnetType =
    "http://www.pnml.org/version-2009/grammar/ptnet";
constexpr const char *kInvisible = "$invisible$";

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

[[noreturn]] void malformed(const std::string &msg) {
  throw PetriError(PetriError::Kind::kMalformedPnml, msg);
}

using boost::property_tree::ptree;

std::string attr(const ptree &node, const char *name) {
  return node.get<std::string>(std::string("<xmlattr>.") + name, "");
}

struct RawNet {
  std::vector<std::string> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
};

void collect(const ptree &container, RawNet *raw) {
  for (const auto &[tag, child] : container) {
    if (tag == "place") {
      std::string id = attr(child, "id");
      if (id.empty()) malformed("place without id");
      raw->places.push_back(id);
    } else if (tag == "transition") {
      Transition t;
      t.id = attr(child, "id");
      if (t.id.empty()) malformed("transition without id");
      std::string name = child.get<std::string>("name.text", "");
      bool silent = name.empty();
      for (const auto &[ctag, tool] : child) {
        if (ctag != "toolspecific") continue;
        if (attr(tool, "activity") == kInvisible) silent = true;
        if (tool.get<std::string>("silent", "") == "true") silent = true;
      }
      if (!silent) t.label = name;
      raw->transitions.push_back(std::move(t));
    } else if (tag == "arc") {
      std::string from = attr(child, "source"), to = attr(child, "target");
      if (from.empty() || to.empty()) malformed("arc without source or target");
      raw->arcs.emplace_back(from, to);
    } else if (tag == "page") {
      collect(child, raw);
    }
  }
}

}  // namespace

std::string to_pnml(const WorkflowNet &net, std::string_view name) {
  auto violations = validate(net);
  if (!violations.empty()) {
    throw PetriError(PetriError::Kind::kInvalidNet,
                     "cannot export invalid net: " + join(violations, "; "));
  }
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<pnml xmlns=\"" << kPnmlNamespace << "\">\n";
  out << "  <net id=\"" << xml_escape(name) << "\" type=\"" << kPtnetType
      << "\">\n";
  out << "    <name><text>" << xml_escape(name) << "</text></name>\n";
  out << "    <page id=\"page0\">\n";
  for (const auto &p : net.places()) {
    out << "      <place id=\"" << xml_escape(p) << "\">";
    out << "<name><text>" << xml_escape(p) << "</text></name>";
    if (p == net.source()) {
      out << "<initialMarking><text>1</text></initialMarking>";
    }
    out << "</place>\n";
  }
  for (const auto &[id, t] : net.transitions()) {
    out << "      <transition id=\"" << xml_escape(id) << "\">";
    out << "<name><text>" << xml_escape(t.label.value_or("")) << "</text></name>";
    if (t.silent()) {
      out << "<toolspecific tool=\"ProM\" version=\"6.4\" activity=\""
          << kInvisible << "\"/>";
    }
    out << "</transition>\n";
  }
  const size_t width = std::max<size_t>(3, std::to_string(net.arcs().size()).size());
  size_t k = 0;
  for (const auto &[from, to] : net.arcs()) {
    std::string id = std::to_string(k++);
    id = "a" + std::string(width - std::min(width, id.size()), '0') + id;
    out << "      <arc id=\"" << id << "\" source=\"" << xml_escape(from)
        << "\" target=\"" << xml_escape(to) << "\"/>\n";
  }
  out << "    </page>\n";
  out << "    <finalmarkings><marking><place idref=\"" << xml_escape(net.sink())
      << "\"><text>1</text></place></marking></finalmarkings>\n";
  out << "  </net>\n";
  out << "</pnml>\n";
  return out.str();
}

WorkflowNet parse_pnml(std::string_view document) {
  ptree tree;
  try {
    std::istringstream in{std::string(document)};
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error &e) {
    malformed(std::string("not well-formed XML: ") + e.what());
  }
  auto pnml = tree.get_child_optional("pnml");
  if (!pnml) malformed("missing <pnml> root element");
  auto net_node = pnml->get_child_optional("net");
  if (!net_node) malformed("missing <net> element");

  RawNet raw;
  collect(*net_node, &raw);
  WorkflowNet net;
  try {
    for (const auto &p : raw.places) net.add_place(p);
    for (const auto &t : raw.transitions) net.add_transition(t.id, t.label);
  } catch (const PetriError &e) {
    malformed(e.what());
  }
  for (const auto &[from, to] : raw.arcs) {
    if (!net.has_node(from) || !net.has_node(to)) {
      malformed("arc " + from + " -> " + to + " references a missing node");
    }
    net.add_arc(from, to);
  }
  std::vector<std::string> sources, sinks;
  for (const auto &p : net.places()) {
    if (net.preset(p).empty()) sources.push_back(p);
    if (net.postset(p).empty()) sinks.push_back(p);
  }
  if (!sources.empty()) net.set_source(sources.front());
  if (!sinks.empty()) net.set_sink(sinks.front());
  auto violations = validate(net);
  if (!violations.empty()) {
    throw PetriError(PetriError::Kind::kInvalidNet,
                     "PNML net is not a workflow net: " + join(violations, "; "));
  }
  return net;
}

}  // namespace procnet
