#include "petri/pnml.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace petri {

namespace pt = boost::property_tree;

std::string_view to_string(PnmlErrorCode code) {
    switch (code) {
    case PnmlErrorCode::Unreadable: return "Unreadable";
    case PnmlErrorCode::MalformedDocument: return "MalformedDocument";
    case PnmlErrorCode::UnsupportedFeature: return "UnsupportedFeature";
    case PnmlErrorCode::DuplicateId: return "DuplicateId";
    case PnmlErrorCode::DanglingArc: return "DanglingArc";
    }
    return "Unknown";
}

PnmlError::PnmlError(PnmlErrorCode code, const std::string& location, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + " at " + location + ": " + detail),
      code_(code),
      location_(location),
      detail_(detail) {}

namespace {

// ---------------------------------------------------------------------------
// Writing helpers

std::string escape(std::string_view s, bool attribute) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"':
            if (attribute) out += "&quot;"; else out += c;
            break;
        default: out += c;
        }
    }
    return out;
}

void emit_tree(std::string& out, const std::string& tag, const pt::ptree& node, int depth) {
    const std::string pad(2 * depth, ' ');
    out += pad + "<" + tag;
    if (auto attrs = node.get_child_optional("<xmlattr>")) {
        for (const auto& [name, value] : *attrs) {
            out += " " + name + "=\"" + escape(value.data(), true) + "\"";
        }
    }
    bool has_children = false;
    for (const auto& [name, child] : node) {
        if (name != "<xmlattr>" && name != "<xmlcomment>") has_children = true;
    }
    const std::string text = boost::algorithm::trim_copy(node.data());
    if (!has_children && text.empty()) {
        out += "/>\n";
        return;
    }
    if (!has_children) {
        out += ">" + escape(text, false) + "</" + tag + ">\n";
        return;
    }
    out += ">\n";
    if (!text.empty()) out += pad + "  " + escape(text, false) + "\n";
    for (const auto& [name, child] : node) {
        if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
        emit_tree(out, name, child, depth + 1);
    }
    out += pad + "</" + tag + ">\n";
}

std::string fragment(const std::string& tag, const pt::ptree& node) {
    std::string out;
    emit_tree(out, tag, node, 0);
    return out;
}

void emit_fragment(std::string& out, const std::string& xml, int depth) {
    const std::string pad(2 * depth, ' ');
    std::istringstream lines(xml);
    for (std::string line; std::getline(lines, line);) {
        out += pad + line + "\n";
    }
}

// "arcN", avoiding ids already in use.
std::string generated_arc_id(std::size_t k, const std::set<std::string>& taken) {
    std::string id = "arc" + std::to_string(k + 1);
    while (taken.count(id)) id += "_";
    return id;
}

void emit_text_label(std::string& out, const std::string& tag, const std::string& text, int depth) {
    const std::string pad(2 * depth, ' ');
    out += pad + "<" + tag + ">\n";
    out += pad + "  <text>" + escape(text, false) + "</text>\n";
    out += pad + "</" + tag + ">\n";
}

// ---------------------------------------------------------------------------
// Reading helpers

struct RawNode {
    std::string id;
    std::optional<std::string> label;
    bool is_place = false;
    int tokens = 0;
    std::string page;
};

struct RawArc {
    std::string id;  // empty when the document gives none
    std::vector<std::string> extras;
    std::string source;
    std::string target;
    std::string page;
};

struct Reader {
    PnmlDocument doc;
    std::vector<RawNode> nodes;
    std::vector<RawArc> arcs;
    std::set<std::string> ids;
    std::size_t arc_counter = 0;

    static std::string attr(const pt::ptree& node, const std::string& name) {
        return node.get<std::string>("<xmlattr>." + name, "");
    }

    static std::optional<std::string> label_text(const pt::ptree& node, const std::string& tag) {
        auto label = node.get_child_optional(tag);
        if (!label) return std::nullopt;
        return boost::algorithm::trim_copy(label->get<std::string>("text", ""));
    }

    void claim(const std::string& id, const std::string& where) {
        if (id.empty()) {
            throw PnmlError(PnmlErrorCode::MalformedDocument, where, "element has no id attribute");
        }
        if (!ids.insert(id).second) {
            throw PnmlError(PnmlErrorCode::DuplicateId, where, "id '" + id + "' is declared more than once");
        }
    }

    void read_node(const std::string& tag, const pt::ptree& node, const std::string& page) {
        RawNode raw;
        raw.id = attr(node, "id");
        raw.is_place = tag == "place";
        raw.page = page;
        const std::string where = tag + " '" + raw.id + "'";
        claim(raw.id, where);
        if (auto name = label_text(node, "name")) raw.label = *name;
        if (raw.is_place) {
            if (auto marking = label_text(node, "initialMarking")) {
                if (*marking == "1") {
                    raw.tokens = 1;
                } else if (*marking != "0" && !marking->empty()) {
                    throw PnmlError(PnmlErrorCode::UnsupportedFeature, where,
                                    "initial marking '" + *marking + "' is not 0 or 1");
                }
            }
        }
        for (const auto& [child_tag, child] : node) {
            if (child_tag == "<xmlattr>" || child_tag == "<xmlcomment>" || child_tag == "name" ||
                (raw.is_place && child_tag == "initialMarking")) {
                continue;
            }
            doc.node_extras[raw.id].push_back(fragment(child_tag, child));
        }
        nodes.push_back(std::move(raw));
    }

    void read_arc(const pt::ptree& node, const std::string& page) {
        RawArc raw;
        raw.id = attr(node, "id");
        ++arc_counter;
        const std::string where = raw.id.empty() ? "arc #" + std::to_string(arc_counter) : "arc '" + raw.id + "'";
        if (!raw.id.empty()) claim(raw.id, where);
        raw.source = attr(node, "source");
        raw.target = attr(node, "target");
        raw.page = page;
        if (raw.source.empty() || raw.target.empty()) {
            throw PnmlError(PnmlErrorCode::MalformedDocument, where, "arc needs source and target attributes");
        }
        if (auto inscription = label_text(node, "inscription")) {
            if (*inscription != "1") {
                throw PnmlError(PnmlErrorCode::UnsupportedFeature, where,
                                "inscription '" + *inscription + "' (only unit arcs are supported)");
            }
        }
        for (const auto& [child_tag, child] : node) {
            if (child_tag == "<xmlattr>" || child_tag == "<xmlcomment>" || child_tag == "inscription") continue;
            raw.extras.push_back(fragment(child_tag, child));
        }
        arcs.push_back(std::move(raw));
    }

    void read_container(const pt::ptree& node, const std::string& page, bool is_net) {
        for (const auto& [tag, child] : node) {
            if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
            if (tag == "place" || tag == "transition") {
                read_node(tag, child, page);
            } else if (tag == "arc") {
                read_arc(child, page);
            } else if (tag == "page") {
                const std::string id = attr(child, "id");
                claim(id, "page '" + id + "'");
                if (doc.page_id == "page0" && is_net) doc.page_id = id;
                read_container(child, id, false);
            } else if (tag == "referencePlace" || tag == "referenceTransition") {
                throw PnmlError(PnmlErrorCode::UnsupportedFeature, tag + " '" + attr(child, "id") + "'",
                                "reference nodes are not supported");
            } else if (is_net && tag == "name") {
                doc.net_name = label_text(node, "name");
            } else {
                (is_net ? doc.net_extras : doc.page_extras).push_back(fragment(tag, child));
            }
        }
    }
};

}  // namespace

PnmlDocument parse_pnml_document(std::string_view text) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw PnmlError(PnmlErrorCode::MalformedDocument, "line " + std::to_string(e.line()), e.message());
    }
    auto root = tree.get_child_optional("pnml");
    if (!root) {
        throw PnmlError(PnmlErrorCode::MalformedDocument, "document root", "expected a <pnml> root element");
    }
    std::vector<const pt::ptree*> nets;
    for (const auto& [tag, child] : *root) {
        if (tag == "net") nets.push_back(&child);
    }
    if (nets.empty()) {
        throw PnmlError(PnmlErrorCode::MalformedDocument, "<pnml>", "document contains no <net> element");
    }
    if (nets.size() > 1) {
        throw PnmlError(PnmlErrorCode::UnsupportedFeature, "<pnml>",
                        "document contains " + std::to_string(nets.size()) + " nets");
    }

    Reader reader;
    const pt::ptree& net = *nets.front();
    reader.doc.net_id = Reader::attr(net, "id");
    if (reader.doc.net_id.empty()) {
        throw PnmlError(PnmlErrorCode::MalformedDocument, "<net>", "net has no id attribute");
    }
    reader.claim(reader.doc.net_id, "<net>");
    reader.doc.net_type_uri = Reader::attr(net, "type");
    reader.read_container(net, "", true);

    std::map<std::string, const RawNode*> by_id;
    for (const auto& n : reader.nodes) by_id[n.id] = &n;
    for (std::size_t k = 0; k < reader.arcs.size(); ++k) {
        auto& a = reader.arcs[k];
        if (a.id.empty()) {
            a.id = generated_arc_id(k, reader.ids);
            reader.ids.insert(a.id);
        }
        if (!a.extras.empty()) reader.doc.node_extras[a.id] = a.extras;
        const std::string where = "arc '" + a.id + "'";
        for (const auto& end : {a.source, a.target}) {
            if (!by_id.count(end)) {
                throw PnmlError(PnmlErrorCode::DanglingArc, where, "endpoint '" + end + "' is not a declared node");
            }
        }
        const auto* s = by_id[a.source];
        const auto* t = by_id[a.target];
        if (s->page != a.page || t->page != a.page) {
            throw PnmlError(PnmlErrorCode::UnsupportedFeature, where, "arc crosses page boundaries");
        }
    }

    std::vector<NodeInfo> places;
    std::vector<NodeInfo> transitions;
    std::map<std::string, int> marking;
    for (const auto& n : reader.nodes) {
        if (n.is_place) {
            places.push_back(NodeInfo{n.id, n.label});
            marking[n.id] = n.tokens;
        } else {
            transitions.push_back(NodeInfo{n.id, n.label});
        }
    }
    std::vector<ArcSpec> specs;
    for (const auto& a : reader.arcs) {
        specs.push_back({a.source, a.target, 1});
        reader.doc.arc_ids.push_back(a.id);
    }
    try {
        reader.doc.net = build_net(std::move(places), std::move(transitions), specs, marking);
    } catch (const NetError& e) {
        const auto code = e.code() == ErrorCode::DuplicateId   ? PnmlErrorCode::DuplicateId
                          : e.code() == ErrorCode::DanglingArc ? PnmlErrorCode::DanglingArc
                                                               : PnmlErrorCode::MalformedDocument;
        throw PnmlError(code, "net '" + reader.doc.net_id + "'", e.what());
    }
    return std::move(reader.doc);
}

PetriNet parse_pnml(std::string_view text) {
    return parse_pnml_document(text).net;
}

PnmlDocument read_pnml_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw PnmlError(PnmlErrorCode::Unreadable, path, "cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_pnml_document(buffer.str());
    } catch (const PnmlError& e) {
        throw PnmlError(e.code(), path + ": " + e.location(), e.detail());
    }
}

// ---------------------------------------------------------------------------

std::string write_pnml(const PnmlDocument& doc) {
    const auto& net = doc.net;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<pnml xmlns=\"" + std::string(kPnmlNamespace) + "\">\n";
    out += "  <net id=\"" + escape(doc.net_id, true) + "\" type=\"" + escape(doc.net_type_uri, true) + "\">\n";
    if (doc.net_name) emit_text_label(out, "name", *doc.net_name, 2);
    for (const auto& x : doc.net_extras) emit_fragment(out, x, 2);
    out += "    <page id=\"" + escape(doc.page_id, true) + "\">\n";
    for (const auto& x : doc.page_extras) emit_fragment(out, x, 3);

    auto extras_of = [&](const std::string& id) {
        auto it = doc.node_extras.find(id);
        return it == doc.node_extras.end() ? std::vector<std::string>{} : it->second;
    };
    auto emit_node = [&](const std::string& tag, const NodeInfo& node, bool marked) {
        const auto extras = extras_of(node.id);
        if (!node.label && !marked && extras.empty()) {
            out += "      <" + tag + " id=\"" + escape(node.id, true) + "\"/>\n";
            return;
        }
        out += "      <" + tag + " id=\"" + escape(node.id, true) + "\">\n";
        if (node.label) emit_text_label(out, "name", *node.label, 4);
        if (marked) emit_text_label(out, "initialMarking", "1", 4);
        for (const auto& x : extras) emit_fragment(out, x, 4);
        out += "      </" + tag + ">\n";
    };
    for (std::uint32_t i = 0; i < net.place_count(); ++i) {
        emit_node("place", net.place(PlaceIndex{i}), net.initial_marking().marked(PlaceIndex{i}));
    }
    for (std::uint32_t i = 0; i < net.transition_count(); ++i) {
        emit_node("transition", net.transition(TransitionIndex{i}), false);
    }
    std::set<std::string> taken(doc.arc_ids.begin(), doc.arc_ids.end());
    taken.insert(doc.net_id);
    taken.insert(doc.page_id);
    for (const auto& p : net.places()) taken.insert(p.id);
    for (const auto& t : net.transitions()) taken.insert(t.id);
    for (std::size_t k = 0; k < net.arc_count(); ++k) {
        const auto& a = net.arcs()[k];
        const std::string id =
            k < doc.arc_ids.size() && !doc.arc_ids[k].empty() ? doc.arc_ids[k] : generated_arc_id(k, taken);
        const std::string head = "      <arc id=\"" + escape(id, true) + "\" source=\"" +
                                 escape(net.id_of(a.source), true) + "\" target=\"" +
                                 escape(net.id_of(a.target), true) + "\"";
        const auto extras = extras_of(id);
        if (extras.empty()) {
            out += head + "/>\n";
            continue;
        }
        out += head + ">\n";
        for (const auto& x : extras) emit_fragment(out, x, 4);
        out += "      </arc>\n";
    }
    out += "    </page>\n";
    out += "  </net>\n";
    out += "</pnml>\n";
    return out;
}

std::string write_pnml(const PetriNet& net, const std::string& net_id) {
    PnmlDocument doc;
    doc.net_id = net_id;
    doc.net = net;
    return write_pnml(doc);
}

bool isomorphic(const PetriNet& a, const PetriNet& b) {
    auto nodes = [](const std::vector<NodeInfo>& xs) {
        std::set<std::pair<std::string, std::optional<std::string>>> out;
        for (const auto& x : xs) out.emplace(x.id, x.label);
        return out;
    };
    auto arcs = [](const PetriNet& n) {
        std::set<std::pair<std::string, std::string>> out;
        for (const auto& x : n.arcs()) out.emplace(n.id_of(x.source), n.id_of(x.target));
        return out;
    };
    auto marked = [](const PetriNet& n) {
        std::set<std::string> out;
        for (auto p : n.initial_marking().marked_places()) out.insert(n.place(p).id);
        return out;
    };
    return nodes(a.places()) == nodes(b.places()) && nodes(a.transitions()) == nodes(b.transitions()) &&
           arcs(a) == arcs(b) && marked(a) == marked(b);
}

}  // namespace petri
