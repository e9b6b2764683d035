#include "fincot/mermaid.hpp"

#include <cctype>

#include "fincot/util.hpp"

namespace fincot::blueprint {

namespace {

bool is_id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

char closing_for(char open) {
    switch (open) {
    case '[': return ']';
    case '{': return '}';
    case '(': return ')';
    default: return '\0';
    }
}

NodeShape shape_for(char open) {
    switch (open) {
    case '[': return NodeShape::Rectangle;
    case '{': return NodeShape::Decision;
    default: return NodeShape::Rounded;
    }
}

struct NodeRef {
    std::string id;
    std::optional<std::string> label;
    NodeShape shape = NodeShape::Rectangle;
};

// Parses one node reference at the front of `text`; advances `pos`.
NodeRef parse_node_ref(std::string_view text, std::size_t& pos, int line_no) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t id_begin = pos;
    while (pos < text.size() && is_id_char(text[pos])) ++pos;
    if (pos == id_begin) {
        throw SyntaxError(line_no, "expected node id");
    }
    NodeRef ref;
    ref.id = std::string(text.substr(id_begin, pos - id_begin));
    if (pos < text.size() && closing_for(text[pos]) != '\0') {
        char open = text[pos];
        char close = closing_for(open);
        ref.shape = shape_for(open);
        ++pos;
        std::string label;
        if (pos < text.size() && text[pos] == '"') {
            ++pos;
            auto end_quote = text.find('"', pos);
            if (end_quote == std::string_view::npos) {
                throw SyntaxError(line_no, "unterminated quoted label");
            }
            label = std::string(text.substr(pos, end_quote - pos));
            pos = end_quote + 1;
            if (pos >= text.size() || text[pos] != close) {
                throw SyntaxError(line_no, std::string("expected '") + close + "' after quoted label");
            }
            ++pos;
        } else {
            auto end = text.find(close, pos);
            if (end == std::string_view::npos) {
                throw SyntaxError(line_no, std::string("unterminated '") + open + "' label");
            }
            label = std::string(text.substr(pos, end - pos));
            pos = end + 1;
        }
        ref.label = std::move(label);
    }
    return ref;
}

void expect_line_end(std::string_view text, std::size_t pos, int line_no) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size()) {
        if (text[pos] == '&') {
            throw SyntaxError(line_no, "'&' fan-out syntax is not supported");
        }
        throw SyntaxError(line_no, "unexpected trailing text: '" + std::string(text.substr(pos)) + "'");
    }
}

class GraphBuilder {
  public:
    void touch(const NodeRef& ref, int line_no) {
        auto [it, inserted] = graph_.nodes.try_emplace(ref.id);
        if (inserted) {
            it->second.id = ref.id;
            graph_.declaration_order.push_back(ref.id);
        }
        if (!ref.label.has_value()) return;  // bare reference never changes a decl
        NodeDecl& decl = it->second;
        if (decl.label.empty()) {
            decl.label = *ref.label;
            decl.shape = ref.shape;
        } else if (decl.label != *ref.label || decl.shape != ref.shape) {
            throw SyntaxError(line_no, "conflicting redeclaration of node '" + ref.id + "'");
        }
    }

    void add_edge(const NodeRef& from, const NodeRef& to, std::optional<std::string> label,
                  int line_no) {
        touch(from, line_no);
        touch(to, line_no);
        graph_.edges.push_back({from.id, to.id, std::move(label)});
    }

    MermaidGraph take() { return std::move(graph_); }

  private:
    MermaidGraph graph_;
};

constexpr std::string_view kArrow = "-->";

}  // namespace

SyntaxError::SyntaxError(int line, std::string reason)
    : std::runtime_error("mermaid syntax error at line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(std::move(reason)) {}

UnsupportedDirective::UnsupportedDirective(int line, std::string direction)
    : std::runtime_error("unsupported flowchart direction '" + direction + "' at line " +
                         std::to_string(line) + " (only TD is supported)"),
      line_(line),
      direction_(std::move(direction)) {}

MermaidGraph parse_mermaid(const std::string& source) {
    auto lines = util::split_lines(source);
    GraphBuilder builder;
    bool header_seen = false;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        std::string_view line = util::trim(lines[i]);
        if (line.empty() || util::starts_with(line, "%%")) continue;

        if (!header_seen) {
            if (!util::starts_with(line, "graph")) {
                throw SyntaxError(line_no, "expected 'graph TD' header");
            }
            std::string_view rest = util::trim(line.substr(5));
            if (!rest.empty() && rest.back() == ';') rest = util::trim(rest.substr(0, rest.size() - 1));
            if (rest.empty()) throw SyntaxError(line_no, "missing flowchart direction");
            if (rest != "TD") throw UnsupportedDirective(line_no, std::string(rest));
            header_seen = true;
            continue;
        }

        auto first_arrow = line.find(kArrow);
        if (first_arrow == std::string_view::npos) {
            // standalone node declaration
            std::size_t pos = 0;
            NodeRef ref = parse_node_ref(line, pos, line_no);
            expect_line_end(line, pos, line_no);
            builder.touch(ref, line_no);
            continue;
        }
        if (line.find(kArrow, first_arrow + kArrow.size()) != std::string_view::npos) {
            throw SyntaxError(line_no, "one edge per line (chained or multi-target edges are not supported)");
        }

        std::size_t pos = 0;
        NodeRef from = parse_node_ref(line.substr(0, first_arrow), pos, line_no);
        expect_line_end(line.substr(0, first_arrow), pos, line_no);

        std::string_view rhs = line.substr(first_arrow + kArrow.size());
        std::size_t rpos = 0;
        while (rpos < rhs.size() && std::isspace(static_cast<unsigned char>(rhs[rpos]))) ++rpos;
        std::optional<std::string> edge_label;
        if (rpos < rhs.size() && rhs[rpos] == '|') {
            ++rpos;
            auto end = rhs.find('|', rpos);
            if (end == std::string_view::npos) {
                throw SyntaxError(line_no, "unterminated edge label");
            }
            edge_label = std::string(rhs.substr(rpos, end - rpos));
            rpos = end + 1;
        }
        NodeRef to = parse_node_ref(rhs, rpos, line_no);
        expect_line_end(rhs, rpos, line_no);
        builder.add_edge(from, to, std::move(edge_label), line_no);
    }

    if (!header_seen) {
        throw SyntaxError(1, "expected 'graph TD' header");
    }
    return builder.take();
}

std::string serialize(const MermaidGraph& graph) {
    std::string out = "graph TD\n";
    auto in_some_edge = [&graph](const std::string& id) {
        for (const auto& e : graph.edges) {
            if (e.from == id || e.to == id) return true;
        }
        return false;
    };
    for (const auto& id : graph.declaration_order) {
        const NodeDecl& decl = graph.nodes.at(id);
        if (decl.label.empty()) {
            if (!in_some_edge(id)) out += "    " + id + "\n";
            continue;
        }
        char open = decl.shape == NodeShape::Rectangle ? '['
                  : decl.shape == NodeShape::Decision  ? '{'
                                                       : '(';
        out += "    " + decl.id + open + "\"" + decl.label + "\"" + closing_for(open) + "\n";
    }
    for (const auto& edge : graph.edges) {
        out += "    " + edge.from + " -->";
        if (edge.label) out += "|" + *edge.label + "|";
        out += " " + edge.to + "\n";
    }
    return out;
}

}  // namespace fincot::blueprint
