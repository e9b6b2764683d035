#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fincot::blueprint {

// Flowchart grammar subset: `graph TD` direction, node shapes [..] {..} (..),
// quoted labels ["..."], edges `-->` and `-->|label|`, `%%` line comments,
// one statement per line. Multi-target lines and `&` fan-out are rejected.

enum class NodeShape { Rectangle, Decision, Rounded };

struct NodeDecl {
    std::string id;
    std::string label;  // empty for implicitly declared bare ids
    NodeShape shape = NodeShape::Rectangle;

    bool operator==(const NodeDecl&) const = default;
};

struct EdgeDecl {
    std::string from;
    std::string to;
    std::optional<std::string> label;

    bool operator==(const EdgeDecl&) const = default;
};

struct MermaidGraph {
    // Nodes keyed by id; declaration_order records first appearance so that
    // reachability checks can anchor on the first declared node.
    std::map<std::string, NodeDecl> nodes;
    std::vector<std::string> declaration_order;
    std::vector<EdgeDecl> edges;  // source order

    const std::string& first_node() const { return declaration_order.front(); }

    bool operator==(const MermaidGraph& other) const {
        return nodes == other.nodes && edges == other.edges;
    }
};

class SyntaxError : public std::runtime_error {
  public:
    SyntaxError(int line, std::string reason);
    int line() const { return line_; }
    const std::string& reason() const { return reason_; }

  private:
    int line_;
    std::string reason_;
};

class UnsupportedDirective : public std::runtime_error {
  public:
    UnsupportedDirective(int line, std::string direction);
    int line() const { return line_; }
    const std::string& direction() const { return direction_; }

  private:
    int line_;
    std::string direction_;
};

MermaidGraph parse_mermaid(const std::string& source);

// Canonical one-statement-per-line rendering of a graph. Not byte-faithful to
// any particular input; parse(serialize(g)) == g.
std::string serialize(const MermaidGraph& graph);

}  // namespace fincot::blueprint
