#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fincot/blueprint.hpp"
#include "fincot/mermaid.hpp"
#include "fincot/util.hpp"

using namespace fincot;
using blueprint::MermaidGraph;
using blueprint::NodeShape;

TEST_CASE("minimal two-node graph") {
    auto g = blueprint::parse_mermaid("graph TD\nA[Start] --> B[End]");
    REQUIRE(g.nodes.size() == 2);
    CHECK(g.nodes.at("A").label == "Start");
    CHECK(g.nodes.at("A").shape == NodeShape::Rectangle);
    CHECK(g.nodes.at("B").label == "End");
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].from == "A");
    CHECK(g.edges[0].to == "B");
    CHECK_FALSE(g.edges[0].label.has_value());
}

TEST_CASE("implicit declaration and cycles") {
    auto g = blueprint::parse_mermaid("graph TD\nA --> B\nB --> A");
    REQUIRE(g.nodes.size() == 2);
    CHECK(g.nodes.at("A").label.empty());
    CHECK(g.nodes.at("B").label.empty());
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0].from == "A");
    CHECK(g.edges[1].from == "B");
    CHECK(g.edges[1].to == "A");
}

TEST_CASE("economics blueprint parses to the hand-counted graph") {
    auto bp = blueprint::parse_blueprint_file("blueprints/economics.txt");
    // Hand parse of the shipped listing: ids A, A1-A4, B1-B3, C, D1, D2,
    // E, E1, E2, F, F1, F2 and one edge per `-->` occurrence.
    CHECK(bp.graph.nodes.size() == 17);
    CHECK(bp.graph.edges.size() == 20);

    CHECK(bp.graph.nodes.at("A1").shape == NodeShape::Decision);
    CHECK(bp.graph.nodes.at("A1").label == "Identify Topic");
    CHECK(bp.graph.nodes.at("E1").shape == NodeShape::Rounded);
    CHECK(bp.graph.nodes.at("A2").label.empty());  // implicitly declared

    CHECK(bp.graph.edges.front().label == "Extract key terms");
    CHECK(bp.graph.first_node() == "A");
}

TEST_CASE("edge labels survive opaque characters") {
    auto g = blueprint::parse_mermaid(
        "graph TD\n  A1 -->|Micro: Supply & Demand, Market Structures| A2");
    REQUIRE(g.edges.size() == 1);
    CHECK(*g.edges[0].label == "Micro: Supply & Demand, Market Structures");
}

TEST_CASE("spaced edge-label form and quoted node labels") {
    auto g = blueprint::parse_mermaid(
        "graph TD\n    A --> |Set objectives| B\n    C[\"Collecting Input Data\"] --> B");
    REQUIRE(g.edges.size() == 2);
    CHECK(*g.edges[0].label == "Set objectives");
    CHECK(g.nodes.at("C").label == "Collecting Input Data");
}

TEST_CASE("comments and blank lines are skipped") {
    auto g = blueprint::parse_mermaid("graph TD\n%% a comment\n\n   \nA --> B\n  %% also skipped");
    CHECK(g.edges.size() == 1);
}

TEST_CASE("header variants") {
    CHECK_NOTHROW(blueprint::parse_mermaid("graph TD;\nA --> B"));
    CHECK_NOTHROW(blueprint::parse_mermaid("graph TD\nA --> B"));
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph LR\nA --> B"), blueprint::UnsupportedDirective);
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TB\nA --> B"), blueprint::UnsupportedDirective);
    CHECK_THROWS_AS(blueprint::parse_mermaid("A --> B"), blueprint::SyntaxError);
    CHECK_THROWS_AS(blueprint::parse_mermaid(""), blueprint::SyntaxError);
}

TEST_CASE("malformed statements carry line numbers") {
    try {
        blueprint::parse_mermaid("graph TD\nA --> B\nA[unclosed --> C");
        FAIL("expected SyntaxError");
    } catch (const blueprint::SyntaxError& e) {
        CHECK(e.line() == 3);
    }

    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TD\nA -->|no close B"),
                    blueprint::SyntaxError);
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TD\nA --> "), blueprint::SyntaxError);
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TD\n[label] --> B"), blueprint::SyntaxError);
}

TEST_CASE("fan-out and chained statements are rejected") {
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TD\nA --> B & C"), blueprint::SyntaxError);
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TD\nA --> B --> C"), blueprint::SyntaxError);
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TD\nA & B --> C"), blueprint::SyntaxError);
}

TEST_CASE("conflicting redeclaration is an error, consistent one is not") {
    CHECK_THROWS_AS(blueprint::parse_mermaid("graph TD\nA[x] --> B\nA[y] --> B"),
                    blueprint::SyntaxError);
    CHECK_NOTHROW(blueprint::parse_mermaid("graph TD\nA[x] --> B\nA[x] --> C"));
    CHECK_NOTHROW(blueprint::parse_mermaid("graph TD\nA[x] --> B\nA --> C"));
}

TEST_CASE("every edge endpoint is a declared node across the corpus") {
    auto registry = blueprint::load_registry("blueprints");
    REQUIRE(registry.size() == 9);
    for (const auto& [code, bp] : registry.entries()) {
        for (const auto& edge : bp.graph.edges) {
            CHECK(bp.graph.nodes.contains(edge.from));
            CHECK(bp.graph.nodes.contains(edge.to));
        }
    }
}

TEST_CASE("parsing is stable: two parses agree on the whole corpus") {
    auto registry = blueprint::load_registry("blueprints");
    for (const auto& [code, bp] : registry.entries()) {
        auto again = blueprint::parse_mermaid(bp.mermaid_source);
        CHECK(again == bp.graph);
    }
}

namespace {

// Random graph generator over the supported grammar for round-trip checks.
MermaidGraph random_graph(util::SplitMix64& rng) {
    MermaidGraph g;
    std::size_t node_count = 1 + rng.next_below(8);
    const char* label_words[] = {"Assess", "Check", "Map", "Review", "Gather data",
                                 "Validate: step", "Rate & spread", "P/E, DCF"};
    for (std::size_t i = 0; i < node_count; ++i) {
        blueprint::NodeDecl decl;
        decl.id = "N" + std::to_string(i);
        if (rng.next_below(3) != 0) {
            decl.label = label_words[rng.next_below(8)];
            decl.shape = static_cast<NodeShape>(rng.next_below(3));
        }
        g.nodes[decl.id] = decl;
        g.declaration_order.push_back(decl.id);
    }
    std::size_t edge_count = rng.next_below(12);
    for (std::size_t i = 0; i < edge_count; ++i) {
        blueprint::EdgeDecl edge;
        edge.from = "N" + std::to_string(rng.next_below(node_count));
        edge.to = "N" + std::to_string(rng.next_below(node_count));
        if (rng.next_below(2) == 0) edge.label = label_words[rng.next_below(8)];
        g.edges.push_back(edge);
    }
    return g;
}

}  // namespace

TEST_CASE("property: serialize-parse round trip on random graphs") {
    util::SplitMix64 rng(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        MermaidGraph g = random_graph(rng);
        auto text = blueprint::serialize(g);
        MermaidGraph reparsed = blueprint::parse_mermaid(text);
        // Node set and edge sequence must survive; declaration order may
        // legally differ (serializer lists labeled nodes first).
        CHECK(reparsed.nodes == g.nodes);
        CHECK(reparsed.edges == g.edges);
    }
}
