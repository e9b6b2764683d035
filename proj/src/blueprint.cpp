#include "fincot/blueprint.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <set>

#include "fincot/util.hpp"

namespace fincot::blueprint {

namespace fs = std::filesystem;

ValidationReport validate_blueprint(const Blueprint& bp) {
    ValidationReport report;
    const MermaidGraph& g = bp.graph;

    if (g.nodes.empty()) {
        report.errors.push_back("empty graph");
        return report;
    }

    // Dangling endpoints are impossible after parsing; assert anyway.
    for (const auto& edge : g.edges) {
        if (!g.nodes.contains(edge.from) || !g.nodes.contains(edge.to)) {
            report.errors.push_back("dangling edge endpoint: " + edge.from + " --> " + edge.to);
        }
    }

    // Unreachable from the first declared node is a warning, not an error:
    // some blueprints legitimately have multiple roots.
    std::set<std::string> reached;
    std::deque<std::string> frontier{g.first_node()};
    reached.insert(g.first_node());
    while (!frontier.empty()) {
        std::string current = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& edge : g.edges) {
            if (edge.from == current && reached.insert(edge.to).second) {
                frontier.push_back(edge.to);
            }
        }
    }
    for (const auto& id : g.declaration_order) {
        if (!reached.contains(id)) report.unreachable_nodes.push_back(id);
    }
    if (!report.unreachable_nodes.empty()) {
        std::string msg = "nodes unreachable from '" + g.first_node() + "':";
        for (const auto& id : report.unreachable_nodes) msg += " " + id;
        report.warnings.push_back(msg);
    }
    return report;
}

std::string render_hint(const Blueprint& bp) {
    return "***" + bp.title + ":*** \n```mermaid\n" + bp.mermaid_source + "\n```";
}

std::string strip_hint(const std::string& hint) {
    auto lines_end = hint.find('\n');
    if (lines_end == std::string::npos || !util::starts_with(hint, "***")) {
        throw std::runtime_error("not a hint payload: missing ***title:*** line");
    }
    std::string rest = hint.substr(lines_end + 1);
    const std::string open = "```mermaid\n";
    if (!util::starts_with(rest, open)) {
        throw std::runtime_error("not a hint payload: missing ```mermaid fence");
    }
    rest.erase(0, open.size());
    const std::string close = "\n```";
    if (rest.size() < close.size() || rest.compare(rest.size() - close.size(), close.size(), close) != 0) {
        throw std::runtime_error("not a hint payload: missing closing fence");
    }
    rest.erase(rest.size() - close.size());
    return rest;
}

DuplicateDomain::DuplicateDomain(DomainCode code)
    : RegistryError("duplicate blueprint domain: " + std::string(to_string(code))), domain_(code) {}

EthicsBlueprintRejected::EthicsBlueprintRejected(const std::string& file)
    : RegistryError("file '" + file + "' claims the Ethics domain; no Ethics blueprint exists") {}

ParseFailure::ParseFailure(const std::string& file, const std::string& detail)
    : RegistryError("failed to load blueprint '" + file + "': " + detail), file_(file) {}

void BlueprintRegistry::insert(Blueprint bp) {
    if (bp.domain == DomainCode::Ethics) {
        throw EthicsBlueprintRejected(bp.title);
    }
    auto [it, inserted] = entries_.try_emplace(bp.domain, std::move(bp));
    if (!inserted) throw DuplicateDomain(it->first);
}

const Blueprint* BlueprintRegistry::find(DomainCode code) const {
    auto it = entries_.find(code);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<const Blueprint*> BlueprintRegistry::in_fixed_order() const {
    std::vector<const Blueprint*> out;
    for (DomainCode code : kBlueprintDomains) {
        if (const Blueprint* bp = find(code)) out.push_back(bp);
    }
    return out;
}

Blueprint parse_blueprint_file(const std::string& path) {
    std::string content = util::read_file(path);
    auto lines = util::split_lines(content);
    if (lines.size() < 3) {
        throw ParseFailure(path, "expected 'domain:', 'title:', and '---' header lines");
    }
    if (!util::starts_with(lines[0], "domain: ")) {
        throw ParseFailure(path, "first line must be 'domain: <code>'");
    }
    if (!util::starts_with(lines[1], "title: ")) {
        throw ParseFailure(path, "second line must be 'title: <text>'");
    }
    if (util::trim(lines[2]) != "---") {
        throw ParseFailure(path, "third line must be '---'");
    }

    std::string code_text = std::string(util::trim(lines[0].substr(8)));
    auto code = domain_from_string(code_text);
    if (!code) {
        throw ParseFailure(path, "unknown domain code '" + code_text + "'");
    }
    if (*code == DomainCode::Ethics) {
        throw EthicsBlueprintRejected(path);
    }

    Blueprint bp;
    bp.domain = *code;
    bp.title = std::string(util::trim(lines[1].substr(7)));

    // Source is everything after the '---' line, minus the file's final newline.
    auto header_end = content.find("---");
    auto source_begin = content.find('\n', header_end);
    std::string source = source_begin == std::string::npos ? "" : content.substr(source_begin + 1);
    if (!source.empty() && source.back() == '\n') source.pop_back();
    bp.mermaid_source = std::move(source);

    try {
        bp.graph = parse_mermaid(bp.mermaid_source);
    } catch (const std::runtime_error& e) {
        throw ParseFailure(path, e.what());
    }
    return bp;
}

BlueprintRegistry load_registry(const std::string& dir) {
    BlueprintRegistry registry;
    if (!fs::exists(dir)) {
        throw RegistryError("blueprint directory does not exist: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename().string().starts_with('.')) continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        Blueprint bp = parse_blueprint_file(file.string());
        ValidationReport report = validate_blueprint(bp);
        if (!report.ok()) {
            throw ParseFailure(file.string(), "validation failed: " + report.errors.front());
        }
        registry.insert(std::move(bp));
    }
    return registry;
}

}  // namespace fincot::blueprint
