#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fincot/domain.hpp"
#include "fincot/mermaid.hpp"

namespace fincot::blueprint {

// One expert reasoning blueprint: a domain-tagged Mermaid flowchart used as
// "Hint" content in assembled prompts.
struct Blueprint {
    DomainCode domain;
    std::string title;
    std::string mermaid_source;  // verbatim, fenced block excluded
    MermaidGraph graph;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    std::vector<std::string> unreachable_nodes;

    bool ok() const { return errors.empty(); }
};

ValidationReport validate_blueprint(const Blueprint& bp);

// Hint payload: a `***<Domain Title>:***` header line followed by a fenced
// ```mermaid block containing the source verbatim.
std::string render_hint(const Blueprint& bp);

// Inverse of render_hint: drops the title line and the fences, returning the
// raw source. Throws std::runtime_error if the text is not in hint format.
std::string strip_hint(const std::string& hint);

class RegistryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DuplicateDomain : public RegistryError {
  public:
    explicit DuplicateDomain(DomainCode code);
    DomainCode domain() const { return domain_; }

  private:
    DomainCode domain_;
};

class EthicsBlueprintRejected : public RegistryError {
  public:
    explicit EthicsBlueprintRejected(const std::string& file);
};

class ParseFailure : public RegistryError {
  public:
    ParseFailure(const std::string& file, const std::string& detail);
    const std::string& file() const { return file_; }

  private:
    std::string file_;
};

// Immutable after load; safe to share across threads.
class BlueprintRegistry {
  public:
    void insert(Blueprint bp);  // throws DuplicateDomain / EthicsBlueprintRejected

    const Blueprint* find(DomainCode code) const;
    bool contains(DomainCode code) const { return find(code) != nullptr; }
    std::size_t size() const { return entries_.size(); }

    // Entries in the fixed all-blueprints concatenation order.
    std::vector<const Blueprint*> in_fixed_order() const;

    const std::map<DomainCode, Blueprint>& entries() const { return entries_; }

  private:
    std::map<DomainCode, Blueprint> entries_;
};

// Parses one blueprint file: `domain:` line, `title:` line, `---` separator,
// then the raw Mermaid source.
Blueprint parse_blueprint_file(const std::string& path);

BlueprintRegistry load_registry(const std::string& dir);

}  // namespace fincot::blueprint
