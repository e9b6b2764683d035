#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "fincot/routing.hpp"
#include "fincot/util.hpp"
#include "test_helpers.hpp"

using namespace fincot;

namespace {

prompting::McqItem make_item(std::string id, std::string question) {
    prompting::McqItem item;
    item.id = std::move(id);
    item.question = std::move(question);
    item.gold = AnswerLetter::A;
    return item;
}

// Replies with garbage for questions carrying the [FAIL] marker and counts
// every call; otherwise delegates to the rule-based mock.
class FlakyClassifier : public inference::ChatClient {
  public:
    inference::ModelResponse complete(const std::string& system, const std::string& user,
                                      const inference::GenerationParams& params) override {
        ++calls;
        if (user.find("[FAIL]") != std::string::npos) {
            inference::ModelResponse resp;
            resp.content = "no idea, sorry";
            return resp;
        }
        return inner_.complete(system, user, params);
    }
    int calls = 0;

  private:
    routing::RuleBasedClassifierMock inner_;
};

}  // namespace

TEST_CASE("parse_domain_code round-trips every code") {
    for (DomainCode code : kAllDomains) {
        CHECK(routing::parse_domain_code(std::string(to_string(code))) == code);
    }
}

TEST_CASE("parse_domain_code trims whitespace and trailing punctuation") {
    CHECK(routing::parse_domain_code("  Ethics \n") == DomainCode::Ethics);
    CHECK(routing::parse_domain_code("Port.Manage.") == DomainCode::PortManage);
    CHECK(routing::parse_domain_code("Economics.") == DomainCode::Economics);
    CHECK(routing::parse_domain_code("Quant.Meth.,") == DomainCode::QuantMeth);
}

TEST_CASE("parse_domain_code stays strict") {
    CHECK_THROWS_AS(routing::parse_domain_code("Portfolio Management"),
                    routing::UnrecognizedCode);
    CHECK_THROWS_AS(routing::parse_domain_code("ethics"), routing::UnrecognizedCode);
    CHECK_THROWS_AS(routing::parse_domain_code("Port.Manage"), routing::UnrecognizedCode);
    CHECK_THROWS_AS(routing::parse_domain_code(""), routing::UnrecognizedCode);
}

TEST_CASE("rule-based mock routes a duration/convexity question to fixed income") {
    auto templates = prompting::PromptTemplates::load("templates");
    routing::RuleBasedClassifierMock mock;
    auto item = make_item("q1",
                          "A bond's duration and convexity together approximate the price "
                          "response to a yield change. Which estimate improves?");
    CHECK(routing::classify_domain(item, mock, templates) == DomainCode::FixedIncome);
}

TEST_CASE("verbatim classifier replies parse directly") {
    auto templates = prompting::PromptTemplates::load("templates");
    inference::FixedResponseMock mock("Economics");
    auto item = make_item("q1", "anything");
    CHECK(routing::classify_domain(item, mock, templates) == DomainCode::Economics);
}

TEST_CASE("chatty classifier replies fail after one retry") {
    auto templates = prompting::PromptTemplates::load("templates");
    inference::FixedResponseMock mock("I think it is Ethics");
    auto item = make_item("q1", "anything");
    CHECK_THROWS_AS(routing::classify_domain(item, mock, templates),
                    routing::ClassificationFailed);
}

TEST_CASE("classification sends the verbatim instruction and retries with a suffix") {
    auto templates = prompting::PromptTemplates::load("templates");

    class Recorder : public inference::ChatClient {
      public:
        std::vector<std::string> systems;
        std::vector<std::string> users;
        inference::ModelResponse complete(const std::string& system, const std::string& user,
                                          const inference::GenerationParams&) override {
            systems.push_back(system);
            users.push_back(user);
            inference::ModelResponse resp;
            resp.content = systems.size() == 1 ? "hmm" : "Derivatives";
            return resp;
        }
    } recorder;

    auto item = make_item("q1", "What is a swap?");
    CHECK(routing::classify_domain(item, recorder, templates) == DomainCode::Derivatives);
    REQUIRE(recorder.systems.size() == 2);
    CHECK(recorder.systems[0] == templates.classification_prompt());
    CHECK(recorder.users[0] == "What is a swap?");
    CHECK(recorder.users[1].find("Respond with only the category code.") != std::string::npos);
}

TEST_CASE("label_dataset classifies, caches, and is idempotent") {
    testutil::TempDir dir("labels");
    std::string cache_path = dir.str() + "/labels.jsonl";
    auto templates = prompting::PromptTemplates::load("templates");

    std::vector<prompting::McqItem> items = {
        make_item("a", "Options and futures hedge equity exposure."),
        make_item("b", "The balance sheet and income statement reconcile."),
        make_item("c", "Asset allocation and rebalancing rules for a portfolio."),
    };

    auto cache = routing::DomainLabelCache::load(cache_path);
    routing::RuleBasedClassifierMock mock;
    auto report = routing::label_dataset(items, mock, templates, cache_path, cache);
    CHECK(report.classified == 3);
    CHECK(report.cached == 0);
    CHECK(report.failed_ids.empty());
    CHECK(cache.entries.at("a") == DomainCode::Derivatives);
    CHECK(cache.entries.at("b") == DomainCode::FinReporting);
    CHECK(cache.entries.at("c") == DomainCode::PortManage);

    // reload from disk; a second run issues zero classifier calls
    auto reloaded = routing::DomainLabelCache::load(cache_path);
    CHECK(reloaded.entries == cache.entries);
    FlakyClassifier counting;
    auto second = routing::label_dataset(items, counting, templates, cache_path, reloaded);
    CHECK(second.classified == 0);
    CHECK(second.cached == 3);
    CHECK(counting.calls == 0);
}

TEST_CASE("label_dataset reports partial failures without corrupting the cache") {
    testutil::TempDir dir("labels_fail");
    std::string cache_path = dir.str() + "/labels.jsonl";
    auto templates = prompting::PromptTemplates::load("templates");

    std::vector<prompting::McqItem> items;
    items.push_back(make_item("bad1", "Unanswerable question one. [FAIL]"));
    for (int i = 0; i < 8; ++i) {
        items.push_back(make_item("ok" + std::to_string(i),
                                  "Bond duration and yield curve question " + std::to_string(i)));
    }
    items.push_back(make_item("bad2", "Unanswerable question two. [FAIL]"));

    FlakyClassifier flaky;
    auto cache = routing::DomainLabelCache::load(cache_path);
    auto report = routing::label_dataset(items, flaky, templates, cache_path, cache);
    CHECK(report.classified == 8);
    REQUIRE(report.failed_ids.size() == 2);

    auto lines = util::split_lines(util::read_file(cache_path));
    std::size_t nonempty = 0;
    for (const auto& line : lines) {
        if (!util::trim(line).empty()) ++nonempty;
    }
    CHECK(nonempty == 8);
}

TEST_CASE("loading a missing cache file yields an empty cache") {
    auto cache = routing::DomainLabelCache::load("/nonexistent/labels.jsonl");
    CHECK(cache.entries.empty());
}
