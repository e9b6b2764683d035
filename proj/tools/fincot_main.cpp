// Batch evaluation harness for structured financial prompting: blueprint
// linting, dataset classification, benchmark runs with resume, significance
// testing, cost simulation, and report generation.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <memory>

#include "fincot/blueprint.hpp"
#include "fincot/costsim.hpp"
#include "fincot/dataset.hpp"
#include "fincot/report.hpp"
#include "fincot/runner.hpp"
#include "fincot/stats.hpp"
#include "fincot/util.hpp"

namespace {

using namespace fincot;

struct RunCliOptions {
    cli::RunConfig config;
    std::string strategies = "sp,ust_cot,st_cot,fincot";
    std::string fincot_domain = "all";
    std::string mock;
    std::string fixed_response;
    std::string base_url;
    int timeout_s = 120;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

std::vector<prompting::PromptStrategy> resolve_strategies(const std::string& csv,
                                                          const std::string& fincot_domain) {
    std::vector<prompting::PromptStrategy> strategies;
    auto add = [&strategies](prompting::PromptStrategy s) {
        for (const auto& existing : strategies) {
            if (existing == s) return;
        }
        strategies.push_back(s);
    };

    for (const auto& raw : util::split(csv, ',')) {
        std::string token(util::trim(raw));
        if (token.empty()) continue;
        if (token == "fincot") {
            if (fincot_domain == "all") {
                add(prompting::PromptStrategy::fincot(prompting::FinCotMode::all()));
            } else if (fincot_domain == "routed") {
                add(prompting::PromptStrategy::fincot(prompting::FinCotMode::routed()));
            } else if (fincot_domain == "sweep") {
                for (DomainCode code : kBlueprintDomains) {
                    add(prompting::PromptStrategy::fincot(prompting::FinCotMode::single(code)));
                }
            } else {
                auto code = domain_from_token(fincot_domain);
                if (!code) code = domain_from_string(fincot_domain);
                if (!code || *code == DomainCode::Ethics) {
                    throw CLI::ValidationError("--fincot-domain",
                                               "unknown blueprint domain '" + fincot_domain + "'");
                }
                add(prompting::PromptStrategy::fincot(prompting::FinCotMode::single(*code)));
            }
            continue;
        }
        auto strategy = prompting::PromptStrategy::from_id(token);
        if (!strategy) {
            throw CLI::ValidationError("--strategies", "unknown strategy '" + token + "'");
        }
        add(*strategy);
    }
    if (strategies.empty()) {
        throw CLI::ValidationError("--strategies", "at least one strategy is required");
    }
    return strategies;
}

std::unique_ptr<inference::ChatClient> make_client(const RunCliOptions& opts) {
    if (opts.mock == "answer_key") {
        std::map<std::string, AnswerLetter> key;
        for (const auto& item : cli::ingest_dataset(opts.config.dataset_path)) {
            key.emplace(item.question, item.gold);
        }
        return std::make_unique<inference::AnswerKeyMock>(std::move(key));
    }
    if (opts.mock == "random") {
        return std::make_unique<inference::SeededRandomMock>(opts.seed);
    }
    if (opts.mock == "fixed") {
        return std::make_unique<inference::FixedResponseMock>(opts.fixed_response);
    }
    if (!opts.mock.empty()) {
        throw CLI::ValidationError("--mock", "unknown mock backend '" + opts.mock + "'");
    }
    if (opts.base_url.empty()) {
        throw CLI::ValidationError("--base-url",
                                   "an endpoint is required unless --mock is given");
    }
    inference::HttpClientConfig http;
    http.base_url = opts.base_url;
    http.timeout_s = opts.timeout_s;
    return std::make_unique<inference::HttpChatClient>(http);
}

int cmd_run(RunCliOptions& opts) {
    opts.config.strategies = resolve_strategies(opts.strategies, opts.fincot_domain);
    if (opts.seed_set) opts.config.params.seed = opts.seed;
    auto client = make_client(opts);
    auto artifacts = cli::run(opts.config, *client);

    for (const auto& [strategy, summary] : artifacts.summaries) {
        std::cout << strategy << ": accuracy " << util::format_fixed(summary.accuracy_pct, 2)
                  << "% over " << summary.n << " items (avg in "
                  << util::format_fixed(summary.avg_input_k, 2) << "k, out "
                  << util::format_fixed(summary.avg_output_k, 2) << "k)\n";
    }
    std::cout << "requests: " << artifacts.new_requests << " new, " << artifacts.cache_hits
              << " cached; artifacts in " << artifacts.run_dir << "\n";
    if (!artifacts.failures.empty()) {
        std::cerr << artifacts.failures.size() << " item(s) failed; see " << artifacts.run_dir
                  << "/failures.jsonl\n";
        return 2;
    }
    return 0;
}

struct ClassifyOptions {
    std::string dataset;
    std::string out;
    std::string classifier = "mock";
    std::string base_url;
    std::string model = "gpt-4o";
    std::string template_dir = "templates";
    std::string dist_path;
    std::size_t audit_sample = 0;
    std::string audit_out;
    std::uint64_t seed = 0;
};

int cmd_classify(const ClassifyOptions& opts) {
    auto items = cli::ingest_dataset(opts.dataset);
    auto templates = prompting::PromptTemplates::load(opts.template_dir);

    std::unique_ptr<inference::ChatClient> classifier;
    if (opts.classifier == "mock") {
        classifier = std::make_unique<routing::RuleBasedClassifierMock>();
    } else if (opts.classifier == "http") {
        if (opts.base_url.empty()) {
            throw CLI::ValidationError("--base-url", "http classifier needs an endpoint");
        }
        inference::HttpClientConfig http;
        http.base_url = opts.base_url;
        classifier = std::make_unique<inference::HttpChatClient>(http);
    } else {
        throw CLI::ValidationError("--classifier", "expected 'mock' or 'http'");
    }

    auto cache = routing::DomainLabelCache::load(opts.out);
    auto report = routing::label_dataset(items, *classifier, templates, opts.out, cache);
    std::cout << "classified " << report.classified << " item(s), " << report.cached
              << " already cached, " << report.failed_ids.size() << " failed\n";
    for (const auto& id : report.failed_ids) std::cerr << "failed: " << id << "\n";

    if (!opts.dist_path.empty()) {
        std::map<std::string, std::size_t> distribution;
        for (const auto& [id, code] : cache.entries) {
            distribution[std::string(to_string(code))]++;
        }
        std::string csv = "domain,count\n";
        for (const auto& [code, count] : distribution) {
            csv += util::csv_row({code, std::to_string(count)}) + "\n";
        }
        util::write_file(opts.dist_path, csv);
        std::cout << "domain distribution written to " << opts.dist_path << "\n";
    }

    if (opts.audit_sample > 0) {
        // random sample of labeled items for external human review
        std::string out = opts.audit_out.empty() ? opts.out + ".audit.jsonl" : opts.audit_out;
        std::vector<const prompting::McqItem*> labeled;
        for (const auto& item : items) {
            if (cache.entries.contains(item.id)) labeled.push_back(&item);
        }
        util::SplitMix64 rng(opts.seed);
        for (std::size_t i = labeled.size(); i > 1; --i) {
            std::swap(labeled[i - 1], labeled[rng.next_below(i)]);
        }
        std::string sample;
        for (std::size_t i = 0; i < std::min(opts.audit_sample, labeled.size()); ++i) {
            sample += "{\"id\": \"" + labeled[i]->id + "\", \"domain\": \"" +
                      std::string(to_string(cache.entries.at(labeled[i]->id))) + "\"}\n";
        }
        util::write_file(out, sample);
        std::cout << "audit sample written to " << out << "\n";
    }
    return report.failed_ids.empty() ? 0 : 2;
}

struct CompareOptions {
    std::string a_path;
    std::string b_path;
    int bootstrap = 10000;
    std::uint64_t seed = 42;
    bool clamp_p = false;
    std::string out;
};

int cmd_stats_compare(const CompareOptions& opts) {
    auto a = evaluation::read_results_jsonl(opts.a_path);
    auto b = evaluation::read_results_jsonl(opts.b_path);
    if (a.empty() || b.empty()) throw std::runtime_error("both result files must be nonempty");
    auto [va, vb] = stats::paired_correctness(a, b);
    stats::BootstrapConfig cfg;
    cfg.resamples = opts.bootstrap;
    cfg.seed = opts.seed;
    cfg.clamp_p = opts.clamp_p;
    auto result = stats::paired_bootstrap(va, vb, cfg);

    std::string csv = "model,baseline,comparison,delta_pp,ci_low_pp,ci_high_pp,p_value,significant\n";
    csv += util::csv_row({a.front().model, b.front().strategy, a.front().strategy,
                          util::format_fixed(result.delta_pp, 2),
                          util::format_fixed(result.ci_low_pp, 2),
                          util::format_fixed(result.ci_high_pp, 2),
                          util::format_fixed(result.p_value, 4),
                          result.significant ? "yes" : "no"}) +
           "\n";
    if (opts.out.empty()) {
        std::cout << csv;
    } else {
        util::write_file(opts.out, csv);
        std::cout << "comparison written to " << opts.out << "\n";
    }
    return 0;
}

struct SimulateOptions {
    std::string pricing = "fixtures/pricing.conf";
    std::string profile = "all";
    std::string fixtures = "fixtures/token_tables.csv";
    std::string out = "curve.csv";
    std::string baseline = "sp";
    std::string candidates = "ust_cot,st_cot,fincot_all";
    std::string model = "all";
    std::string reuse_counts = "2,5,10,50,100";
    bool pooled = false;
};

int cmd_simulate(const SimulateOptions& opts) {
    auto profiles = costsim::load_pricing(opts.pricing);
    auto table = costsim::TokenTable::from_csv(opts.fixtures);

    std::vector<int> ks;
    for (const auto& k : util::split(opts.reuse_counts, ',')) {
        ks.push_back(std::stoi(std::string(util::trim(k))));
    }

    std::vector<double> grid;
    for (const auto& [name, pm] : profiles) {
        if (opts.profile != "all" && name != opts.profile) continue;
        auto part = costsim::ratio_grid(pm, ks);
        grid.insert(grid.end(), part.begin(), part.end());
    }
    if (grid.empty()) {
        throw CLI::ValidationError("--profile", "no pricing profile named '" + opts.profile + "'");
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-12; }),
               grid.end());

    std::vector<std::string> models;
    if (opts.pooled) models.push_back("pooled");
    else if (opts.model == "all") models = table.models();
    else models.push_back(opts.model);

    auto profile_for = [&](const std::string& strategy,
                           const std::string& model) -> std::optional<costsim::TokenProfile> {
        if (opts.pooled) return table.pooled(strategy);
        return table.find(strategy, model);
    };

    std::string curve_csv = "model,baseline,candidate,r,cost_baseline,cost_candidate,efficiency\n";
    std::string breakeven = "model,baseline,candidate,break_even_r,dominated\n";
    for (const auto& model : models) {
        auto base = profile_for(opts.baseline, model);
        if (!base) continue;
        for (const auto& raw : util::split(opts.candidates, ',')) {
            std::string candidate(util::trim(raw));
            auto cand = profile_for(candidate, model);
            if (!cand) continue;
            for (const auto& point : costsim::efficiency_curve(*base, *cand, grid)) {
                curve_csv += util::csv_row({model, opts.baseline, candidate,
                                            util::format_fixed(point.r, 4),
                                            util::format_fixed(point.cost_baseline, 4),
                                            util::format_fixed(point.cost_candidate, 4),
                                            util::format_fixed(point.efficiency, 4)}) +
                             "\n";
            }
            auto r_star = costsim::break_even(*base, *cand);
            breakeven += util::csv_row({model, opts.baseline, candidate,
                                        r_star ? util::format_fixed(*r_star, 4) : "",
                                        r_star && *r_star < 0 ? "yes" : "no"}) +
                         "\n";
        }
    }
    util::write_file(opts.out, curve_csv);
    std::string breakeven_path = opts.out + ".breakeven.csv";
    util::write_file(breakeven_path, breakeven);
    std::cout << "efficiency curves written to " << opts.out << " (break-even table: "
              << breakeven_path << ")\n";
    return 0;
}

struct ReportCliOptions {
    std::vector<std::string> run_dirs;
    std::string baseline = "sp";
    std::string out_dir = ".";
    bool with_stats = false;
    int bootstrap = 10000;
    std::uint64_t seed = 42;
};

int cmd_report(const ReportCliOptions& opts) {
    cli::ReportOptions options;
    options.baseline_strategy = opts.baseline;
    if (opts.with_stats) {
        options.bootstrap = stats::BootstrapConfig{.resamples = opts.bootstrap, .seed = opts.seed};
    }
    auto files = cli::build_report(opts.run_dirs, options);
    std::filesystem::create_directories(opts.out_dir);
    util::write_file(opts.out_dir + "/report.md", files.markdown);
    util::write_file(opts.out_dir + "/report.csv", files.csv);
    std::cout << "report written to " << opts.out_dir << "/report.md and report.csv\n";
    return 0;
}

int cmd_blueprint_lint(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir)) {
        std::cerr << "blueprint directory does not exist: " << dir << "\n";
        return 1;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    int errors = 0;
    std::set<DomainCode> seen;
    for (const auto& file : files) {
        try {
            auto bp = blueprint::parse_blueprint_file(file.string());
            auto report = blueprint::validate_blueprint(bp);
            if (!seen.insert(bp.domain).second) {
                std::cout << file.filename().string() << ": ERROR duplicate domain "
                          << to_string(bp.domain) << "\n";
                ++errors;
                continue;
            }
            std::cout << file.filename().string() << ": " << to_string(bp.domain) << " \""
                      << bp.title << "\" (" << bp.graph.nodes.size() << " nodes, "
                      << bp.graph.edges.size() << " edges)";
            if (!report.ok()) {
                std::cout << " ERRORS:";
                for (const auto& e : report.errors) std::cout << " " << e;
                ++errors;
            }
            for (const auto& w : report.warnings) std::cout << " [warning: " << w << "]";
            std::cout << "\n";
        } catch (const std::exception& e) {
            std::cout << file.filename().string() << ": ERROR " << e.what() << "\n";
            ++errors;
        }
    }
    std::cout << (errors == 0 ? "lint clean" : "lint found errors") << "\n";
    return errors == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured-prompting benchmark harness for CFA-style multiple choice"};
    app.set_config("--config", "", "read options from a key=value config file");
    app.require_subcommand(1);

    // run
    RunCliOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "execute strategies over a dataset");
    run_cmd->add_option("--dataset", run_opts.config.dataset_path, "JSONL dataset")->required();
    run_cmd->add_option("--blueprints", run_opts.config.blueprint_dir, "blueprint directory");
    run_cmd->add_option("--templates", run_opts.config.template_dir, "template directory");
    run_cmd->add_option("--labels", run_opts.config.label_cache_path, "domain label cache");
    run_cmd->add_option("--strategies", run_opts.strategies,
                        "comma list: sp,ust_cot,st_cot,fincot or explicit fincot_* ids");
    run_cmd->add_option("--fincot-domain", run_opts.fincot_domain,
                        "fincot mode: all, routed, sweep, or one domain token");
    run_cmd->add_option("--mock", run_opts.mock, "offline backend: answer_key, random, fixed");
    run_cmd->add_option("--fixed-response", run_opts.fixed_response,
                        "body returned by the fixed mock");
    run_cmd->add_option("--base-url", run_opts.base_url, "chat-completions endpoint base URL");
    run_cmd->add_option("--model", run_opts.config.params.model, "model name")->required();
    run_cmd->add_option("--temperature", run_opts.config.params.temperature, "sampling temperature");
    run_cmd->add_option("--max-tokens", run_opts.config.params.max_tokens,
                        "maximum generated tokens");
    run_cmd->add_option("--parallel", run_opts.config.parallel, "worker pool size");
    run_cmd->add_option("--timeout-s", run_opts.timeout_s, "per-request timeout");
    run_cmd->add_option("--seed", run_opts.seed, "generation / mock seed")
        ->each([&run_opts](const std::string&) { run_opts.seed_set = true; });
    run_cmd->add_option("--out", run_opts.config.output_dir, "output directory");

    // classify
    ClassifyOptions classify_opts;
    auto* classify_cmd = app.add_subcommand("classify", "label dataset items with domain codes");
    classify_cmd->add_option("--dataset", classify_opts.dataset, "JSONL dataset")->required();
    classify_cmd->add_option("--out", classify_opts.out, "label cache path")->required();
    classify_cmd->add_option("--classifier", classify_opts.classifier, "mock or http");
    classify_cmd->add_option("--base-url", classify_opts.base_url, "endpoint for http classifier");
    classify_cmd->add_option("--model", classify_opts.model, "classifier model name");
    classify_cmd->add_option("--templates", classify_opts.template_dir, "template directory");
    classify_cmd->add_option("--dist", classify_opts.dist_path, "write domain distribution CSV");
    classify_cmd->add_option("--audit-sample", classify_opts.audit_sample,
                             "emit a random labeled sample for manual review");
    classify_cmd->add_option("--audit-out", classify_opts.audit_out, "audit sample path");
    classify_cmd->add_option("--seed", classify_opts.seed, "audit sampling seed");

    // stats compare
    CompareOptions compare_opts;
    auto* stats_cmd = app.add_subcommand("stats", "statistical testing");
    auto* compare_cmd = stats_cmd->add_subcommand("compare", "paired bootstrap over two runs");
    compare_cmd->add_option("--a", compare_opts.a_path, "comparison results JSONL")->required();
    compare_cmd->add_option("--b", compare_opts.b_path, "baseline results JSONL")->required();
    compare_cmd->add_option("--bootstrap", compare_opts.bootstrap, "resample count B");
    compare_cmd->add_option("--seed", compare_opts.seed, "resampling seed");
    compare_cmd->add_flag("--clamp-p", compare_opts.clamp_p, "cap the two-sided p at 1");
    compare_cmd->add_option("--out", compare_opts.out, "write CSV here instead of stdout");

    // simulate
    SimulateOptions simulate_opts;
    auto* simulate_cmd = app.add_subcommand("simulate", "token cost-efficiency curves");
    simulate_cmd->add_option("--pricing", simulate_opts.pricing, "pricing profiles file");
    simulate_cmd->add_option("--profile", simulate_opts.profile, "profile name or 'all'");
    simulate_cmd->add_option("--fixtures", simulate_opts.fixtures, "token table CSV");
    simulate_cmd->add_option("--out", simulate_opts.out, "output curve CSV");
    simulate_cmd->add_option("--baseline", simulate_opts.baseline, "baseline strategy id");
    simulate_cmd->add_option("--candidates", simulate_opts.candidates,
                             "comma list of candidate strategy ids");
    simulate_cmd->add_option("--model", simulate_opts.model, "model id or 'all'");
    simulate_cmd->add_option("--k", simulate_opts.reuse_counts, "cache reuse counts");
    simulate_cmd->add_flag("--pooled", simulate_opts.pooled,
                           "average token profiles across models");

    // report
    ReportCliOptions report_opts;
    auto* report_cmd = app.add_subcommand("report", "markdown + CSV tables from run artifacts");
    report_cmd->add_option("--runs", report_opts.run_dirs, "run directories")->required();
    report_cmd->add_option("--baseline", report_opts.baseline, "baseline strategy id");
    report_cmd->add_option("--out", report_opts.out_dir, "output directory");
    report_cmd->add_flag("--stats", report_opts.with_stats, "add paired bootstrap columns");
    report_cmd->add_option("--bootstrap", report_opts.bootstrap, "resample count B");
    report_cmd->add_option("--seed", report_opts.seed, "resampling seed");

    // blueprint lint
    std::string lint_dir = "blueprints";
    auto* blueprint_cmd = app.add_subcommand("blueprint", "blueprint tooling");
    auto* lint_cmd = blueprint_cmd->add_subcommand("lint", "parse and validate a blueprint dir");
    lint_cmd->add_option("--blueprints", lint_dir, "blueprint directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(run_opts);
        if (*classify_cmd) return cmd_classify(classify_opts);
        if (*stats_cmd && *compare_cmd) return cmd_stats_compare(compare_opts);
        if (*simulate_cmd) return cmd_simulate(simulate_opts);
        if (*report_cmd) return cmd_report(report_opts);
        if (*blueprint_cmd && *lint_cmd) return cmd_blueprint_lint(lint_dir);
        std::cerr << app.help();
        return 1;
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
