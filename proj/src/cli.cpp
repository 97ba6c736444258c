#include "pricing/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pricing/json_io.hpp"
#include "pricing/parser.hpp"
#include "pricing/service.hpp"

namespace pricing::cli {

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFindings = 1, kUsage = 2 };

struct Options {
    std::string file;
    std::string filter;
    std::string direction = "min";
    std::string format = "table";
    std::string now;
    std::string plan;
    std::vector<std::string> add_ons;
    std::size_t limit = 10000;
    bool strict = false;
    bool no_timing = false;
    int threads = 0;
    std::string operation = "stats";
    std::string host = "0.0.0.0";
    int port = 8080;
    std::string data_dir;
    std::string cors_origin = "*";
};

struct Failure {
    int code;
    std::string message;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kUsage, "cannot read " + path.string()};
    std::stringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string describe(const Diagnostic& d)
{
    std::string out = std::string(to_string(d.severity)) + " " + d.code;
    if (d.location) out += " at " + std::to_string(d.location->line) + ":" + std::to_string(d.location->column);
    return out + ": " + d.message;
}

std::chrono::year_month_day today()
{
    return std::chrono::year_month_day(std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now()));
}

std::chrono::year_month_day resolve_now(const std::string& text)
{
    if (text.empty()) return today();
    auto date = parse_date(text);
    if (!date) throw Failure{kUsage, "--now must be an ISO date (YYYY-MM-DD), got '" + text + "'"};
    return *date;
}

class Command {
public:
    Command(const Options& options, std::ostream& out, std::ostream& err) : o_(options), out_(out), err_(err) {}

    bool json_output() const { return o_.format == "json"; }

    void emit(const json& j) { out_ << j.dump(2) << "\n"; }

    const Pricing& load()
    {
        auto parsed = parse_pricing(read_file(o_.file));
        for (const auto& d : parsed.diagnostics)
            if (d.severity == Severity::Warning || !parsed.ok()) err_ << o_.file << ": " << describe(d) << "\n";
        if (!parsed.ok()) throw Failure{kUsage, o_.file + ": the document has errors"};
        pricing_ = std::move(parsed.pricing);
        return *pricing_;
    }

    std::optional<FilterExpr> filter(const Pricing& pricing) const
    {
        if (o_.filter.empty()) return std::nullopt;
        return parse_filter(o_.filter, pricing);
    }

    EngineOptions engine() const { return EngineOptions{true, o_.threads}; }

    int validate()
    {
        const Pricing& p = load();
        auto result = valid_pricing(p);
        if (json_output()) {
            emit(to_json(result));
        } else {
            out_ << (result.valid ? "valid" : "invalid") << "\n";
            for (const auto& v : result.violations) out_ << "  " << to_string(v.constraint) << ": " << v.message << "\n";
            for (const auto& n : result.notes) out_ << "  note: " << n << "\n";
        }
        return result.valid ? kOk : kFindings;
    }

    int count_solutions()
    {
        const Pricing& p = load();
        auto n = count(ConstraintProblem(p, filter(p)), engine());
        if (json_output())
            emit({{"cardinal", n}});
        else
            out_ << n << "\n";
        return kOk;
    }

    int list_solutions()
    {
        const Pricing& p = load();
        auto solutions = enumerate(ConstraintProblem(p, filter(p)), engine());
        const std::size_t shown = std::min(solutions.size(), o_.limit);
        if (json_output()) {
            json items = json::array();
            for (std::size_t i = 0; i < shown; ++i) items.push_back(to_json(p, solutions[i]));
            emit({{"total", solutions.size()}, {"truncated", shown < solutions.size()}, {"subscriptions", items}});
        } else {
            for (std::size_t i = 0; i < shown; ++i)
                out_ << to_string(solutions[i].subscription) << "\t" << solutions[i].valuation.cost.to_string() << "\n";
            if (shown < solutions.size())
                err_ << "showing " << shown << " of " << solutions.size() << " subscriptions (use --limit)\n";
        }
        return kOk;
    }

    int cost()
    {
        const Pricing& p = load();
        Subscription s;
        if (!o_.plan.empty()) s.plan = o_.plan;
        s.add_ons = o_.add_ons;
        auto result = valid_subscription(p, s);
        if (json_output()) {
            emit(to_json(p, result));
        } else if (result.valid) {
            out_ << result.valuation->cost.to_string() << "\n";
        } else {
            out_ << "invalid subscription\n";
            for (const auto& v : result.violations) out_ << "  " << to_string(v.constraint) << ": " << v.message << "\n";
        }
        return result.valid ? kOk : kFindings;
    }

    int best()
    {
        const Pricing& p = load();
        Direction direction = o_.direction == "max" ? Direction::Max : Direction::Min;
        auto result = optimize(ConstraintProblem(p, filter(p)), direction, engine());
        if (json_output()) {
            emit(to_json(result));
        } else {
            out_ << to_string(direction) << " cost " << result.cost.to_string() << "\n";
            for (const auto& o : result.optimal) out_ << "  " << to_string(o.subscription) << "\n";
            if (!result.indeterminate.empty())
                out_ << result.indeterminate.size() << " subscription(s) require contacting sales\n";
        }
        return kOk;
    }

    int findings(const std::vector<LintFinding>& findings)
    {
        if (json_output()) {
            emit({{"findings", to_json(findings)}});
        } else {
            for (const auto& f : findings)
                out_ << to_string(f.severity) << "\t" << f.code << "\t" << f.subject << "\t" << f.message << "\n";
            if (findings.empty()) out_ << "no findings\n";
        }
        return o_.strict && !findings.empty() ? kFindings : kOk;
    }

    int lint_file()
    {
        auto now = resolve_now(o_.now);
        return findings(lint(load(), now));
    }

    int dead() { return findings(dead_elements(load())); }

    int stats_file()
    {
        auto s = stats(load(), engine());
        if (json_output()) {
            emit(to_json(s));
        } else {
            out_ << "features\t" << s.features << "\n"
                 << "usage limits\t" << s.usage_limits << "\n"
                 << "plans\t" << s.plans << "\n"
                 << "add-ons\t" << s.add_ons << "\n"
                 << "configuration space\t" << s.configuration_space_size << "\n"
                 << "valid\t" << (s.valid ? "yes" : "no") << "\n";
        }
        return kOk;
    }

    int corpus()
    {
        CorpusOptions options;
        options.operation = o_.operation == "lint" ? CorpusOperation::Lint : CorpusOperation::Stats;
        options.now = resolve_now(o_.now);
        options.timing = !o_.no_timing;
        options.threads = o_.threads;
        if (!fs::is_directory(o_.file)) throw Failure{kUsage, o_.file + " is not a directory"};
        auto report = run_corpus(o_.file, options);

        bool failed = false;
        bool has_findings = false;
        for (const auto& row : report.files) {
            failed = failed || row.failed;
            has_findings = has_findings || !row.findings.empty();
        }
        if (json_output()) {
            emit(to_json(report, options));
        } else {
            out_ << std::left << std::setw(36) << "file" << "F\tP\tA\tC\tvalid\tfindings";
            if (options.timing) out_ << "\tms";
            out_ << "\n";
            for (const auto& row : report.files) {
                out_ << std::setw(36) << row.path;
                if (row.stats)
                    out_ << row.stats->features << "\t" << row.stats->plans << "\t" << row.stats->add_ons << "\t"
                         << row.stats->configuration_space_size << "\t" << (row.stats->valid ? "yes" : "no") << "\t"
                         << row.findings.size();
                else
                    out_ << "error: " << (row.diagnostics.empty() ? "" : row.diagnostics.front().message);
                if (options.timing) out_ << "\t" << std::fixed << std::setprecision(1) << row.duration_ms;
                out_ << "\n";
            }
        }
        if (failed) return kFindings;
        return o_.strict && has_findings ? kFindings : kOk;
    }

    int serve()
    {
        std::optional<fs::path> dir;
        if (!o_.data_dir.empty()) dir = o_.data_dir;
        service::ServiceCore core(dir);
        return service::serve(core, {o_.host, o_.port, o_.cors_origin}) == 0 ? kOk : kUsage;
    }

private:
    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
    std::optional<Pricing> pricing_;
};

}  // namespace

CorpusReport run_corpus(const fs::path& directory, const CorpusOptions& options)
{
    CorpusReport report;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::recursive_directory_iterator(directory)) {
        auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".yml" || ext == ".yaml")) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    report.files.resize(paths.size());

    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(paths.size()); ++i) {
        CorpusRow& row = report.files[static_cast<std::size_t>(i)];
        const fs::path& path = paths[static_cast<std::size_t>(i)];
        row.path = fs::relative(path, directory).generic_string();
        const auto start = std::chrono::steady_clock::now();
        try {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot read " + row.path);
            std::stringstream text;
            text << in.rdbuf();
            auto parsed = parse_pricing(text.str());
            row.diagnostics = parsed.diagnostics;
            if (!parsed.ok()) {
                row.failed = true;
            } else {
                // Nested engine regions run on this thread only.
                row.stats = stats(*parsed.pricing, EngineOptions{false, 1});
                if (options.operation == CorpusOperation::Lint) row.findings = lint(*parsed.pricing, options.now);
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.diagnostics.push_back({Severity::Error, "AnalysisFailed", row.path, e.what(), std::nullopt});
        }
        row.duration_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return report;
}

nlohmann::json to_json(const CorpusReport& report, const CorpusOptions& options)
{
    json files = json::array();
    std::uint64_t features = 0, plans = 0, add_ons = 0, space = 0, failed = 0, valid = 0, findings = 0;
    for (const auto& row : report.files) {
        json item{{"path", row.path},
                  {"stats", row.stats ? pricing::to_json(*row.stats) : json(nullptr)},
                  {"diagnostics", pricing::to_json(row.diagnostics)}};
        if (options.operation == CorpusOperation::Lint) item["findings"] = pricing::to_json(row.findings);
        if (options.timing) item["durationMs"] = row.duration_ms;
        files.push_back(std::move(item));
        if (row.failed) ++failed;
        if (row.stats) {
            features += row.stats->features;
            plans += row.stats->plans;
            add_ons += row.stats->add_ons;
            space += row.stats->configuration_space_size;
            if (row.stats->valid) ++valid;
        }
        findings += row.findings.size();
    }
    json totals{{"files", report.files.size()}, {"failed", failed},     {"valid", valid},
                {"features", features},         {"plans", plans},       {"addOns", add_ons},
                {"configurationSpaceSize", space}};
    if (options.operation == CorpusOperation::Lint) totals["findings"] = findings;
    return {{"files", files}, {"totals", totals}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    if (const char* port = std::getenv("PORT")) o.port = std::atoi(port);
    if (const char* dir = std::getenv("DATA_DIR")) o.data_dir = dir;

    CLI::App app{"Analysis of Pricing2Yaml SaaS pricings"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub, bool needs_file = true) {
        if (needs_file) sub->add_option("file", o.file, "Pricing2Yaml document")->required();
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)");
    };
    auto with_filter = [&](CLI::App* sub, bool required = false) {
        auto opt = sub->add_option("--filter", o.filter, "Filter expression");
        if (required) opt->required();
    };

    auto* validate = app.add_subcommand("validate", "Check pricing validity");
    common(validate);
    auto* count_cmd = app.add_subcommand("count", "Size of the configuration space");
    common(count_cmd);
    with_filter(count_cmd);
    auto* enumerate_cmd = app.add_subcommand("enumerate", "List subscriptions");
    common(enumerate_cmd);
    with_filter(enumerate_cmd);
    enumerate_cmd->add_option("--limit", o.limit, "Maximum rows printed");
    auto* filter_cmd = app.add_subcommand("filter", "List subscriptions matching a filter");
    common(filter_cmd);
    with_filter(filter_cmd, true);
    filter_cmd->add_option("--limit", o.limit, "Maximum rows printed");
    auto* cost_cmd = app.add_subcommand("cost", "Cost of a subscription");
    common(cost_cmd);
    cost_cmd->add_option("--plan", o.plan, "Plan name");
    cost_cmd->add_option("--addon", o.add_ons, "Add-on name (repeatable)");
    auto* optimum_cmd = app.add_subcommand("optimum", "Cheapest or most expensive subscriptions");
    common(optimum_cmd);
    with_filter(optimum_cmd);
    optimum_cmd->add_option("--direction", o.direction, "min or max")->check(CLI::IsMember({"min", "max"}));
    auto* lint_cmd = app.add_subcommand("lint", "Modeling errors and dead elements");
    common(lint_cmd);
    lint_cmd->add_option("--now", o.now, "Reference date for createdAt (default: today)");
    lint_cmd->add_flag("--strict", o.strict, "Exit 1 when there are findings");
    auto* dead_cmd = app.add_subcommand("dead", "Dead plans and add-ons");
    common(dead_cmd);
    dead_cmd->add_flag("--strict", o.strict, "Exit 1 when there are findings");
    auto* stats_cmd = app.add_subcommand("stats", "Element counts and configuration space size");
    common(stats_cmd);
    auto* corpus_cmd = app.add_subcommand("corpus", "Stats or lint over a directory of pricings");
    common(corpus_cmd, false);
    corpus_cmd->add_option("directory", o.file, "Directory searched recursively")->required();
    corpus_cmd->add_option("--op", o.operation, "stats or lint")->check(CLI::IsMember({"stats", "lint"}));
    corpus_cmd->add_option("--now", o.now, "Reference date for lint (default: today)");
    corpus_cmd->add_flag("--no-timing", o.no_timing, "Omit durations");
    corpus_cmd->add_flag("--strict", o.strict, "Exit 1 when there are findings");
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
    serve_cmd->add_option("--host", o.host, "Bind address");
    serve_cmd->add_option("--port", o.port, "Port (env PORT)");
    serve_cmd->add_option("--data-dir", o.data_dir, "Persist pricings here (env DATA_DIR)");
    serve_cmd->add_option("--cors-origin", o.cors_origin, "Access-Control-Allow-Origin value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    Command cmd(o, out, err);
    try {
        if (validate->parsed()) return cmd.validate();
        if (count_cmd->parsed()) return cmd.count_solutions();
        if (enumerate_cmd->parsed() || filter_cmd->parsed()) return cmd.list_solutions();
        if (cost_cmd->parsed()) return cmd.cost();
        if (optimum_cmd->parsed()) return cmd.best();
        if (lint_cmd->parsed()) return cmd.lint_file();
        if (dead_cmd->parsed()) return cmd.dead();
        if (stats_cmd->parsed()) return cmd.stats_file();
        if (corpus_cmd->parsed()) return cmd.corpus();
        if (serve_cmd->parsed()) return cmd.serve();
    } catch (const Failure& f) {
        err << f.message << "\n";
        return f.code;
    } catch (const FilterError& e) {
        err << "filter " << e.code() << " at offset " << e.position() << ": " << e.what() << "\n";
        return kUsage;
    } catch (const EngineError& e) {
        err << e.code() << ": " << e.what() << "\n";
        for (const auto& v : e.violations()) err << "  " << to_string(v.constraint) << ": " << v.message << "\n";
        return e.kind() == EngineError::Kind::UnknownReference ? kUsage : kFindings;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace pricing::cli
