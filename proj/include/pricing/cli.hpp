#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pricing/analysis.hpp"

namespace pricing::cli {

/// Exit codes: 0 success / valid, 1 findings or invalid pricing (lint and
/// dead only under --strict), 2 usage, I/O or parse failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

enum class CorpusOperation { Stats, Lint };

struct CorpusOptions {
    CorpusOperation operation = CorpusOperation::Stats;
    std::chrono::year_month_day now{};
    bool timing = true;
    int threads = 0;
};

struct CorpusRow {
    std::string path;  // relative to the corpus directory
    std::optional<PricingStats> stats;
    std::vector<Diagnostic> diagnostics;  // parse diagnostics and per-file errors
    std::vector<LintFinding> findings;
    double duration_ms = 0;
    bool failed = false;
};

struct CorpusReport {
    std::vector<CorpusRow> files;  // sorted by path
};

/// Every *.yml / *.yaml under `directory`, processed in parallel.
CorpusReport run_corpus(const std::filesystem::path& directory, const CorpusOptions& options);

/// {files: [{path, stats, diagnostics, durationMs}], totals}
nlohmann::json to_json(const CorpusReport& report, const CorpusOptions& options);

}  // namespace pricing::cli
