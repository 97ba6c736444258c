#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pricing/model.hpp"

namespace pricing {

struct ParseResult {
    std::optional<Pricing> pricing;
    /// Errors (never alongside a pricing) and warnings such as unknown keys.
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return pricing.has_value(); }
};

/// Reads a Pricing2Yaml document. Every returned ERROR carries a 1-based
/// source location. Unspecified plan values fall back to feature defaults at
/// evaluation time; unknown keys are kept in the extension bags.
ParseResult parse_pricing(std::string_view text);

/// Canonical Pricing2Yaml rendering: fixed key order, 2-space indentation,
/// LF line endings, trailing newline.
std::string serialize_pricing(const Pricing& pricing);

/// ISO-8601 calendar date (YYYY-MM-DD).
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day date);

}  // namespace pricing
