#pragma once

#include <string>

#include "checks.hpp"

inline std::string data_path(const std::string& relative)
{
    return std::string(PRICING_TEST_DATA) + "/" + relative;
}

inline pricing::Pricing fixture(const std::string& name)
{
    return checks::load(data_path("fixtures/" + name + ".yml"));
}

inline void require_ok(const checks::Report& report)
{
    for (const auto& m : report.messages) MESSAGE(m);
    CHECK(report.cases > 0);
    CHECK(report.mismatches == 0);
}
