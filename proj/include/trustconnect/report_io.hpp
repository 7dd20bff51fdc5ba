#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trustconnect/trust.hpp"

namespace trustconnect {

/// "trustconnect-report v1": one `row` record per node, then footer records.
std::string report_to_text(const TrustReport& report);

/// Header `id,label,epsilon,btv,trust,eatv`, full round-trip precision.
std::string report_to_csv(const TrustReport& report);

std::string report_to_json(const TrustReport& report);

/// Rows back from report_to_csv(); throws ParseError.
std::vector<TrustRow> parse_report_csv(std::string_view text, const std::string& source = "<csv>");

}  // namespace trustconnect
