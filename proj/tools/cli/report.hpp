#pragma once

#include <string>
#include <vector>

#include "maskroute/experiments/runner.hpp"

namespace maskroute::cli {

/// "1234567.6" -> "1,234,568".
std::string format_grouped(double value);

/// Fixed-width table: Algorithm, Learning method, Total Cost, Error Bar.
std::string render_summary(const std::vector<experiments::ArmSummary>& summaries);

std::string render_headroom(const experiments::HeadroomReport& report);

}  // namespace maskroute::cli
