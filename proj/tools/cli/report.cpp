#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace maskroute::cli {

std::string format_grouped(double value) {
  const long long rounded = std::llround(value);
  std::string digits = std::to_string(rounded < 0 ? -rounded : rounded);
  std::string out;
  const std::size_t lead = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
  out.append(digits, 0, lead);
  for (std::size_t i = lead; i < digits.size(); i += 3) {
    out += ',';
    out.append(digits, i, 3);
  }
  return rounded < 0 ? "-" + out : out;
}

std::string render_summary(const std::vector<experiments::ArmSummary>& summaries) {
  constexpr int kAlgorithm = 24;
  constexpr int kMethod = 18;
  constexpr int kCost = 12;
  std::ostringstream out;
  out << std::left << std::setw(kAlgorithm) << "Algorithm" << std::setw(kMethod)
      << "Learning method" << std::right << std::setw(kCost) << "Total Cost" << ' '
      << "Error Bar" << '\n';
  for (const auto& s : summaries) {
    out << std::left << std::setw(kAlgorithm) << s.display << std::setw(kMethod)
        << (s.method.empty() ? std::string("N/A") : s.method) << std::right << std::setw(kCost)
        << format_grouped(s.mean_cost) << ' ' << "±" << format_grouped(s.standard_error)
        << '\n';
  }
  return out.str();
}

std::string render_headroom(const experiments::HeadroomReport& report) {
  std::ostringstream out;
  auto section = [&](const char* title, const std::vector<experiments::HeadroomEntry>& rows) {
    out << title << '\n';
    for (const auto& r : rows) {
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * r.fraction);
      out << "  " << std::left << std::setw(20) << r.arm << pct << '\n';
    }
  };
  section("Headroom recovered vs Bellman-Ford", report.versus_bellman_ford);
  section("Headroom recovered vs STD-MBL", report.versus_std);
  return out.str();
}

}  // namespace maskroute::cli
