#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "primebounds/claims.hpp"

namespace primebounds {

namespace {

bool has_verdict(const ClaimResult& c) { return c.status != MatchStatus::Skipped; }

}  // namespace

std::string to_json(const Report& report, bool include_timing) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["config"] = ordered_json{{"cap", report.cap}, {"guard_policy", report.guard_policy}};
  ordered_json claims = ordered_json::array();
  for (const auto& c : report.claims) {
    ordered_json entry;
    entry["id"] = c.id;
    entry["status"] = std::string(to_string(c.status));
    if (has_verdict(c)) {
      entry["verdict"] = std::string(to_string(c.verdict.status));
      entry["witness"] = c.verdict.witness ? ordered_json(*c.verdict.witness) : ordered_json();
      entry["min_margin"] = c.verdict.min_margin;
    } else {
      entry["verdict"] = nullptr;
      entry["witness"] = nullptr;
      entry["min_margin"] = nullptr;
    }
    entry["range"] = ordered_json::array({c.lo, c.hi});
    entry["elapsed_ms"] = include_timing ? c.elapsed_ms : 0;
    claims.push_back(std::move(entry));
  }
  root["claims"] = std::move(claims);
  root["all_match"] = report.all_match();
  return root.dump(2) + "\n";
}

std::string to_text(const Report& report) {
  std::ostringstream os;
  os << "cap=" << report.cap << " threads=" << report.threads << "\n";
  os << "guard policy: " << report.guard_policy << "\n\n";
  for (const auto& c : report.claims) {
    os << std::left << std::setw(5) << c.id << std::setw(9) << to_string(c.status);
    if (has_verdict(c)) {
      os << std::setw(10) << to_string(c.verdict.status);
    } else {
      os << std::setw(10) << "-";
    }
    os << "[" << c.lo << ", " << c.hi << "]  " << c.elapsed_ms << " ms\n";
    os << "     " << c.description << "\n";
    if (!c.skip_reason.empty()) os << "     skipped: " << c.skip_reason << "\n";
    for (const auto& check : c.checks) {
      os << "     " << (check.informational ? "i " : check.matched ? "+ " : "x ") << check.detail
         << "\n";
    }
  }
  std::int64_t matched = 0;
  for (const auto& c : report.claims) matched += c.status == MatchStatus::Match;
  os << "\n" << matched << "/" << report.claims.size() << " claims MATCH"
     << (report.all_match() ? "" : " (not all)") << ", total " << report.total_ms << " ms\n";
  return os.str();
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << "id,status,verdict,witness,min_margin,lo,hi,elapsed_ms\n";
  for (const auto& c : report.claims) {
    os << c.id << ',' << to_string(c.status) << ',';
    if (has_verdict(c)) {
      os << to_string(c.verdict.status) << ',';
      if (c.verdict.witness) os << *c.verdict.witness;
      os << ',' << std::setprecision(17) << c.verdict.min_margin;
    } else {
      os << ",,";
    }
    os << ',' << c.lo << ',' << c.hi << ',' << c.elapsed_ms << '\n';
  }
  return os.str();
}

}  // namespace primebounds
