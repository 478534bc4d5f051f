#include <cmath>

#include <nlohmann/json.hpp>

#include "kinoplan/eval_harness.hpp"

namespace kinoplan {

namespace {

/// Table cell percentage in the style of the result tables: "100%", "0%",
/// otherwise one truncated decimal ("66.6%", "33.3%").
std::string percent(double asr) {
  const double scaled = asr * 100.0;
  if (scaled == std::floor(scaled)) {
    return std::to_string(static_cast<int>(scaled)) + "%";
  }
  const double truncated = std::floor(scaled * 10.0) / 10.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", truncated);
  return buf;
}

void append_block(std::string& out, const AsrReport& report, const std::string& planner_id,
                  bool seen) {
  std::vector<std::string> names;
  for (const CellStats& cell : report.cells) {
    if (cell.seen == seen && (names.empty() || names.back() != cell.category)) {
      names.push_back(cell.category);
    }
  }
  if (names.empty()) {
    return;
  }

  out += seen ? "## Seen categories\n\n" : "## Unseen categories\n\n";
  out += "| Planner |";
  for (const std::string& name : names) {
    out += " " + name + " |";
  }
  out += "\n|---|";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += "---|";
  }
  out += "\n| " + planner_id + " |";
  for (const std::string& name : names) {
    // paired instructions share a cell, separated by "/ "
    std::string cell_text;
    for (const CellStats& cell : report.cells) {
      if (cell.category != name || cell.seen != seen) {
        continue;
      }
      if (!cell_text.empty()) {
        cell_text += "/ ";
      }
      cell_text += percent(cell.asr());
    }
    out += " " + cell_text + " |";
  }
  out += "\n\n";
}

}  // namespace

std::string report_to_json(const AsrReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["trials_per_category"] = report.trials_per_category;
  j["totals"] = {
      {"instances", report.total_instances},
      {"cells", static_cast<int>(report.cells.size())},
      {"trials", report.total_trials},
      {"successes", report.total_successes},
  };
  for (const char* block : {"seen", "unseen"}) {
    const bool seen = block[0] == 's';
    nlohmann::ordered_json categories = nlohmann::ordered_json::array();
    nlohmann::ordered_json* current = nullptr;
    std::string current_name;
    for (const CellStats& cell : report.cells) {
      if (cell.seen != seen) {
        continue;
      }
      if (cell.category != current_name) {
        categories.push_back({{"category", cell.category},
                              {"results", nlohmann::ordered_json::array()}});
        current = &categories.back();
        current_name = cell.category;
      }
      (*current)["results"].push_back({{"instruction", cell.instruction},
                                       {"successes", cell.successes},
                                       {"trials", cell.trials},
                                       {"asr", cell.asr()}});
    }
    j[block] = std::move(categories);
  }
  return j.dump(2) + "\n";
}

std::string report_to_markdown(const AsrReport& report, const std::string& planner_id) {
  std::string out = "# Average success rate\n\n";
  out += "Planner: " + planner_id + "; seed " + std::to_string(report.seed) + "; " +
         std::to_string(report.trials_per_category) + " instances per category; " +
         std::to_string(report.total_instances) + " instances, " +
         std::to_string(report.cells.size()) + " instruction cells, " +
         std::to_string(report.total_trials) + " trials.\n\n";
  append_block(out, report, planner_id, true);
  append_block(out, report, planner_id, false);
  return out;
}

}  // namespace kinoplan
