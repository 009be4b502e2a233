#pragma once
/// Structured reports shared by the command front end and the tests.
/// Requires nlohmann/json (json.hpp) on the include path.

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sslocus::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "sslocus-report/1";

/// finding: a reference formula disagrees with the derivation; never an error.
enum class Status { pass, fail, inconclusive, finding };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    case Status::finding: return "finding";
  }
  return "?";
}

inline Status pass_if(bool ok) { return ok ? Status::pass : Status::fail; }

struct Item {
  std::string section;
  std::string name;
  std::string expected;
  std::string computed;
  Status status = Status::pass;
};

struct TraceLine {
  std::string section;
  std::string label;
  std::string value;
};

struct Report {
  std::string command;
  json parameters = json::object();
  std::vector<Item> items;
  std::vector<TraceLine> trace;
  double wall_time_ms = 0;

  Item& add(std::string section, std::string name, std::string expected, std::string computed, Status st) {
    items.push_back({std::move(section), std::move(name), std::move(expected), std::move(computed), st});
    return items.back();
  }
  void note(std::string section, std::string label, std::string value) {
    trace.push_back({std::move(section), std::move(label), std::move(value)});
  }
  std::size_t count(Status s) const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [&](const Item& i) { return i.status == s; }));
  }
  int exit_code() const { return count(Status::fail) ? 1 : 0; }

  /// Appends another report, prefixing its sections with its command.
  void absorb(const Report& o) {
    for (auto it : o.items) {
      it.section = o.command + "/" + it.section;
      items.push_back(std::move(it));
    }
    for (auto t : o.trace) {
      t.section = o.command + "/" + t.section;
      trace.push_back(std::move(t));
    }
  }

  json to_json(bool with_time = true) const {
    json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["parameters"] = parameters;
    json arr = json::array();
    for (const auto& i : items)
      arr.push_back({{"section", i.section},
                     {"name", i.name},
                     {"expected", i.expected},
                     {"computed", i.computed},
                     {"status", to_string(i.status)}});
    j["items"] = std::move(arr);
    json tr = json::array();
    for (const auto& t : trace) tr.push_back({{"section", t.section}, {"label", t.label}, {"value", t.value}});
    j["trace"] = std::move(tr);
    j["summary"] = {{"pass", count(Status::pass)},
                    {"fail", count(Status::fail)},
                    {"inconclusive", count(Status::inconclusive)},
                    {"finding", count(Status::finding)}};
    if (with_time) j["wall_time_ms"] = wall_time_ms;
    return j;
  }

  std::string to_table() const {
    std::ostringstream os;
    os << "== " << command;
    if (!parameters.empty()) os << " " << parameters.dump();
    os << " ==\n";
    std::string cur;
    for (const auto& t : trace) {
      if (t.section != cur) {
        cur = t.section;
        os << "-- " << cur << "\n";
      }
      os << "   " << t.label << ": " << t.value << "\n";
    }
    std::size_t w = 0;
    for (const auto& i : items) w = std::max(w, i.section.size() + i.name.size() + 3);
    if (!items.empty()) os << "-- checks\n";
    for (const auto& i : items) {
      std::string st = to_string(i.status);
      std::transform(st.begin(), st.end(), st.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
      std::string head = i.section + " / " + i.name;
      os << "   " << st << std::string(13 - st.size(), ' ') << head << std::string(w - head.size() + 2, ' ');
      if (i.expected == i.computed)
        os << i.computed << "\n";
      else
        os << "expected " << i.expected << " | computed " << i.computed << "\n";
    }
    os << "pass " << count(Status::pass) << "  fail " << count(Status::fail) << "  inconclusive "
       << count(Status::inconclusive) << "  finding " << count(Status::finding) << "  (" << static_cast<long>(wall_time_ms)
       << " ms)\n";
    return os.str();
  }
};

}  // namespace sslocus::cli
