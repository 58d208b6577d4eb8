#pragma once

#include <map>
#include <string>
#include <string_view>

#include "slin/history.hpp"

namespace slin {

// Line format, one event per line:
//   t=<int> op=<int> inv <method> <value>
//   t=<int> op=<int> ret <value>
//   t=<int> op=<int> abort
// Lines starting with '#' are comments. Comments of the form "# key: text"
// are additionally surfaced as directives (the CLI reads `init` and `final`).

History parse_history(std::string_view text);
std::string serialize_history(const History& h);

struct HistoryFile {
  History history;
  std::map<std::string, std::string> directives;
};

HistoryFile parse_history_file(std::string_view text);
std::string serialize_history_file(const HistoryFile& file);

}  // namespace slin
