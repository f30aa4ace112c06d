#pragma once

#include <sstream>
#include <string>

namespace fixtures {

// The troubleshooting tree; the Wi-Fi and WSN branches are our own stubs.
inline constexpr const char* kNetworkSource = R"(input "Which kind of technology has communication problems?"
if "Ethernet":
    input "Is link status active?"
    if "No":
        printex "Change Ethernet cable"
    inputs "What is the speed in Mbps?"
    if <= 100:
        printex "Change Ethernet cable category"
    printex ""
if "Wi-Fi":
    input "Is the access point powered on?"
    if "No":
        printex "Power on the access point"
    printex ""
if "WSN":
    input "Is the sink node reachable?"
    if "No":
        printex "Restart the sink node"
    printex ""
)";

// Reference listing of the Ethernet region, spaced as printed.
inline constexpr const char* kEthernetListing = R"((1)  input "Which kind of technology has communication problems?"
(2)  if "Ethernet" (6)
(3)  if "Wi-Fi" (15)
(4)  if "WSN" (20)
(5)  goto (25)
(6)  input "Is link status active?"
(7)  if "No" (9)
(8)  goto (10)
(9)  printex "Change Ethernet cable"
(10) inputs "What is the speed in Mbps?"
(11) ifc <= 100 (13)
(12) goto (14)
(13) printex "Change Ethernet cable category"
(14) printex ""
)";

/// Collapses runs of whitespace outside string literals to one space and
/// drops blank lines, so listings compare independently of column alignment.
inline std::string normalize_listing(const std::string& text, std::size_t max_lines = 0) {
  std::istringstream in(text);
  std::string line, out;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    std::string norm;
    bool quoted = false, space = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        norm.push_back(c);
        if (c == '\\' && i + 1 < line.size()) norm.push_back(line[++i]);
        else if (c == '"') quoted = false;
        continue;
      }
      if (c == ' ' || c == '\t') {
        space = !norm.empty();
        continue;
      }
      if (space) norm.push_back(' ');
      space = false;
      norm.push_back(c);
      if (c == '"') quoted = true;
    }
    if (norm.empty()) continue;
    out += norm + "\n";
    if (max_lines && ++lines == max_lines) break;
  }
  return out;
}

}  // namespace fixtures
