#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pcgsim {

struct TraceEvent {
    uint64_t pc = 0;
    uint64_t addr = 0;
    bool write = false;
};

// One event per line: "<pc-hex> <addr-hex> <R|W>". A leading 0x on the hex
// fields is accepted. Blank lines and lines starting with '#' are skipped.
std::vector<TraceEvent> parse_trace(std::istream& in);
std::vector<TraceEvent> load_trace(const std::string& path);
void save_trace(const std::string& path, const std::vector<TraceEvent>& trace);

} // namespace pcgsim
