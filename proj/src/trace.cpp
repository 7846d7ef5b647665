#include "pcgsim/trace.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pcgsim {

namespace {

uint64_t parse_hex(const std::string& tok, size_t line_no) {
    size_t start = 0;
    if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) start = 2;
    if (start >= tok.size()) throw std::runtime_error("trace line " + std::to_string(line_no) + ": empty hex field");
    uint64_t v = 0;
    for (size_t i = start; i < tok.size(); ++i) {
        char c = tok[i];
        uint64_t d;
        if (c >= '0' && c <= '9') d = static_cast<uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f') d = static_cast<uint64_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') d = static_cast<uint64_t>(c - 'A' + 10);
        else throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad hex digit '" + c + "'");
        v = (v << 4) | d;
    }
    return v;
}

} // namespace

std::vector<TraceEvent> parse_trace(std::istream& in) {
    std::vector<TraceEvent> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string pc_tok, addr_tok, rw_tok;
        if (!(ls >> pc_tok >> addr_tok >> rw_tok))
            throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected '<pc> <addr> <R|W>'");
        TraceEvent ev;
        ev.pc = parse_hex(pc_tok, line_no);
        ev.addr = parse_hex(addr_tok, line_no);
        if (rw_tok == "R" || rw_tok == "r") ev.write = false;
        else if (rw_tok == "W" || rw_tok == "w") ev.write = true;
        else throw std::runtime_error("trace line " + std::to_string(line_no) + ": access type must be R or W");
        out.push_back(ev);
    }
    return out;
}

std::vector<TraceEvent> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return parse_trace(in);
}

void save_trace(const std::string& path, const std::vector<TraceEvent>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    char buf[64];
    for (const TraceEvent& ev : trace) {
        std::snprintf(buf, sizeof(buf), "%llx %llx %c\n",
                      static_cast<unsigned long long>(ev.pc),
                      static_cast<unsigned long long>(ev.addr), ev.write ? 'W' : 'R');
        out << buf;
    }
}

} // namespace pcgsim
