#pragma once

// Pattern file format: one pattern of '0'/'1' per line. Blank lines and
// lines whose first non-blank character is '#' are ignored. CRLF and
// surrounding whitespace are tolerated.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "quam/error.hpp"
#include "quam/patterns.hpp"

namespace quam {

inline PatternSet parse_patterns(std::istream &in,
                                 const std::string &source = "<input>") {
    std::vector<BasisPattern> patterns;
    std::unordered_map<BasisIndex, std::size_t> first_line;
    std::size_t width = 0;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string &why) {
        throw DataError(source + ":" + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos || line[begin] == '#') {
            continue;
        }
        const auto end = line.find_last_not_of(" \t\r");
        const std::string bits = line.substr(begin, end - begin + 1);
        if (bits.find_first_not_of("01") != std::string::npos) {
            fail("invalid character in pattern '" + bits + "'");
        }
        if (bits.size() > kMaxPatternWidth) {
            fail("pattern is longer than " + std::to_string(kMaxPatternWidth) +
                 " bits");
        }
        if (width == 0) {
            width = bits.size();
        } else if (bits.size() != width) {
            fail("pattern has " + std::to_string(bits.size()) +
                 " bits, expected " + std::to_string(width));
        }
        BasisPattern p(bits);
        if (auto [it, fresh] = first_line.emplace(p.index(), line_no); !fresh) {
            fail("duplicate of the pattern on line " +
                 std::to_string(it->second));
        }
        patterns.push_back(p);
    }
    if (patterns.empty()) {
        throw DataError(source + ": no patterns found");
    }
    return PatternSet(std::move(patterns));
}

inline PatternSet parse_pattern_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open pattern file " + path.string());
    }
    return parse_patterns(in, path.string());
}

} // namespace quam
