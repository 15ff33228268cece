#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <unordered_set>
#include <vector>

#include "pwfat/error.hpp"
#include "pwfat/utf8.hpp"

namespace pwfat {

// One entry per line, UTF-8. Lines starting with '#' and empty lines are
// skipped, a trailing CR is dropped, duplicates keep their first position.
inline std::vector<std::string> read_wordlist(std::istream& in, const std::string& source = "wordlist") {
    std::vector<std::string> entries;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        try {
            utf8::decode(line);
        } catch (const ValidationError&) {
            throw ValidationError(source, "invalid UTF-8 on line " + std::to_string(line_no));
        }
        if (seen.insert(line).second) {
            entries.push_back(line);
        }
    }
    return entries;
}

inline std::vector<std::string> load_wordlist(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("wordlist", "cannot open '" + path.string() + "'");
    }
    return read_wordlist(in, path.string());
}

} // namespace pwfat
