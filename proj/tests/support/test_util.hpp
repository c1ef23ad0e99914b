#pragma once

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "phishmatch/data_paths.hpp"

namespace testutil {

/// Domains of the bundled ranked list, in rank order.
inline std::vector<std::string> ranked_domains(size_t limit) {
    std::ifstream in(phishmatch::data_file("tranco_like_100k.csv"));
    std::vector<std::string> out;
    std::string line;
    while (out.size() < limit && std::getline(in, line)) out.push_back(line.substr(line.find(',') + 1));
    return out;
}

inline std::string random_string(std::mt19937_64& rng, std::string_view alphabet, size_t min_len, size_t max_len) {
    std::uniform_int_distribution<size_t> len(min_len, max_len);
    std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
    std::string s(len(rng), ' ');
    for (char& c : s) c = alphabet[pick(rng)];
    return s;
}

}  // namespace testutil
