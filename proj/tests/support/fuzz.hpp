#pragma once

#include <string>
#include <vector>

#include "support/random_nets.hpp"

namespace cc_test {

/// Byte- and token-level mutations of a seed document.
inline std::string fuzz_text(Rng& rng, const std::string& seed) {
    static const std::vector<std::string> fragments = {
        "net", "place", "transition", "arc", "align", "event", "legal", "irrelevant", "illegal-seq",
        "->", "<->", "-o", "=>", "tokens=", "legal=power", "legal=obligation", "lcp", "temporal", "actor=",
        "action=", "\"", "\\", "#", "=", ":", "\n", " ", "\t", "tokens=-1", "tokens=99999999999999999999",
        "A:b", "\"unterminated", "\r\n", std::string(1, '\0'), "\xff\xfe"};
    std::string s = seed;
    const int edits = uniform_int(rng, 1, 8);
    for (int e = 0; e < edits; ++e) {
        const auto pos = s.empty() ? 0 : static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(s.size())));
        switch (uniform_int(rng, 0, 5)) {
            case 0:  // flip a byte
                if (!s.empty()) s[std::min(pos, s.size() - 1)] = static_cast<char>(uniform_int(rng, 0, 255));
                break;
            case 1:  // delete a span
                if (!s.empty()) s.erase(std::min(pos, s.size() - 1), static_cast<std::size_t>(uniform_int(rng, 1, 12)));
                break;
            case 2:  // insert a grammar fragment
                s.insert(pos, pick(rng, fragments));
                break;
            case 3: {  // duplicate a line
                const auto start = s.rfind('\n', pos == 0 ? 0 : pos - 1);
                const auto from = start == std::string::npos ? 0 : start + 1;
                const auto end = s.find('\n', from);
                s.insert(from, s.substr(from, end == std::string::npos ? std::string::npos : end - from + 1));
                break;
            }
            case 4:  // truncate
                s.resize(pos);
                break;
            default:  // random bytes
                for (int k = uniform_int(rng, 1, 6); k > 0; --k)
                    s.insert(s.begin() + static_cast<long>(std::min(pos, s.size())),
                             static_cast<char>(uniform_int(rng, 0, 255)));
        }
    }
    return s;
}

}  // namespace cc_test
