#pragma once

#include <filesystem>
#include <string>

#include "contractcheck/corpus.hpp"

namespace cc_test {

inline std::filesystem::path corpus_file(const std::string& name) {
    return contractcheck::default_corpus_dir() / name;
}

}  // namespace cc_test
