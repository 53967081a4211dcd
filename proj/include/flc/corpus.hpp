#pragma once

// Built-in theories and the reproduction suite, embedded as source text.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flc/ast.hpp"

namespace flc {

struct CorpusFile {
    std::string name;       // theory name, e.g. "VIII-nostrict"
    std::string file_name;  // e.g. "VIII-nostrict.fth"
    std::string_view text;
};

/// The ten built-in theory files in a fixed order.
const std::vector<CorpusFile>& corpus_files();

/// Parsed corpus keyed by theory name.
const std::map<std::string, Theory>& builtin_corpus();

/// Throws std::out_of_range for an unknown name.
const Theory& corpus_theory(std::string_view name);

/// Manifest of the built-in reproduction suite (`.suite` format).
std::string_view paper_suite_text();

}  // namespace flc
