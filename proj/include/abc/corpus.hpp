#pragma once

#include <string_view>
#include <vector>

namespace abc {

struct CorpusEntry {
    std::string_view name;
    std::string_view text;
};

// Bundled example specs, compiled in from corpus/*.abc, sorted by name.
const std::vector<CorpusEntry>& corpus();
// Throws std::out_of_range for unknown names.
std::string_view corpus_text(std::string_view name);

}  // namespace abc
