#include "abc/corpus.hpp"

#include <stdexcept>
#include <string>

namespace abc {

namespace generated {
extern const CorpusEntry kCorpus[];
extern const std::size_t kCorpusSize;
}  // namespace generated

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries(generated::kCorpus, generated::kCorpus + generated::kCorpusSize);
    return entries;
}

std::string_view corpus_text(std::string_view name) {
    for (const auto& e : corpus())
        if (e.name == name) return e.text;
    throw std::out_of_range("no corpus entry " + std::string(name));
}

}  // namespace abc
