#include "flc/corpus.hpp"

#include <stdexcept>

#include "flc/parser.hpp"

namespace flc {

namespace {

#include "corpus_embedded.inc"

}  // namespace

const std::vector<CorpusFile>& corpus_files() {
    static const std::vector<CorpusFile> files = {
        {"I", "I.fth", kEmbedded_I},
        {"II", "II.fth", kEmbedded_II},
        {"III", "III.fth", kEmbedded_III},
        {"IV", "IV.fth", kEmbedded_IV},
        {"V", "V.fth", kEmbedded_V},
        {"VI", "VI.fth", kEmbedded_VI},
        {"VII", "VII.fth", kEmbedded_VII},
        {"VII-diagrammatic", "VII-diagrammatic.fth", kEmbedded_VII_diagrammatic},
        {"VIII-nostrict", "VIII-nostrict.fth", kEmbedded_VIII_nostrict},
        {"VIII", "VIII.fth", kEmbedded_VIII},
    };
    return files;
}

const std::map<std::string, Theory>& builtin_corpus() {
    static const std::map<std::string, Theory> corpus = [] {
        std::map<std::string, Theory> m;
        for (const auto& f : corpus_files()) {
            Theory t = parse_theory(f.text);
            if (t.name != f.name) throw std::logic_error("corpus file " + f.file_name + " declares " + t.name);
            m.emplace(f.name, std::move(t));
        }
        return m;
    }();
    return corpus;
}

const Theory& corpus_theory(std::string_view name) {
    const auto& c = builtin_corpus();
    auto it = c.find(std::string(name));
    if (it == c.end()) throw std::out_of_range("no built-in theory named '" + std::string(name) + "'");
    return it->second;
}

std::string_view paper_suite_text() { return kEmbedded_paper; }

}  // namespace flc
