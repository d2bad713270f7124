#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ado/mixture.hpp"

namespace ado {

// One domain of a document-partitioned corpus. fetch(i) returns the text
// of document i, 0 <= i < doc_count.
struct CorpusDomain {
  std::string name;
  std::size_t doc_count = 0;
  std::function<std::string(std::size_t)> fetch;
};

using CorpusIndex = std::vector<CorpusDomain>;
using TokenCounter = std::function<std::size_t(const std::string&)>;

std::size_t whitespace_token_count(const std::string& text);
std::size_t byte_token_count(const std::string& text);

// Token-proportional domain weights estimated by sampling min(sample_size,
// doc_count) documents per domain without replacement: total tokens of a
// domain = mean tokens/doc * doc_count, normalized across domains.
MixtureWeights estimate_natural_mixture(const CorpusIndex& index,
                                        std::size_t sample_size,
                                        const TokenCounter& counter,
                                        std::uint64_t seed);

// Directory layout: one subdirectory per domain, one document per file.
CorpusIndex load_corpus_directory(const std::string& root);

// Manifest: `domain <name>` lines each followed by `doc <path>` lines.
CorpusIndex load_corpus_manifest(const std::string& path);

// Reference mixture table (CSV: domain,<column>...). Used to pass through
// published mixtures as priors.
struct ReferenceMixtures {
  std::vector<std::string> domains;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> weights;  // [domain][column]

  std::size_t column_index(const std::string& name) const;
};

ReferenceMixtures load_reference_mixtures(const std::string& path);

}  // namespace ado
