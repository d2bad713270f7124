#include "ado/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "ado/error.hpp"
#include "ado/io.hpp"
#include "ado/rng.hpp"

namespace ado {

namespace fs = std::filesystem;

std::size_t whitespace_token_count(const std::string& text) {
  std::size_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    bool space = std::isspace(c) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

std::size_t byte_token_count(const std::string& text) { return text.size(); }

MixtureWeights estimate_natural_mixture(const CorpusIndex& index,
                                        std::size_t sample_size,
                                        const TokenCounter& counter,
                                        std::uint64_t seed) {
  if (index.empty())
    throw Error(ErrorCode::domain, "corpus has no domains");
  if (sample_size < 1)
    throw Error(ErrorCode::domain, "sample_size must be >= 1");
  Rng rng(seed);
  std::vector<double> totals(index.size());
  for (std::size_t d = 0; d < index.size(); ++d) {
    const CorpusDomain& dom = index[d];
    if (dom.doc_count == 0)
      throw Error(ErrorCode::domain, "domain '" + dom.name + "' is empty");
    const std::size_t m = std::min(sample_size, dom.doc_count);
    auto picks = sample_without_replacement(dom.doc_count, m, rng);
    double token_sum = 0.0;
    for (std::size_t i : picks)
      token_sum += static_cast<double>(counter(dom.fetch(i)));
    const double mean = token_sum / static_cast<double>(m);
    totals[d] = mean * static_cast<double>(dom.doc_count);
  }
  return normalized(std::move(totals), "natural mixture");
}

CorpusIndex load_corpus_directory(const std::string& root) {
  if (!fs::is_directory(root))
    throw Error(ErrorCode::io, "corpus directory not found: " + root);
  CorpusIndex index;
  std::vector<fs::path> domains;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) domains.push_back(entry.path());
  std::sort(domains.begin(), domains.end());
  for (const auto& dir : domains) {
    CorpusDomain dom;
    dom.name = dir.filename().string();
    auto files = std::make_shared<std::vector<std::string>>();
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file()) files->push_back(entry.path().string());
    std::sort(files->begin(), files->end());
    dom.doc_count = files->size();
    dom.fetch = [files](std::size_t i) { return read_file((*files)[i]); };
    if (dom.doc_count == 0)
      throw Error(ErrorCode::domain,
                  "corpus domain '" + dom.name + "' has no documents");
    index.push_back(std::move(dom));
  }
  if (index.empty())
    throw Error(ErrorCode::domain,
                "corpus directory has no domain subdirectories: " + root);
  return index;
}

CorpusIndex load_corpus_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open manifest: " + path);
  CorpusIndex index;
  std::shared_ptr<std::vector<std::string>> files;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    std::string rest;
    std::getline(ls, rest);
    std::size_t a = rest.find_first_not_of(" \t");
    rest = a == std::string::npos ? "" : rest.substr(a);
    const std::string where = path + ":" + std::to_string(lineno);
    if (kind == "domain") {
      if (rest.empty())
        throw Error(ErrorCode::parse, where + ": domain needs a name");
      CorpusDomain dom;
      dom.name = rest;
      files = std::make_shared<std::vector<std::string>>();
      auto captured = files;
      dom.fetch = [captured](std::size_t i) {
        return read_file((*captured)[i]);
      };
      index.push_back(std::move(dom));
    } else if (kind == "doc") {
      if (index.empty())
        throw Error(ErrorCode::parse, where + ": doc before any domain");
      if (rest.empty())
        throw Error(ErrorCode::parse, where + ": doc needs a path");
      files->push_back(rest);
      index.back().doc_count = files->size();
    } else {
      throw Error(ErrorCode::parse,
                  where + ": expected 'domain' or 'doc', got '" + kind + "'");
    }
  }
  if (index.empty())
    throw Error(ErrorCode::parse, path + ": manifest lists no domains");
  for (const auto& dom : index)
    if (dom.doc_count == 0)
      throw Error(ErrorCode::parse,
                  path + ": domain '" + dom.name + "' lists no documents");
  return index;
}

std::size_t ReferenceMixtures::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw Error(ErrorCode::config, "no mixture column named '" + name + "'");
}

ReferenceMixtures load_reference_mixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open mixture table: " + path);
  ReferenceMixtures table;
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    const std::string where = path + ":" + std::to_string(lineno);
    if (!saw_header) {
      if (fields.size() < 2 || fields[0] != "domain")
        throw Error(ErrorCode::parse,
                    where + ": expected header 'domain,<column>,...'");
      table.columns.assign(fields.begin() + 1, fields.end());
      saw_header = true;
      continue;
    }
    if (fields.size() != table.columns.size() + 1)
      throw Error(ErrorCode::parse, where + ": wrong field count");
    table.domains.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      char* end = nullptr;
      double v = std::strtod(fields[i].c_str(), &end);
      if (end == fields[i].c_str() || *end != '\0')
        throw Error(ErrorCode::parse,
                    where + ": not a number: '" + fields[i] + "'");
      row.push_back(v);
    }
    table.weights.push_back(std::move(row));
  }
  if (!saw_header || table.domains.empty())
    throw Error(ErrorCode::parse, path + ": empty mixture table");
  return table;
}

}  // namespace ado
