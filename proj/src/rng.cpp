#include "ado/rng.hpp"

#include <algorithm>
#include <utility>

#include "ado/error.hpp"

namespace ado {

std::vector<long long> multinomial_counts(const std::vector<double>& probs,
                                          long long trials, Rng& rng) {
  std::vector<long long> counts(probs.size(), 0);
  if (probs.empty()) return counts;
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cum[i] = acc;
  }
  for (long long t = 0; t < trials; ++t) {
    double u = rng.uniform() * acc;
    std::size_t idx =
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    if (idx >= counts.size()) idx = counts.size() - 1;
    ++counts[idx];
  }
  return counts;
}

std::vector<long long> expected_counts(const std::vector<double>& probs,
                                       long long trials) {
  std::vector<long long> counts(probs.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  remainders.reserve(probs.size());
  long long assigned = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double exact = probs[i] * static_cast<double>(trials);
    long long base = static_cast<long long>(exact);
    counts[i] = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), i);
  }
  // Hand out the leftover units to the largest remainders, lower index
  // first on ties.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  long long leftover = trials - assigned;
  for (long long j = 0; j < leftover && j < static_cast<long long>(remainders.size());
       ++j) {
    ++counts[remainders[static_cast<std::size_t>(j)].second];
  }
  // Degenerate rounding (all remainders zero but leftover > 0) cannot
  // happen for probs summing to 1, but guard anyway.
  long long total = 0;
  for (long long c : counts) total += c;
  if (total != trials && !counts.empty()) counts[0] += trials - total;
  return counts;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t m, Rng& rng) {
  if (m > n)
    throw Error(ErrorCode::domain, "sample size exceeds population size");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.uniform() *
                                                 static_cast<double>(n - i));
    if (j >= n) j = n - 1;
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  return idx;
}

}  // namespace ado
