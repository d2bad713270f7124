#include "ado/mixture.hpp"

#include <cmath>
#include <numeric>

#include "ado/error.hpp"

namespace ado {

double MixtureWeights::sum() const {
  return std::accumulate(w.begin(), w.end(), 0.0);
}

bool MixtureWeights::on_simplex(double tol) const {
  if (w.empty()) return false;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

MixtureWeights MixtureWeights::uniform(std::size_t k) {
  return MixtureWeights(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

MixtureWeights normalized(std::vector<double> raw, const char* what) {
  double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw Error(ErrorCode::domain,
                std::string(what) + ": nonpositive or non-finite total mass");
  for (double& v : raw) v /= total;
  return MixtureWeights(std::move(raw));
}

void require_simplex(const MixtureWeights& m, const char* what) {
  if (m.w.empty())
    throw Error(ErrorCode::dimension, std::string(what) + ": empty mixture");
  for (double v : m.w) {
    if (!std::isfinite(v) || v < -1e-12)
      throw Error(ErrorCode::domain,
                  std::string(what) + ": negative or non-finite weight");
  }
  if (std::abs(m.sum() - 1.0) > 1e-6)
    throw Error(ErrorCode::domain,
                std::string(what) + ": weights do not sum to 1");
}

void require_same_size(const MixtureWeights& a, const MixtureWeights& b,
                       const char* what) {
  if (a.size() != b.size())
    throw Error(ErrorCode::dimension,
                std::string(what) + ": mixture dimension mismatch");
}

}  // namespace ado
