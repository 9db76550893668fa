// Independent oracles and generators shared by the unit and acceptance suites.
// Nothing here calls the library code paths it is used to check.
#ifndef TOKENFCM_TESTS_TEST_SUPPORT_HPP_
#define TOKENFCM_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tokenfcm/engine.hpp"
#include "tokenfcm/linguistic.hpp"
#include "tokenfcm/model.hpp"

#ifndef TOKENFCM_DATA_DIR
#define TOKENFCM_DATA_DIR "data"
#endif

namespace tokenfcm::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(TOKENFCM_DATA_DIR) + "/" + name;
}

using TermList = std::vector<std::pair<double, double>>;  // (index, probability)

/// Cross product by recursion with the conversion functions written out
/// inline. Returns every combination unmerged.
inline TermList BruteForceProduct(const std::vector<TermList>& factors,
                                  const std::vector<double>& weights, int t) {
  TermList out;
  std::function<void(std::size_t, double, double)> walk = [&](std::size_t f, double unit,
                                                              double prob) {
    if (f == factors.size()) {
      out.emplace_back((2.0 * unit - 1.0) * t, prob);
      return;
    }
    for (const auto& [index, p] : factors[f]) {
      const double g = index / (2.0 * t) + 0.5;
      const double powered = g == 0.0 ? 0.0 : std::pow(g, weights[f]);
      walk(f + 1, unit * powered, prob * p);
    }
  };
  walk(0, 1.0, 1.0);
  return out;
}

/// Sort by index, merge indices within tol, rescale to unit mass.
inline TermList SortAndMerge(TermList terms, double tol = 1e-9) {
  std::sort(terms.begin(), terms.end());
  TermList merged;
  for (const auto& [index, p] : terms) {
    if (p <= 0) continue;
    if (!merged.empty() && std::abs(index - merged.back().first) <= tol) {
      merged.back().second += p;
    } else {
      merged.emplace_back(index, p);
    }
  }
  double mass = 0;
  for (const auto& term : merged) mass += term.second;
  for (auto& term : merged) term.second /= mass;
  return merged;
}

inline TermList ToTermList(const Plt& plt) {
  TermList out;
  for (const auto& t : plt.terms()) out.emplace_back(t.index, t.probability);
  return out;
}

inline bool SameDistribution(const TermList& a, const TermList& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].first - b[i].first) > tol || std::abs(a[i].second - b[i].second) > tol)
      return false;
  }
  return true;
}

/// Random PLT factor with 1..max_terms distinct integer grades on [-t, t].
inline TermList RandomFactor(std::mt19937& rng, int t, int max_terms) {
  std::vector<int> grades;
  for (int j = -t; j <= t; ++j) grades.push_back(j);
  std::shuffle(grades.begin(), grades.end(), rng);
  const int n = std::uniform_int_distribution<int>(1, std::min(max_terms, 2 * t + 1))(rng);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  TermList out;
  double mass = 0;
  for (int i = 0; i < n; ++i) {
    out.emplace_back(grades[static_cast<std::size_t>(i)], weight(rng));
    mass += out.back().second;
  }
  for (auto& term : out) term.second /= mass;
  std::sort(out.begin(), out.end());
  return out;
}

/// Random convex weights, each bounded away from 0.
inline std::vector<double> RandomWeights(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(n);
  double sum = 0;
  for (auto& x : w) sum += (x = u(rng));
  for (auto& x : w) x /= sum;
  return w;
}

inline Plt MakePlt(const TermList& terms) {
  std::vector<LinguisticTerm> v;
  for (const auto& [i, p] : terms) v.push_back({i, p});
  return Plt::normalized(std::move(v));
}

/// Random graph on ids 1..n where every node has at least one incoming arc.
/// Every delay equals `delay`.
inline RiskModel RandomCoveredModel(std::mt19937& rng, int n, double delay) {
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::bernoulli_distribution extra(0.3);
  std::vector<RiskNode> nodes;
  for (int i = 1; i <= n; ++i) nodes.push_back({i, "", "n" + std::to_string(i), value(rng)});
  std::vector<CausalArc> arcs;
  for (int target = 1; target <= n; ++target) {
    std::vector<int> sources;
    for (int s = 1; s <= n; ++s) {
      if (s != target) sources.push_back(s);
    }
    std::shuffle(sources.begin(), sources.end(), rng);
    for (std::size_t k = 0; k < sources.size(); ++k) {
      if (k == 0 || extra(rng)) arcs.push_back({sources[k], target, weight(rng), delay});
    }
  }
  return RiskModel(std::move(nodes), std::move(arcs));
}

/// Synchronous FCM iteration written independently of the library:
/// x_i <- sigmoid(x_i + sum over incoming (ascending source id) w * x_src).
inline std::vector<std::vector<double>> ReferenceSynchronousIteration(const RiskModel& model,
                                                                      std::vector<double> x,
                                                                      int steps) {
  const auto& nodes = model.nodes();
  std::vector<std::vector<double>> rows{x};
  for (int k = 0; k < steps; ++k) {
    std::vector<double> next(x.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::vector<std::pair<int, double>> incoming;
      for (const auto& arc : model.arcs()) {
        if (arc.target == nodes[i].id) incoming.emplace_back(arc.source, arc.weight);
      }
      std::sort(incoming.begin(), incoming.end());
      double influence = 0.0;
      for (const auto& [src, w] : incoming) {
        std::size_t j = 0;
        while (nodes[j].id != src) ++j;
        influence += w * x[j];
      }
      next[i] = 1.0 / (1.0 + std::exp(-(x[i] + influence)));
    }
    x = next;
    rows.push_back(x);
  }
  return rows;
}

inline RiskModel ThreeNodeChain() {
  return RiskModel({{1, "C1", "", 0.5}, {2, "C2", "", 0.6}, {3, "C3", "", 0.7}},
                   {{2, 1, 0.4, 5.0}, {1, 3, 0.6, 5.0}});
}

}  // namespace tokenfcm::testing

#endif  // TOKENFCM_TESTS_TEST_SUPPORT_HPP_
