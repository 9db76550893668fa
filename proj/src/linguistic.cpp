#include "tokenfcm/linguistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tokenfcm/error.hpp"

namespace tokenfcm {

LinguisticScale::LinguisticScale(int half_range) : half_range_(half_range) {
  if (half_range < 1)
    throw OutOfScaleError("linguistic scale half range must be at least 1");
}

ExpertTally::ExpertTally(std::vector<int> counts, const LinguisticScale& scale)
    : counts_(std::move(counts)) {
  if (static_cast<int>(counts_.size()) != scale.grade_count()) {
    std::ostringstream msg;
    msg << "tally has " << counts_.size() << " grades, scale expects "
        << scale.grade_count();
    throw InvalidTallyError(msg.str());
  }
  for (int c : counts_) {
    if (c < 0) throw InvalidTallyError("negative expert count in tally");
    total_ += c;
  }
  if (total_ < 1) throw InvalidTallyError("tally has zero experts");
}

Plt Plt::normalized(std::vector<LinguisticTerm> terms, double merge_tolerance) {
  std::erase_if(terms, [](const LinguisticTerm& t) { return !(t.probability > 0); });
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });

  Plt out;
  for (const auto& term : terms) {
    // Chain merge: compare against the first index of the current group.
    if (!out.terms_.empty() &&
        std::abs(term.index - out.terms_.back().index) <= merge_tolerance) {
      out.terms_.back().probability += term.probability;
    } else {
      out.terms_.push_back(term);
    }
  }

  double mass = 0.0;
  for (const auto& t : out.terms_) mass += t.probability;
  if (mass > 0) {
    for (auto& t : out.terms_) t.probability /= mass;
  }
  return out;
}

Plt Plt::verbatim(std::vector<LinguisticTerm> terms, double mass_tolerance) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  double mass = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i].probability > 0))
      throw InvalidTallyError("PLT term probabilities must be positive");
    if (i > 0 && terms[i].index - terms[i - 1].index <= kMergeTolerance)
      throw InvalidTallyError("PLT terms must have distinct indices");
    mass += terms[i].probability;
  }
  if (terms.empty() || !(std::abs(mass - 1.0) <= mass_tolerance)) {
    std::ostringstream msg;
    msg << "PLT probability mass " << mass << " is not within " << mass_tolerance << " of 1";
    throw InvalidTallyError(msg.str());
  }
  Plt out;
  out.terms_ = std::move(terms);
  return out;
}

void RiskIndexWeights::validate() const {
  for (double w : {occurrence, severity, detection}) {
    if (!(w > 0.0 && w < 1.0))
      throw InvalidWeightsError("risk-index weights must lie in (0, 1)");
  }
  if (std::abs(occurrence + severity + detection - 1.0) > 1e-9)
    throw InvalidWeightsError("risk-index weights must sum to 1");
}

Plt TallyToPlt(const ExpertTally& tally, const LinguisticScale& scale) {
  if (static_cast<int>(tally.counts().size()) != scale.grade_count())
    throw InvalidTallyError("tally does not match the linguistic scale");
  std::vector<LinguisticTerm> terms;
  const int t = scale.half_range();
  for (int j = -t; j <= t; ++j) {
    const int count = tally.counts()[static_cast<std::size_t>(j + t)];
    if (count == 0) continue;
    terms.push_back({static_cast<double>(j),
                     static_cast<double>(count) / static_cast<double>(tally.total())});
  }
  // Counts already sum to K; normalization is a no-op beyond rounding.
  return Plt::normalized(std::move(terms));
}

double TermToUnit(double index, const LinguisticScale& scale) {
  if (!scale.contains(index)) {
    std::ostringstream msg;
    msg << "linguistic index " << index << " outside [-" << scale.half_range()
        << ", " << scale.half_range() << "]";
    throw OutOfScaleError(msg.str());
  }
  return index / (2.0 * scale.half_range()) + 0.5;
}

double UnitToTerm(double x, const LinguisticScale& scale) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "unit value " << x << " outside [0, 1]";
    throw OutOfScaleError(msg.str());
  }
  return (2.0 * x - 1.0) * scale.half_range();
}

namespace {

double WeightedPower(double base, double weight) {
  if (base <= 0.0) return 0.0;
  return std::pow(base, weight);
}

}  // namespace

Plt PltWeightedProduct(std::span<const Plt> factors,
                       std::span<const double> weights,
                       const LinguisticScale& scale) {
  if (factors.empty()) throw ArityError("weighted product needs at least one factor");
  if (weights.size() != factors.size())
    throw ArityError("weighted product needs one weight per factor");
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0 && w <= 1.0))
      throw InvalidWeightsError("product weights must lie in (0, 1]");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9)
    throw InvalidWeightsError("product weights must sum to 1");
  for (const auto& f : factors) {
    if (f.empty()) throw ArityError("weighted product factor has no terms");
  }

  // Pre-map every factor term into the unit interval.
  std::vector<std::vector<LinguisticTerm>> unit(factors.size());
  std::size_t combinations = 1;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    for (const auto& term : factors[f].terms())
      unit[f].push_back({WeightedPower(TermToUnit(term.index, scale), weights[f]),
                         term.probability});
    combinations *= unit[f].size();
  }

  std::vector<LinguisticTerm> out;
  out.reserve(combinations);
  std::vector<std::size_t> digit(factors.size(), 0);
  for (std::size_t n = 0; n < combinations; ++n) {
    double value = 1.0;
    double prob = 1.0;
    for (std::size_t f = 0; f < unit.size(); ++f) {
      value *= unit[f][digit[f]].index;
      prob *= unit[f][digit[f]].probability;
    }
    out.push_back({UnitToTerm(std::clamp(value, 0.0, 1.0), scale), prob});

    for (std::size_t f = unit.size(); f-- > 0;) {
      if (++digit[f] < unit[f].size()) break;
      digit[f] = 0;
    }
  }
  return Plt::normalized(std::move(out));
}

double PltDefuzzify(const Plt& plt) {
  double sum = 0.0;
  for (const auto& t : plt.terms()) sum += t.index * t.probability;
  return sum;
}

double ComputeRpn(const ExpertTally& occurrence, const ExpertTally& severity,
                  const ExpertTally& detection, const RiskIndexWeights& weights,
                  const LinguisticScale& scale) {
  weights.validate();
  const Plt factors[] = {TallyToPlt(occurrence, scale), TallyToPlt(severity, scale),
                         TallyToPlt(detection, scale)};
  const double w[] = {weights.occurrence, weights.severity, weights.detection};
  return PltDefuzzify(PltWeightedProduct(factors, w, scale));
}

}  // namespace tokenfcm
