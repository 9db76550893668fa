// Probabilistic linguistic term sets (PLTs) and the expert-opinion to RPN
// pipeline built on them.
//
// A symmetric linguistic scale with half range t holds the grades
// s_{-t} ... s_t. Expert tallies over the integer grades become PLTs; PLTs of
// the occurrence, severity and detection indices are combined by a weighted
// geometric product in the unit interval and collapsed to a scalar RPN.
#ifndef TOKENFCM_LINGUISTIC_HPP_
#define TOKENFCM_LINGUISTIC_HPP_

#include <span>
#include <vector>

namespace tokenfcm {

class LinguisticScale {
 public:
  /// Throws OutOfScaleError when half_range < 1.
  explicit LinguisticScale(int half_range = 2);

  int half_range() const { return half_range_; }
  int grade_count() const { return 2 * half_range_ + 1; }

  bool contains(double index) const {
    return index >= -half_range_ && index <= half_range_;
  }

  friend bool operator==(const LinguisticScale&, const LinguisticScale&) = default;

 private:
  int half_range_;
};

/// Expert head-counts for one risk index, one entry per grade -t ... t.
class ExpertTally {
 public:
  /// Throws InvalidTallyError on a length mismatch or zero total.
  ExpertTally(std::vector<int> counts, const LinguisticScale& scale);

  const std::vector<int>& counts() const { return counts_; }
  int total() const { return total_; }

 private:
  std::vector<int> counts_;
  int total_ = 0;
};

struct LinguisticTerm {
  double index = 0.0;
  double probability = 0.0;

  friend bool operator==(const LinguisticTerm&, const LinguisticTerm&) = default;
};

/// Indices closer than this are treated as the same virtual term.
inline constexpr double kMergeTolerance = 1e-9;

/// A normalized probabilistic linguistic term set.
///
/// Terms are sorted by index, carry strictly positive probability summing to
/// one, and no two indices lie within kMergeTolerance of each other. The one
/// exception is verbatim(), whose mass may be off by rounding.
class Plt {
 public:
  Plt() = default;

  /// Drops zero-probability terms, merges near-equal indices by summing
  /// their probability, and rescales the total mass to one.
  static Plt normalized(std::vector<LinguisticTerm> terms,
                        double merge_tolerance = kMergeTolerance);

  /// Keeps published, already-rounded terms exactly as given (sorted by
  /// index) so that defuzzification reproduces the published arithmetic.
  /// Throws InvalidTallyError for non-positive probabilities, indices
  /// within kMergeTolerance of each other, or a total mass further than
  /// `mass_tolerance` from one.
  static Plt verbatim(std::vector<LinguisticTerm> terms, double mass_tolerance);

  const std::vector<LinguisticTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<LinguisticTerm> terms_;
};

struct RiskIndexWeights {
  double occurrence = 0.0;
  double severity = 0.0;
  double detection = 0.0;

  /// Throws InvalidWeightsError unless each weight is in (0, 1) and they sum
  /// to one within 1e-9.
  void validate() const;

  friend bool operator==(const RiskIndexWeights&, const RiskIndexWeights&) = default;
};

/// Probability of grade j is count_j / K; empty grades are omitted.
Plt TallyToPlt(const ExpertTally& tally, const LinguisticScale& scale);

/// g(s_i) = i / 2t + 1/2.
double TermToUnit(double index, const LinguisticScale& scale);

/// g^{-1}(x) = (2x - 1) t.
double UnitToTerm(double x, const LinguisticScale& scale);

/// Weighted geometric product of PLTs over the full cross product of terms.
///
/// Each combination maps to g^{-1}(prod g(s)^w) with probability prod p.
/// 0^w is taken as 0, so a bottom-of-scale term absorbs the combination.
/// Throws ArityError for an empty factor list or mismatched weights and
/// InvalidWeightsError when the weights are not a convex combination.
Plt PltWeightedProduct(std::span<const Plt> factors,
                       std::span<const double> weights,
                       const LinguisticScale& scale);

/// Expected index sum_i k_i p(k_i).
double PltDefuzzify(const Plt& plt);

/// Tallies -> PLTs -> weighted product -> defuzzified scalar.
double ComputeRpn(const ExpertTally& occurrence, const ExpertTally& severity,
                  const ExpertTally& detection, const RiskIndexWeights& weights,
                  const LinguisticScale& scale);

}  // namespace tokenfcm

#endif  // TOKENFCM_LINGUISTIC_HPP_
