#pragma once

#include <cstdint>
#include <vector>

#include "iqrip/distribution.hpp"
#include "iqrip/filters.hpp"

namespace iqrip {

/// Probability bands of a filtered candidate set, split by quartile geometry.
enum class Band { very_high, high, medium, low, very_low };

const char* band_name(Band b);

/// Quartile partition of a filtered distribution's probability values.
///
/// With Q1/Q3 the quartiles of the values, IQR = Q3 - Q1 and a spread
/// coefficient rho, each candidate x falls into exactly one band:
///
///   VeryHigh :  p(x) >= Q3 + rho * IQR      (upward outliers)
///   High     :  Q3 <= p(x) <  Q3 + rho*IQR
///   Medium   :  Q1 <= p(x) <  Q3
///   Low      :  Q1 - rho*IQR <= p(x) < Q1
///   VeryLow  :  p(x) <  Q1 - rho*IQR        (expected empty in practice)
///
/// Lower bounds are inclusive, upper bounds exclusive, evaluated top down.
/// A constant value set (IQR = 0) therefore lands entirely in VeryHigh.
/// Small sets are special-cased: with fewer than 4 candidates the quartile
/// geometry is meaningless, VeryHigh is suppressed outright, and candidates
/// fall through to the remaining bands.
struct IqrPartition {
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double rho = 0.0;
    /// The partitioned set in canonical order, with bands[i] the band of ids[i].
    std::vector<TokenId> ids;
    std::vector<Band> bands;

    /// Ids of one band, in canonical order.
    std::vector<TokenId> ids_in(Band b) const;
    /// Band of a given id; throws DataError if the id is not in the partition.
    Band band_of(TokenId id) const;
    /// Convenience: the VeryHigh band as a candidate set.
    CandidateSet very_high() const;
    /// Convenience: VeryHigh and High together, in canonical order.
    CandidateSet very_high_or_high() const;
};

/// Full parameter set of one sampling step.
struct SamplerConfig {
    double p = 0.8;            ///< nucleus mass, in (0, 1]
    std::size_t k = 640;       ///< top-k cutoff, >= 1
    double n = 100.0;          ///< relative-distance divisor, >= 1
    double rho = 1.5;          ///< IQR spread coefficient, > 0
    std::uint64_t seed = 0;    ///< RNG seed of the generation stream
    std::size_t max_len = 200; ///< tokens to generate, >= 1

    /// Throws ParameterError if any field is outside its range.
    void validate() const;
};

/// Partition a renormalized filtered distribution into bands. rho must be
/// positive; the distribution must be nonempty.
IqrPartition iqr_partition(const Distribution& p_fil, double rho);

/// Reassign the VeryHigh band's total mass proportionally to each member's
/// reciprocal probability:
///
///   p'(x) = (sum_VH p) * (1/p(x)) / (sum_VH 1/p)     for x in VeryHigh,
///
/// which exactly conserves the band's mass and reverses the preference order
/// inside it, while every probability outside the band is left bit-identical.
/// Fixed points returned unchanged (same object, no arithmetic): an empty or
/// singleton band, and a band whose probabilities are all equal (the formula
/// is the identity there; short-circuiting makes that exact in floating
/// point). The result is restored to canonical order.
Distribution inverse_permute(const Distribution& p_fil, const CandidateSet& very_high);

/// The two distributions a sampling step produces: `filtered` is the
/// renormalized pruned distribution before the permutation (used for
/// model-comparable token scores), `permuted` is the final distribution the
/// token is drawn from.
struct StepResult {
    Distribution filtered;
    Distribution permuted;
    IqrPartition partition;   ///< partition of the initial filtered set
    CandidateSet k1;          ///< pruned candidate set
};

/// One full IQR-IP sampling step, in fixed stage order:
///   1. K0  = joint_filter(raw, k, p)
///   2. pf0 = renormalize(raw, K0)
///   3. partition = iqr_partition(pf0, rho)
///   4. Vn  = top1ctrl_set(raw, n)
///   5. K1  = dynamic_prune(partition, K0, Vn)
///   6. pf1 = renormalize(raw, K1)
///   7. result = inverse_permute(pf1, VeryHigh intersect K1)
///
/// VeryHigh membership is decided once, on K0 (stage 3), and carried
/// forward; the permutation then applies to the members that survived the
/// pruning, using their probabilities renormalized on K1. Set
/// `repartition_on_k1` to recompute the bands on K1 between stages 6 and 7
/// instead (a sensitivity knob, off by default and deliberately not exposed
/// as a documented CLI flag).
StepResult iqr_ip_step_detail(const Distribution& raw, const SamplerConfig& cfg,
                              bool repartition_on_k1 = false);

/// Same as iqr_ip_step_detail but returning only the final distribution.
Distribution iqr_ip_step(const Distribution& raw, const SamplerConfig& cfg,
                         bool repartition_on_k1 = false);

}  // namespace iqrip
