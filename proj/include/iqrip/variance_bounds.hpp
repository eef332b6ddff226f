#pragma once

#include "iqrip/distribution.hpp"
#include "iqrip/filters.hpp"

namespace iqrip {

/// Numerical audit of the closeness guarantee for the inverse permutation:
/// with p_inv = inverse_permute(p_fil, VH) and a reference distribution p_ref,
///
///   tv(p_inv, p_ref)^2  <=  1/2 KL(p_ref || p_fil) + 2m + m^2
///
/// where z_p = (sum_VH p_fil) / (sum_VH 1/p_fil) is the reciprocal-weighting
/// normalizer (so a member's permuted probability is z_p / p_fil(x)) and
/// m = max over VH of |p_fil(x) - z_p / p_fil(x)| is the largest single
/// probability displacement the permutation causes.
struct BoundReport {
    double z_p = 0.0;        ///< reciprocal normalizer; 0 when the band is empty
    double m = 0.0;          ///< largest single displacement within the band
    double kl = 0.0;         ///< KL(p_ref || p_fil), nats
    double tv = 0.0;         ///< total variation tv(p_inv, p_ref)
    double bound = 0.0;      ///< 1/2 kl + 2m + m^2
    bool satisfied = false;  ///< tv^2 <= bound (with 1e-12 slack)
};

/// Total variation distance: half the L1 distance over the union support.
/// Ids missing from one side contribute their full mass, so disjoint point
/// masses are at distance 1. This is the normalization under which Pinsker's
/// inequality tv^2 <= 1/2 KL holds as written.
double tv_distance(const Distribution& p, const Distribution& q);

/// KL(p_ref || p_fil) = sum p_ref ln(p_ref / p_fil), in nats. p_ref mass on
/// an id outside p_fil's support makes the divergence infinite, reported as
/// a NumericError rather than a sentinel value.
double kl_divergence(const Distribution& p_ref, const Distribution& p_fil);

/// Evaluate the bound for one (p_fil, VeryHigh, p_ref) triple. An empty band
/// leaves the permutation the identity: z_p and m are reported as 0 and the
/// bound reduces to 1/2 KL.
BoundReport corollary_bound(const Distribution& p_fil, const CandidateSet& very_high,
                            const Distribution& p_ref);

}  // namespace iqrip
