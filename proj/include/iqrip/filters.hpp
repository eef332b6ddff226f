#pragma once

#include <vector>

#include "iqrip/distribution.hpp"

namespace iqrip {

struct IqrPartition;  // see iqrip/iqr_ip.hpp

/// An ordered subset of a source distribution's support. The id order is the
/// canonical order inherited from the source (descending probability, ties by
/// ascending id), so element 0 is always the retained argmax.
struct CandidateSet {
    std::vector<TokenId> ids;

    std::size_t size() const { return ids.size(); }
    bool contains(TokenId id) const;
};

/// The k highest-probability candidates (all of them if k exceeds the
/// support). Ties at the boundary resolve by the canonical order, i.e. the
/// smaller id wins the last slot. k must be >= 1.
CandidateSet top_k_set(const Distribution& dist, std::size_t k);

/// Nucleus filter: candidates whose cumulative probability in canonical
/// order, counted inclusive of their own probability, is <= p. The argmax is
/// always retained even when its probability alone exceeds p, so the result
/// is never empty. p must lie in (0, 1]; p = 1 keeps the full support.
CandidateSet top_p_set(const Distribution& dist, double p);

/// Relative-distance filter: keeps candidates with p(x) >= max/n (boundary
/// inclusive). n = 1 keeps only exact ties with the maximum. The max/n
/// threshold is scale invariant, so the result is the same whether computed
/// on raw weights or normalized probabilities. n must be >= 1.
CandidateSet top1ctrl_set(const Distribution& dist, double n);

/// Joint initial filter: the intersection of top_k_set and top_p_set,
/// nonempty because both keep the argmax.
CandidateSet joint_filter(const Distribution& dist, std::size_t k, double p);

/// Dynamic pruning of the filtered set `k0` guided by its band partition and
/// the relative-distance set `vn`:
///  - if vn fits entirely inside VeryHigh-union-High, the whole upper region
///    is kept and everything below it is dropped (a peaked distribution:
///    candidates outside the upper bands are too far from the head to be
///    plausible continuations);
///  - otherwise the distribution is flat enough that vn itself is the binding
///    constraint, and the result is k0 intersect vn.
/// `partition` must have been computed on exactly `k0`; `vn` comes from the
/// same source distribution and may contain ids outside k0.
CandidateSet dynamic_prune(const IqrPartition& partition, const CandidateSet& k0,
                           const CandidateSet& vn);

/// Restrict `src` to the ids of `keep` and renormalize. Every kept id must be
/// present in src. The result is in canonical order.
Distribution renormalize(const Distribution& src, const CandidateSet& keep);

}  // namespace iqrip
