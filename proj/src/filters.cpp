#include "iqrip/filters.hpp"

#include <algorithm>
#include <unordered_set>

#include "iqrip/iqr_ip.hpp"

namespace iqrip {

bool CandidateSet::contains(TokenId id) const {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

CandidateSet top_k_set(const Distribution& dist, std::size_t k) {
    if (k == 0) throw ParameterError("top_k_set: k must be >= 1");
    if (dist.empty()) throw ParameterError("top_k_set: empty distribution");
    const std::size_t take = std::min(k, dist.size());
    CandidateSet out;
    out.ids.assign(dist.ids.begin(), dist.ids.begin() + static_cast<std::ptrdiff_t>(take));
    return out;
}

CandidateSet top_p_set(const Distribution& dist, double p) {
    if (!(p > 0.0) || p > 1.0) throw ParameterError("top_p_set: p must be in (0,1]");
    if (dist.empty()) throw ParameterError("top_p_set: empty distribution");
    // cdf(x_i), inclusive of x_i's own probability, computed as
    // 1 - (mass strictly after i). The suffix form makes the final candidate's
    // cdf exactly 1.0 regardless of accumulated rounding, so p = 1.0 keeps the
    // full support as required.
    const std::size_t n = dist.size();
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + dist.probs[i];
    CandidateSet out;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = 1.0 - suffix[i + 1];
        if (cdf <= p) {
            out.ids.push_back(dist.ids[i]);
        } else {
            break;  // canonical order: once past p, everything after is too
        }
    }
    if (out.ids.empty()) out.ids.push_back(dist.ids.front());  // argmax floor
    return out;
}

CandidateSet top1ctrl_set(const Distribution& dist, double n) {
    if (!(n >= 1.0)) throw ParameterError("top1ctrl_set: n must be >= 1");
    if (dist.empty()) throw ParameterError("top1ctrl_set: empty distribution");
    const double threshold = dist.probs.front() / n;
    CandidateSet out;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist.probs[i] >= threshold) out.ids.push_back(dist.ids[i]);
    }
    return out;
}

CandidateSet joint_filter(const Distribution& dist, std::size_t k, double p) {
    const CandidateSet by_k = top_k_set(dist, k);
    const CandidateSet by_p = top_p_set(dist, p);
    std::unordered_set<TokenId> in_p(by_p.ids.begin(), by_p.ids.end());
    CandidateSet out;
    for (TokenId id : by_k.ids) {
        if (in_p.count(id)) out.ids.push_back(id);
    }
    return out;
}

CandidateSet dynamic_prune(const IqrPartition& partition, const CandidateSet& k0,
                           const CandidateSet& vn) {
    if (partition.ids != k0.ids) {
        throw DataError("dynamic_prune: partition was not computed on this candidate set");
    }
    const CandidateSet upper = partition.very_high_or_high();
    std::unordered_set<TokenId> upper_set(upper.ids.begin(), upper.ids.end());
    bool vn_inside_upper = true;
    for (TokenId id : vn.ids) {
        if (!upper_set.count(id)) {
            vn_inside_upper = false;
            break;
        }
    }
    if (vn_inside_upper) return upper;
    std::unordered_set<TokenId> vn_set(vn.ids.begin(), vn.ids.end());
    CandidateSet out;
    for (TokenId id : k0.ids) {
        if (vn_set.count(id)) out.ids.push_back(id);
    }
    return out;
}

Distribution renormalize(const Distribution& src, const CandidateSet& keep) {
    std::vector<TokenId> ids;
    std::vector<double> weights;
    ids.reserve(keep.size());
    weights.reserve(keep.size());
    for (TokenId id : keep.ids) {
        const std::size_t i = src.index_of(id);
        if (i == Distribution::npos) {
            throw ParameterError("renormalize: candidate id " + std::to_string(id) +
                                 " not in the source distribution");
        }
        ids.push_back(id);
        weights.push_back(src.probs[i]);
    }
    return normalize(weights, ids);
}

}  // namespace iqrip
