#include "iqrip/iqr_ip.hpp"

#include <algorithm>
#include <unordered_set>

namespace iqrip {

const char* band_name(Band b) {
    switch (b) {
        case Band::very_high: return "VeryHigh";
        case Band::high: return "High";
        case Band::medium: return "Medium";
        case Band::low: return "Low";
        case Band::very_low: return "VeryLow";
    }
    return "?";
}

std::vector<TokenId> IqrPartition::ids_in(Band b) const {
    std::vector<TokenId> out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (bands[i] == b) out.push_back(ids[i]);
    }
    return out;
}

Band IqrPartition::band_of(TokenId id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return bands[i];
    }
    throw DataError("band_of: id " + std::to_string(id) + " not in partition");
}

CandidateSet IqrPartition::very_high() const {
    return CandidateSet{ids_in(Band::very_high)};
}

CandidateSet IqrPartition::very_high_or_high() const {
    CandidateSet out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (bands[i] == Band::very_high || bands[i] == Band::high) {
            out.ids.push_back(ids[i]);
        }
    }
    return out;
}

void SamplerConfig::validate() const {
    if (!(p > 0.0) || p > 1.0) throw ParameterError("config: p must be in (0,1]");
    if (k == 0) throw ParameterError("config: k must be >= 1");
    if (!(n >= 1.0)) throw ParameterError("config: n must be >= 1");
    if (!(rho > 0.0)) throw ParameterError("config: rho must be > 0");
    if (max_len == 0) throw ParameterError("config: max_len must be >= 1");
}

IqrPartition iqr_partition(const Distribution& p_fil, double rho) {
    if (p_fil.empty()) throw ParameterError("iqr_partition: empty distribution");
    if (!(rho > 0.0)) throw ParameterError("iqr_partition: rho must be > 0");
    IqrPartition out;
    out.rho = rho;
    out.q1 = quantile(p_fil.probs, 0.25);
    out.q3 = quantile(p_fil.probs, 0.75);
    out.iqr = out.q3 - out.q1;
    out.ids = p_fil.ids;
    out.bands.reserve(p_fil.size());
    const double very_high_floor = out.q3 + rho * out.iqr;
    const double low_floor = out.q1 - rho * out.iqr;
    // Quartiles of fewer than 4 values do not single out genuine outliers
    // (a constant or near-constant value set makes IQR collapse to 0 and
    // would promote everything), so VeryHigh is suppressed outright and the
    // top of a small set lands in High.
    const bool allow_very_high = p_fil.size() >= 4;
    for (double p : p_fil.probs) {
        Band b;
        if (allow_very_high && p >= very_high_floor) {
            b = Band::very_high;
        } else if (p >= out.q3) {
            b = Band::high;
        } else if (p >= out.q1) {
            b = Band::medium;
        } else if (p >= low_floor) {
            b = Band::low;
        } else {
            b = Band::very_low;
        }
        out.bands.push_back(b);
    }
    return out;
}

Distribution inverse_permute(const Distribution& p_fil, const CandidateSet& very_high) {
    std::vector<std::size_t> member_idx;
    member_idx.reserve(very_high.size());
    for (TokenId id : very_high.ids) {
        const std::size_t i = p_fil.index_of(id);
        if (i == Distribution::npos) {
            throw ParameterError("inverse_permute: id " + std::to_string(id) +
                                 " not in the distribution");
        }
        member_idx.push_back(i);
    }
    // Fixed points, returned without touching the arithmetic so that the
    // output is bit-identical to the input: nothing to permute, or a band of
    // equal values (reciprocal weighting of equal values is the identity).
    if (member_idx.size() <= 1) return p_fil;
    {
        const double first = p_fil.probs[member_idx.front()];
        bool all_equal = true;
        for (std::size_t i : member_idx) {
            if (p_fil.probs[i] != first) {
                all_equal = false;
                break;
            }
        }
        if (all_equal) return p_fil;
    }
    double band_mass = 0.0;
    double inverse_total = 0.0;
    for (std::size_t i : member_idx) {
        band_mass += p_fil.probs[i];
        inverse_total += 1.0 / p_fil.probs[i];
    }
    Distribution out = p_fil;
    for (std::size_t i : member_idx) {
        out.probs[i] = band_mass * (1.0 / p_fil.probs[i]) / inverse_total;
    }
    // Restore canonical order; probabilities (inside and outside the band)
    // are carried as-is, only positions change.
    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (out.probs[a] != out.probs[b]) return out.probs[a] > out.probs[b];
        return out.ids[a] < out.ids[b];
    });
    Distribution sorted;
    sorted.ids.reserve(out.size());
    sorted.probs.reserve(out.size());
    for (std::size_t i : order) {
        sorted.ids.push_back(out.ids[i]);
        sorted.probs.push_back(out.probs[i]);
    }
    return sorted;
}

StepResult iqr_ip_step_detail(const Distribution& raw, const SamplerConfig& cfg,
                              bool repartition_on_k1) {
    if (raw.empty()) throw ParameterError("iqr_ip_step: empty distribution");
    cfg.validate();
    StepResult r;
    const CandidateSet k0 = joint_filter(raw, cfg.k, cfg.p);
    const Distribution pf0 = renormalize(raw, k0);
    r.partition = iqr_partition(pf0, cfg.rho);
    const CandidateSet vn = top1ctrl_set(raw, cfg.n);
    r.k1 = dynamic_prune(r.partition, k0, vn);
    r.filtered = renormalize(raw, r.k1);
    // VeryHigh membership was fixed on K0; the permutation applies to the
    // members that survived pruning, with their K1-renormalized masses.
    CandidateSet band =
        repartition_on_k1 ? iqr_partition(r.filtered, cfg.rho).very_high()
                          : r.partition.very_high();
    std::unordered_set<TokenId> k1_set(r.k1.ids.begin(), r.k1.ids.end());
    CandidateSet surviving;
    for (TokenId id : band.ids) {
        if (k1_set.count(id)) surviving.ids.push_back(id);
    }
    r.permuted = inverse_permute(r.filtered, surviving);
    return r;
}

Distribution iqr_ip_step(const Distribution& raw, const SamplerConfig& cfg,
                         bool repartition_on_k1) {
    return iqr_ip_step_detail(raw, cfg, repartition_on_k1).permuted;
}

}  // namespace iqrip
