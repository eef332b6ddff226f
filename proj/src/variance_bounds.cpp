#include "iqrip/variance_bounds.hpp"

#include <cmath>

#include "iqrip/iqr_ip.hpp"

namespace iqrip {

double tv_distance(const Distribution& p, const Distribution& q) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        l1 += std::abs(p.probs[i] - q.prob_of(p.ids[i]));
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (p.index_of(q.ids[i]) == Distribution::npos) l1 += q.probs[i];
    }
    return 0.5 * l1;
}

double kl_divergence(const Distribution& p_ref, const Distribution& p_fil) {
    double kl = 0.0;
    for (std::size_t i = 0; i < p_ref.size(); ++i) {
        const double pf = p_fil.prob_of(p_ref.ids[i]);
        if (pf == 0.0) {
            throw NumericError("kl_divergence: reference mass on id " +
                               std::to_string(p_ref.ids[i]) +
                               " outside the filtered support (infinite divergence)");
        }
        kl += p_ref.probs[i] * std::log(p_ref.probs[i] / pf);
    }
    return kl;
}

BoundReport corollary_bound(const Distribution& p_fil, const CandidateSet& very_high,
                            const Distribution& p_ref) {
    BoundReport rep;
    double band_mass = 0.0;
    double inverse_total = 0.0;
    for (TokenId id : very_high.ids) {
        const std::size_t i = p_fil.index_of(id);
        if (i == Distribution::npos) {
            throw ParameterError("corollary_bound: band id " + std::to_string(id) +
                                 " not in the filtered distribution");
        }
        band_mass += p_fil.probs[i];
        inverse_total += 1.0 / p_fil.probs[i];
    }
    if (!very_high.ids.empty()) {
        rep.z_p = band_mass / inverse_total;
        for (TokenId id : very_high.ids) {
            const double pf = p_fil.prob_of(id);
            rep.m = std::max(rep.m, std::abs(pf - rep.z_p / pf));
        }
    }
    rep.kl = kl_divergence(p_ref, p_fil);
    rep.bound = 0.5 * rep.kl + 2.0 * rep.m + rep.m * rep.m;
    rep.tv = tv_distance(inverse_permute(p_fil, very_high), p_ref);
    rep.satisfied = rep.tv * rep.tv <= rep.bound + 1e-12;
    return rep;
}

}  // namespace iqrip
