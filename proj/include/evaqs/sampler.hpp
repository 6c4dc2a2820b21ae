// sampler.hpp
// Discrete distribution sampling over up to 2^n outcomes. Two backends:
// a cumulative table with binary search (O(log d) per draw) and a Walker/Vose
// alias table (O(1) per draw). Both are O(d) to build; tools/sampler_bench
// compares them at d = 2^20 (alias wins there and is the default).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "evaqs/rng.hpp"
#include "evaqs/state_vector.hpp"

namespace evaqs {

class DiscreteSampler {
public:
    enum class Method { cumulative, alias };

    explicit DiscreteSampler(std::span<const double> weights, Method method = Method::alias)
        : method_(method) {
        if (weights.empty()) throw std::invalid_argument("sampler needs at least one weight");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0 || !std::isfinite(w))
                throw std::invalid_argument("sampler weights must be finite and nonnegative");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("sampler weights must not all be zero");
        probs_.resize(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i) probs_[i] = weights[i] / total;
        if (method_ == Method::cumulative)
            build_cumulative();
        else
            build_alias();
    }

    static DiscreteSampler from_state(const StateVector& state, Method method = Method::alias) {
        return DiscreteSampler(state.probabilities(), method);
    }

    std::uint64_t size() const { return probs_.size(); }

    /// Normalized probability of outcome x.
    double probability(std::uint64_t x) const { return probs_[x]; }

    std::uint64_t sample(Rng& rng) const {
        return method_ == Method::cumulative ? sample_cumulative(rng) : sample_alias(rng);
    }

private:
    void build_cumulative() {
        cumulative_.resize(probs_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            acc += probs_[i];
            cumulative_[i] = acc;
        }
        cumulative_.back() = 1.0;  // guard the last bucket against rounding
    }

    // Walker/Vose alias construction: every bucket holds a threshold and a
    // donor outcome, so a draw is one uniform plus two table reads.
    void build_alias() {
        const std::size_t d = probs_.size();
        alias_.assign(d, 0);
        threshold_.assign(d, 0.0);
        std::vector<double> scaled(d);
        std::vector<std::uint64_t> small, large;
        small.reserve(d);
        large.reserve(d);
        for (std::size_t i = 0; i < d; ++i) {
            scaled[i] = probs_[i] * static_cast<double>(d);
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            const std::uint64_t s = small.back();
            const std::uint64_t l = large.back();
            small.pop_back();
            large.pop_back();
            threshold_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (std::uint64_t i : large) threshold_[i] = 1.0;
        for (std::uint64_t i : small) threshold_[i] = 1.0;  // rounding leftovers
    }

    std::uint64_t sample_cumulative(Rng& rng) const {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return static_cast<std::uint64_t>(it - cumulative_.begin());
    }

    std::uint64_t sample_alias(Rng& rng) const {
        const double u = rng.uniform() * static_cast<double>(probs_.size());
        std::uint64_t k = static_cast<std::uint64_t>(u);
        if (k >= probs_.size()) k = probs_.size() - 1;
        return (u - static_cast<double>(k)) < threshold_[k] ? k : alias_[k];
    }

    Method method_;
    std::vector<double> probs_;
    std::vector<double> cumulative_;     // cumulative backend
    std::vector<std::uint64_t> alias_;   // alias backend
    std::vector<double> threshold_;
};

}  // namespace evaqs
