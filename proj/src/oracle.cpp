#include "smoothlab/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace smoothlab {

namespace {

void check_guards(const EnvSequence& seq, std::size_t depth) {
    if (depth > 4) throw TooLarge("oracle: depth <= 4 required");
    if (depth > seq.size()) throw OutOfRange("oracle: depth exceeds sequence length");
    for (std::size_t k = 0; k < depth; ++k) {
        const EnvState& s = seq.state_at(k);
        if (!s.exact_enumerable())
            throw ContinuousState("oracle: state '" + s.id() + "' is not an atom state");
        const auto outcomes = s.enumerated_outcomes();
        if (outcomes.size() > 4) throw TooLarge("oracle: more than 4 outcomes in state '" + s.id() + "'");
        for (const auto& o : outcomes)
            if (o.weights.size() > 3)
                throw TooLarge("oracle: more than 3 children per outcome in state '" + s.id() + "'");
    }
}

long double phi_rec(const std::vector<std::vector<WeightedOutcome>>& states, std::size_t k,
                    std::size_t depth, long double u) {
    if (k == depth) return expl(-u);
    long double acc = 0.0L;
    for (const auto& o : states[k]) {
        long double prod = 1.0L;
        for (double y : o.weights) {
            if (y <= 0.0) continue;
            prod *= phi_rec(states, k + 1, depth, u * static_cast<long double>(y));
        }
        acc += static_cast<long double>(o.p) * prod;
    }
    return acc;
}

long double mean_rec(const std::vector<std::vector<WeightedOutcome>>& states, std::size_t k,
                     std::size_t depth) {
    if (k == depth) return 1.0L;
    long double acc = 0.0L;
    const long double below = mean_rec(states, k + 1, depth);
    for (const auto& o : states[k]) {
        long double wsum = 0.0L;
        for (double y : o.weights) wsum += static_cast<long double>(y);
        acc += static_cast<long double>(o.p) * wsum * below;
    }
    return acc;
}

}  // namespace

ExactTransform exact_wn_transform(const EnvSequence& seq, const std::vector<double>& u_points,
                                  std::size_t depth) {
    check_guards(seq, depth);
    std::vector<std::vector<WeightedOutcome>> states;
    states.reserve(depth);
    for (std::size_t k = 0; k < depth; ++k) states.push_back(seq.state_at(k).enumerated_outcomes());
    ExactTransform out;
    out.depth = depth;
    out.u_points = u_points;
    out.values.reserve(u_points.size());
    for (double u : u_points) {
        if (u < 0.0) throw NegativeArgument("oracle: negative u");
        out.values.push_back(static_cast<double>(phi_rec(states, 0, depth, u)));
    }
    return out;
}

double exact_wn_mean(const EnvSequence& seq, std::size_t depth) {
    check_guards(seq, depth);
    std::vector<std::vector<WeightedOutcome>> states;
    states.reserve(depth);
    for (std::size_t k = 0; k < depth; ++k) states.push_back(seq.state_at(k).enumerated_outcomes());
    return static_cast<double>(mean_rec(states, 0, depth));
}

void ExactTransform::write_csv(std::ostream& os) const {
    os << "u,value\n";
    char buf[80];
    for (std::size_t i = 0; i < u_points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u_points[i], values[i]);
        os << buf;
    }
}

}  // namespace smoothlab
