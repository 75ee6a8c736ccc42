#include "relay/classes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relay {

namespace {
constexpr double kLn10 = std::numbers::ln10;

double cdf_at_threshold(const IsrModel& model, double threshold) {
    if (!(threshold > 0.0)) return 0.0;
    return isr_cdf(model, threshold);
}
}  // namespace

double RateSpec::a() const { return rate_bps / subcarrier_bw_hz * std::log10(2.0); }

void RateSpec::validate() const {
    if (!(rate_bps > 0.0) || !(subcarrier_bw_hz > 0.0)) {
        throw std::invalid_argument("RateSpec: rate and subcarrier bandwidth must be positive");
    }
}

void ClassScheme::validate() const {
    if (class_count < 1) throw std::invalid_argument("ClassScheme: class_count must be >= 1");
    if (offset < 0) throw std::invalid_argument("ClassScheme: offset must be >= 0");
}

int subcarriers_required(double isr, const RateSpec& rate) {
    rate.validate();
    if (!(isr > 0.0)) throw std::domain_error("subcarriers_required: ISR must be positive");
    // x = A / log10(1 + 1/I); the slack keeps a threshold value in its own
    // class despite roundoff.
    const double x = rate.a() * kLn10 / std::log1p(1.0 / isr);
    const int m = static_cast<int>(std::ceil(x - 1e-9));
    return m < 1 ? 1 : m;
}

double demand_threshold(const RateSpec& rate, int demand) {
    rate.validate();
    if (demand <= 0) return 0.0;
    return 1.0 / std::expm1(rate.a() * kLn10 / demand);
}

std::vector<double> class_boundaries(const RateSpec& rate, const ClassScheme& scheme) {
    scheme.validate();
    std::vector<double> bounds;
    bounds.reserve(scheme.class_count + 1);
    for (int r = 1; r <= scheme.class_count; ++r) {
        bounds.push_back(demand_threshold(rate, scheme.demand(r)));
    }
    bounds.push_back(demand_threshold(rate, scheme.max_demand() + 1));
    return bounds;
}

ClassDistribution class_distribution(const IsrModel& model, const RateSpec& rate,
                                     const ClassScheme& scheme, LinkKind link) {
    scheme.validate();
    ClassDistribution dist;
    dist.scheme = scheme;
    dist.link = link;
    dist.probabilities.resize(scheme.class_count);
    double lower = cdf_at_threshold(model, demand_threshold(rate, scheme.min_demand() - 1));
    dist.head_mass = lower;
    for (int r = 1; r <= scheme.class_count; ++r) {
        const double upper = cdf_at_threshold(model, demand_threshold(rate, scheme.demand(r)));
        dist.probabilities[r - 1] = std::max(0.0, upper - lower);
        lower = upper;
    }
    dist.tail_mass = std::max(0.0, 1.0 - lower);
    return dist;
}

std::vector<std::pair<int, double>> ClassDistribution::demand_masses() const {
    std::vector<std::pair<int, double>> out;
    out.reserve(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        out.emplace_back(scheme.demand(static_cast<int>(i) + 1), probabilities[i]);
    }
    if (!out.empty()) out.front().second += head_mass;
    return out;
}

std::vector<std::pair<int, double>> ClassDistribution::conditional_masses() const {
    auto out = demand_masses();
    double total = 0.0;
    for (const auto& [m, p] : out) total += p;
    if (total <= 0.0) throw std::domain_error("ClassDistribution: no in-range mass");
    for (auto& [m, p] : out) p /= total;
    return out;
}

ClassDistribution truncate_renormalize(const ClassDistribution& dist) {
    ClassDistribution out = dist;
    if (out.probabilities.empty()) return out;
    out.probabilities.front() += out.head_mass;
    out.probabilities.back() += out.tail_mass;
    out.head_mass = 0.0;
    out.tail_mass = 0.0;
    return out;
}

std::pair<int, int> detect_class_range(const std::map<int, double>& demand_pmf, double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("detect_class_range: epsilon must lie in (0, 1)");
    }
    int lo = 0, hi = 0;
    bool found = false;
    for (const auto& [demand, p] : demand_pmf) {
        if (p >= epsilon) {
            if (!found) lo = demand;
            hi = demand;
            found = true;
        }
    }
    if (!found) throw std::domain_error("detect_class_range: no demand reaches epsilon");
    return {lo, hi};
}

std::pair<int, int> detect_class_range(const IsrModel& model, const RateSpec& rate, double epsilon,
                                       int max_demand) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("detect_class_range: epsilon must lie in (0, 1)");
    }
    int lo = 0, hi = 0;
    bool found = false;
    double lower = 0.0;
    for (int m = 1; m <= max_demand; ++m) {
        const double upper = cdf_at_threshold(model, demand_threshold(rate, m));
        const double p = upper - lower;
        lower = upper;
        if (p >= epsilon) {
            if (!found) lo = m;
            hi = m;
            found = true;
        }
        // Remaining mass bounds every later class probability.
        if (1.0 - upper < epsilon && found) break;
    }
    if (!found) throw std::domain_error("detect_class_range: no demand reaches epsilon");
    return {lo, hi};
}

HoppedDemand hopped_joint_distribution(const ClassDistribution& p_bsrs,
                                       const ClassDistribution& p_rsms) {
    HoppedDemand joint;
    const auto br = p_bsrs.conditional_masses();
    const auto rm = p_rsms.conditional_masses();
    for (const auto& [a, pa] : br) {
        for (const auto& [b, pb] : rm) {
            const double p = pa * pb;
            if (p == 0.0) continue;
            joint.pairs[{a, b}] += p;
            joint.totals[a + b] += p;
        }
    }
    return joint;
}

}  // namespace relay
