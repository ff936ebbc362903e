#include <algorithm>
#include <cmath>
#include <numeric>

#include "omics/error.hpp"
#include "omics/features.hpp"

namespace omics {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilies{{{Family::firstorder, "firstorder"},
                                                                       {Family::shape, "shape"},
                                                                       {Family::glcm, "glcm"},
                                                                       {Family::glrlm, "glrlm"},
                                                                       {Family::glszm, "glszm"},
                                                                       {Family::gldm, "gldm"},
                                                                       {Family::ngtdm, "ngtdm"}}};

// Linear interpolation between closest ranks on sorted data.
double percentile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string to_string(Family f) {
    for (const auto& [fam, name] : kFamilies)
        if (fam == f) return std::string(name);
    return {};
}

Family parse_family(std::string_view s) {
    for (const auto& [fam, name] : kFamilies)
        if (name == s) return fam;
    throw InvalidArgument("unknown feature family '" + std::string(s) + "'");
}

std::string FeatureName::str() const { return filter + ":" + to_string(family) + ":" + feature; }

FeatureName FeatureName::parse(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
        throw InvalidArgument("feature name must be filter:family:feature, got '" + std::string(text) + "'");
    return FeatureName{std::string(text.substr(0, a)), parse_family(text.substr(a + 1, b - a - 1)),
                       std::string(text.substr(b + 1))};
}

void FeatureVector::push(FeatureName name, double value) {
    names.push_back(std::move(name));
    values.push_back(value);
}

void FeatureVector::append(const FeatureVector& other) {
    names.insert(names.end(), other.names.begin(), other.names.end());
    values.insert(values.end(), other.values.begin(), other.values.end());
}

double FeatureVector::get(Family family, std::string_view feature) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i].family == family && names[i].feature == feature) return values[i];
    throw InvalidArgument("feature " + to_string(family) + ":" + std::string(feature) + " not present");
}

std::size_t LabelVolume::count() const {
    return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int l) { return l > 0; }));
}

LabelVolume discretize(const Volume3D& v, const Mask3D& m, int n_bins) {
    require_same_grid(v, m);
    if (n_bins < 2) throw InvalidArgument("discretization needs at least 2 bins");
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!m[i]) continue;
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
    }
    LabelVolume out{v.grid(), n_bins, std::vector<int>(v.size(), 0)};
    const double range = hi - lo;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!m[i]) continue;
        if (!(range > 0.0)) {
            out.labels[i] = 1;
            continue;
        }
        const double bin = std::floor(static_cast<double>(n_bins) * (v[i] - lo) / range);
        out.labels[i] = 1 + static_cast<int>(std::clamp(bin, 0.0, static_cast<double>(n_bins - 1)));
    }
    return out;
}

FeatureVector first_order(const Volume3D& v, const Mask3D& m, int n_bins, const std::string& filter) {
    require_same_grid(v, m);
    std::vector<double> xs;
    xs.reserve(m.count());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (m[i]) xs.push_back(v[i]);
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());

    // Sorted summation keeps the result independent of voxel order.
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, energy = 0.0, mad = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        energy += x * x;
        mad += std::abs(d);
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    mad /= n;
    const bool degenerate = m2 <= 1e-20 * (1.0 + mean * mean);
    const double skewness = degenerate ? 0.0 : m3 / std::pow(m2, 1.5);
    const double kurtosis = degenerate ? 0.0 : m4 / (m2 * m2);

    const double p10 = percentile(xs, 0.10), p25 = percentile(xs, 0.25);
    const double p75 = percentile(xs, 0.75), p90 = percentile(xs, 0.90);
    double robust = 0.0, robust_n = 0.0, robust_sum = 0.0;
    for (double x : xs)
        if (x >= p10 && x <= p90) {
            robust_sum += x;
            robust_n += 1.0;
        }
    const double robust_mean = robust_sum / robust_n;
    for (double x : xs)
        if (x >= p10 && x <= p90) robust += std::abs(x - robust_mean);
    robust /= robust_n;

    const LabelVolume labels = discretize(v, m, n_bins);
    std::vector<double> hist(static_cast<std::size_t>(n_bins) + 1, 0.0);
    for (int l : labels.labels)
        if (l > 0) hist[static_cast<std::size_t>(l)] += 1.0;
    double entropy = 0.0, uniformity = 0.0;
    for (double c : hist) {
        if (c <= 0.0) continue;
        const double p = c / n;
        entropy -= p * std::log2(p);
        uniformity += p * p;
    }

    FeatureVector out;
    auto add = [&](const char* name, double value) { out.push({filter, Family::firstorder, name}, value); };
    add("10Percentile", p10);
    add("90Percentile", p90);
    add("Energy", energy);
    add("Entropy", entropy);
    add("InterquartileRange", p75 - p25);
    add("Kurtosis", kurtosis);
    add("Maximum", xs.back());
    add("MeanAbsoluteDeviation", mad);
    add("Mean", mean);
    add("Median", percentile(xs, 0.5));
    add("Minimum", xs.front());
    add("Range", xs.back() - xs.front());
    add("RobustMeanAbsoluteDeviation", robust);
    add("RootMeanSquared", std::sqrt(energy / n));
    add("Skewness", skewness);
    add("TotalEnergy", energy * v.grid().voxel_volume());
    add("Uniformity", uniformity);
    add("Variance", m2);
    return out;
}

}  // namespace omics
