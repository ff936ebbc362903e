#include "omics/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "omics/error.hpp"

namespace omics {

namespace {

constexpr std::array<const char*, 8> kSubbandLabels{"LLL", "LLH", "LHL", "LHH", "HLL", "HLH", "HHL", "HHH"};

double max_abs(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

template <typename F>
Volume3D map_values(const Volume3D& v, F&& f) {
    std::vector<double> out(v.size());
    const auto in = v.values();
    std::transform(in.begin(), in.end(), out.begin(), f);
    return Volume3D(v.grid(), std::move(out));
}

double signum(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

// Separable 1D convolution along `axis` with replicate-edge padding.
std::vector<double> convolve_axis(const std::vector<double>& in, const Grid& g, int axis,
                                  const std::vector<double>& kernel) {
    const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    const auto n = static_cast<std::ptrdiff_t>(g.dims[axis]);
    std::vector<double> out(in.size());
    const std::size_t stride = axis == 0 ? 1 : axis == 1 ? g.dims[0] : g.dims[0] * g.dims[1];
    for (std::size_t z = 0; z < g.dims[2]; ++z) {
        for (std::size_t y = 0; y < g.dims[1]; ++y) {
            for (std::size_t x = 0; x < g.dims[0]; ++x) {
                const std::size_t base = g.offset(x, y, z);
                const Index3 pos{x, y, z};
                const auto p = static_cast<std::ptrdiff_t>(pos[axis]);
                const std::size_t line_start = base - static_cast<std::size_t>(p) * stride;
                double acc = 0.0;
                for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
                    const std::ptrdiff_t q = std::clamp<std::ptrdiff_t>(p + k, 0, n - 1);
                    acc += kernel[static_cast<std::size_t>(k + radius)] * in[line_start + static_cast<std::size_t>(q) * stride];
                }
                out[base] = acc;
            }
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma_vox) {
    const auto radius = static_cast<std::size_t>(std::ceil(4.0 * sigma_vox));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(radius);
        k[i] = std::exp(-0.5 * d * d / (sigma_vox * sigma_vox));
        sum += k[i];
    }
    for (double& w : k) w /= sum;
    return k;
}

Volume3D laplacian_of_gaussian(const Volume3D& v, double sigma_mm) {
    const Grid& g = v.grid();
    std::vector<double> smooth(v.values().begin(), v.values().end());
    for (int a = 0; a < 3; ++a) {
        if (g.dims[a] < 2) continue;
        smooth = convolve_axis(smooth, g, a, gaussian_kernel(sigma_mm / g.spacing[a]));
    }
    std::vector<double> out(v.size(), 0.0);
    for (int a = 0; a < 3; ++a) {
        const double h2 = g.spacing[a] * g.spacing[a];
        const std::vector<double> stencil{1.0 / h2, -2.0 / h2, 1.0 / h2};
        const auto second = convolve_axis(smooth, g, a, stencil);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += second[i];
    }
    return Volume3D(g, std::move(out));
}

Volume3D gradient_magnitude(const Volume3D& v) {
    const Grid& g = v.grid();
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t z = 0; z < g.dims[2]; ++z) {
        for (std::size_t y = 0; y < g.dims[1]; ++y) {
            for (std::size_t x = 0; x < g.dims[0]; ++x) {
                const Index3 pos{x, y, z};
                double sq = 0.0;
                for (int a = 0; a < 3; ++a) {
                    Index3 lo = pos, hi = pos;
                    if (pos[a] > 0) lo[a] -= 1;
                    if (pos[a] + 1 < g.dims[a]) hi[a] += 1;
                    const double span = static_cast<double>(hi[a] - lo[a]) * g.spacing[a];
                    const double d = (v.at(hi[0], hi[1], hi[2]) - v.at(lo[0], lo[1], lo[2])) / span;
                    sq += d * d;
                }
                out[g.offset(x, y, z)] = std::sqrt(sq);
            }
        }
    }
    return Volume3D(g, std::move(out));
}

void require_min_dims(const Volume3D& v, const char* what) {
    for (auto n : v.dims())
        if (n < 2) throw InvalidArgument(std::string(what) + " filter needs at least 2 voxels on every axis");
}

}  // namespace

std::string to_string(Subband b) { return kSubbandLabels[static_cast<unsigned>(b)]; }

Subband parse_subband(const std::string& label) {
    for (unsigned i = 0; i < kSubbandLabels.size(); ++i)
        if (label == kSubbandLabels[i]) return static_cast<Subband>(i);
    throw InvalidArgument("unknown wavelet subband '" + label + "'");
}

FilterSpec FilterSpec::log_sigma(double sigma_mm) {
    if (sigma_mm != 1.0 && sigma_mm != 2.0 && sigma_mm != 3.0)
        throw InvalidArgument("LoG sigma must be 1, 2 or 3 mm");
    FilterSpec s(FilterKind::log_sigma);
    s.sigma_mm_ = sigma_mm;
    return s;
}

FilterSpec FilterSpec::wavelet(Subband band) {
    FilterSpec s(FilterKind::wavelet);
    s.band_ = band;
    return s;
}

std::string FilterSpec::label() const {
    switch (kind_) {
        case FilterKind::original: return "original";
        case FilterKind::square: return "square";
        case FilterKind::squareroot: return "squareroot";
        case FilterKind::logarithm: return "logarithm";
        case FilterKind::exponential: return "exponential";
        case FilterKind::gradient: return "gradient";
        case FilterKind::log_sigma: return "log_sigma_" + std::to_string(static_cast<int>(sigma_mm_)) + "mm";
        case FilterKind::wavelet: return "wavelet_" + to_string(band_);
    }
    return {};
}

FilterSpec FilterSpec::parse(const std::string& label) {
    if (label == "original") return original();
    if (label == "square") return square();
    if (label == "squareroot") return squareroot();
    if (label == "logarithm") return logarithm();
    if (label == "exponential") return exponential();
    if (label == "gradient") return gradient();
    if (label.starts_with("log_sigma_") && label.ends_with("mm")) {
        const auto digits = label.substr(10, label.size() - 12);
        if (digits == "1" || digits == "2" || digits == "3") return log_sigma(std::stod(digits));
    }
    if (label.starts_with("wavelet_")) return wavelet(parse_subband(label.substr(8)));
    throw InvalidArgument("unknown filter '" + label + "'");
}

std::vector<FilterSpec> default_filters() {
    std::vector<FilterSpec> out{FilterSpec::original(),    FilterSpec::square(),      FilterSpec::squareroot(),
                                FilterSpec::logarithm(),   FilterSpec::exponential(), FilterSpec::gradient(),
                                FilterSpec::log_sigma(1.0), FilterSpec::log_sigma(2.0), FilterSpec::log_sigma(3.0)};
    for (unsigned b = 0; b < 8; ++b) out.push_back(FilterSpec::wavelet(static_cast<Subband>(b)));
    return out;
}

HaarLevel haar_decompose(const Volume3D& v) {
    require_min_dims(v, "wavelet");
    const Grid& g = v.grid();
    HaarLevel level;
    level.band_grid = g;
    for (int a = 0; a < 3; ++a) {
        level.band_grid.dims[a] = g.dims[a] / 2;
        level.band_grid.spacing[a] = 2.0 * g.spacing[a];
    }
    const Grid& bg = level.band_grid;
    for (auto& b : level.bands) b.assign(bg.size(), 0.0);

    const double norm = 1.0 / std::pow(std::numbers::sqrt2, 3);  // (1/sqrt2)^3
    for (std::size_t z = 0; z < bg.dims[2]; ++z) {
        for (std::size_t y = 0; y < bg.dims[1]; ++y) {
            for (std::size_t x = 0; x < bg.dims[0]; ++x) {
                double c[2][2][2];
                for (int dz = 0; dz < 2; ++dz)
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) c[dx][dy][dz] = v.at(2 * x + dx, 2 * y + dy, 2 * z + dz);
                const std::size_t o = bg.offset(x, y, z);
                for (unsigned band = 0; band < 8; ++band) {
                    // Bit 2 -> x axis high-pass, bit 1 -> y, bit 0 -> z.
                    const bool hx = band & 4u, hy = band & 2u, hz = band & 1u;
                    double acc = 0.0;
                    for (int dz = 0; dz < 2; ++dz)
                        for (int dy = 0; dy < 2; ++dy)
                            for (int dx = 0; dx < 2; ++dx) {
                                const double sx = (hx && dx) ? -1.0 : 1.0;
                                const double sy = (hy && dy) ? -1.0 : 1.0;
                                const double sz = (hz && dz) ? -1.0 : 1.0;
                                acc += sx * sy * sz * c[dx][dy][dz];
                            }
                    level.bands[band][o] = acc * norm;
                }
            }
        }
    }
    return level;
}

Volume3D apply_filter(const Volume3D& v, const FilterSpec& spec) {
    switch (spec.kind()) {
        case FilterKind::original: return v;
        case FilterKind::square: {
            const double m = max_abs(v.values());
            const double c = m > 0.0 ? 1.0 / m : 0.0;
            return map_values(v, [c](double x) { return c * x * x; });
        }
        case FilterKind::squareroot: {
            const double c = std::sqrt(max_abs(v.values()));
            return map_values(v, [c](double x) { return c * std::sqrt(std::abs(x)) * signum(x); });
        }
        case FilterKind::logarithm:
            return map_values(v, [](double x) { return std::log(std::abs(x) + 1.0) * signum(x); });
        case FilterKind::exponential: {
            // Rate 1 overflows for typical intensities; above |x| = 1 the rate
            // shrinks so the largest output equals the largest |input|.
            const double m = max_abs(v.values());
            const double s = m > 1.0 ? std::log(m) / m : 1.0;
            return map_values(v, [s](double x) { return std::exp(std::abs(x) * s); });
        }
        case FilterKind::gradient:
            require_min_dims(v, "gradient");
            return gradient_magnitude(v);
        case FilterKind::log_sigma: return laplacian_of_gaussian(v, spec.sigma_mm());
        case FilterKind::wavelet: {
            const HaarLevel level = haar_decompose(v);
            const auto& band = level.bands[static_cast<unsigned>(spec.subband())];
            const Grid& bg = level.band_grid;
            std::vector<double> out(v.size(), 0.0);
            const Grid& g = v.grid();
            for (std::size_t z = 0; z < 2 * bg.dims[2]; ++z)
                for (std::size_t y = 0; y < 2 * bg.dims[1]; ++y)
                    for (std::size_t x = 0; x < 2 * bg.dims[0]; ++x)
                        out[g.offset(x, y, z)] = band[bg.offset(x / 2, y / 2, z / 2)];
            return Volume3D(g, std::move(out));
        }
    }
    throw InvalidArgument("unhandled filter kind");
}

}  // namespace omics
