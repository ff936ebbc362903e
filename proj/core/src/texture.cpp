#include "omics/texture.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "omics/error.hpp"

namespace omics {

namespace {

using std::size_t;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

bool inside(const Grid& g, std::ptrdiff_t x, std::ptrdiff_t y, std::ptrdiff_t z) {
    return x >= 0 && y >= 0 && z >= 0 && static_cast<size_t>(x) < g.dims[0] && static_cast<size_t>(y) < g.dims[1] &&
           static_cast<size_t>(z) < g.dims[2];
}

// Label at a possibly out-of-grid position; 0 when outside grid or mask.
int label_at(const LabelVolume& lv, std::ptrdiff_t x, std::ptrdiff_t y, std::ptrdiff_t z) {
    if (!inside(lv.grid, x, y, z)) return 0;
    return lv.at(static_cast<size_t>(x), static_cast<size_t>(y), static_cast<size_t>(z));
}

template <typename F>
void for_each_voxel(const LabelVolume& lv, F&& f) {
    const Grid& g = lv.grid;
    for (size_t z = 0; z < g.dims[2]; ++z)
        for (size_t y = 0; y < g.dims[1]; ++y)
            for (size_t x = 0; x < g.dims[0]; ++x) {
                const int l = lv.at(x, y, z);
                if (l > 0)
                    f(static_cast<std::ptrdiff_t>(x), static_cast<std::ptrdiff_t>(y), static_cast<std::ptrdiff_t>(z), l);
            }
}

std::vector<Offset3> all_neighbours() {
    std::vector<Offset3> out;
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (dx || dy || dz) out.push_back({dx, dy, dz});
    return out;
}

TextureMatrix make(TextureKind kind, int levels, int cols) {
    TextureMatrix m;
    m.kind = kind;
    m.n_levels = levels;
    m.n_cols = cols;
    m.cells.assign(static_cast<size_t>(levels) * static_cast<size_t>(cols), 0.0);
    return m;
}

// Drop trailing all-zero columns (run lengths / zone sizes never observed).
void trim_columns(TextureMatrix& m) {
    int used = 1;
    for (int i = 1; i <= m.n_levels; ++i)
        for (int j = 1; j <= m.n_cols; ++j)
            if (m(i, j) != 0.0) used = std::max(used, j);
    if (used == m.n_cols) return;
    TextureMatrix t = make(m.kind, m.n_levels, used);
    t.n_voxels = m.n_voxels;
    t.n_directions = m.n_directions;
    for (int i = 1; i <= m.n_levels; ++i)
        for (int j = 1; j <= used; ++j) t(i, j) = m(i, j);
    m = std::move(t);
}

TextureMatrix build_glcm(const LabelVolume& lv, const TextureParams& p) {
    TextureMatrix m = make(TextureKind::glcm, lv.n_bins, lv.n_bins);
    double total = 0.0;
    for_each_voxel(lv, [&](auto x, auto y, auto z, int l) {
        for (const auto& d : p.directions) {
            const int r = label_at(lv, x + d.dx, y + d.dy, z + d.dz);
            if (r == 0) continue;
            m(l, r) += 1.0;
            m(r, l) += 1.0;
            total += 2.0;
        }
    });
    if (total > 0.0) {
        for (double& c : m.cells) c /= total;
    } else {
        // No neighbouring pair in the region (single voxel): all mass on the diagonal.
        for_each_voxel(lv, [&](auto, auto, auto, int l) { m(l, l) += 1.0; });
        const double n = static_cast<double>(lv.count());
        for (double& c : m.cells) c /= n;
    }
    return m;
}

TextureMatrix build_glrlm(const LabelVolume& lv, const TextureParams& p) {
    const auto& dims = lv.grid.dims;
    const int max_run = static_cast<int>(std::max({dims[0], dims[1], dims[2]}));
    TextureMatrix m = make(TextureKind::glrlm, lv.n_bins, max_run);
    for_each_voxel(lv, [&](auto x, auto y, auto z, int l) {
        for (const auto& d : p.directions) {
            if (label_at(lv, x - d.dx, y - d.dy, z - d.dz) == l) continue;  // not a run start
            int len = 1;
            while (label_at(lv, x + len * d.dx, y + len * d.dy, z + len * d.dz) == l) ++len;
            m(l, len) += 1.0;
        }
    });
    trim_columns(m);
    return m;
}

TextureMatrix build_glszm(const LabelVolume& lv) {
    const Grid& g = lv.grid;
    const auto nbrs = all_neighbours();
    std::vector<std::uint8_t> seen(lv.labels.size(), 0);
    std::vector<std::pair<int, int>> zones;  // (level, size)
    int max_size = 1;
    for_each_voxel(lv, [&](auto x, auto y, auto z, int l) {
        const size_t start = g.offset(static_cast<size_t>(x), static_cast<size_t>(y), static_cast<size_t>(z));
        if (seen[start]) return;
        seen[start] = 1;
        std::deque<std::array<std::ptrdiff_t, 3>> queue{{x, y, z}};
        int size = 0;
        while (!queue.empty()) {
            const auto [cx, cy, cz] = queue.front();
            queue.pop_front();
            ++size;
            for (const auto& d : nbrs) {
                const std::ptrdiff_t nx = cx + d.dx, ny = cy + d.dy, nz = cz + d.dz;
                if (label_at(lv, nx, ny, nz) != l) continue;
                const size_t o = g.offset(static_cast<size_t>(nx), static_cast<size_t>(ny), static_cast<size_t>(nz));
                if (seen[o]) continue;
                seen[o] = 1;
                queue.push_back({nx, ny, nz});
            }
        }
        zones.emplace_back(l, size);
        max_size = std::max(max_size, size);
    });
    TextureMatrix m = make(TextureKind::glszm, lv.n_bins, max_size);
    for (const auto& [l, s] : zones) m(l, s) += 1.0;
    return m;
}

TextureMatrix build_gldm(const LabelVolume& lv, const TextureParams& p) {
    const auto nbrs = all_neighbours();
    TextureMatrix m = make(TextureKind::gldm, lv.n_bins, static_cast<int>(nbrs.size()) + 1);
    for_each_voxel(lv, [&](auto x, auto y, auto z, int l) {
        int dependent = 1;
        for (const auto& d : nbrs) {
            const int r = label_at(lv, x + d.dx, y + d.dy, z + d.dz);
            if (r > 0 && std::abs(r - l) <= p.gldm_alpha) ++dependent;
        }
        m(l, dependent) += 1.0;
    });
    trim_columns(m);
    return m;
}

TextureMatrix build_ngtdm(const LabelVolume& lv) {
    const auto nbrs = all_neighbours();
    TextureMatrix m = make(TextureKind::ngtdm, lv.n_bins, 2);
    for_each_voxel(lv, [&](auto x, auto y, auto z, int l) {
        double sum = 0.0;
        int n = 0;
        for (const auto& d : nbrs) {
            const int r = label_at(lv, x + d.dx, y + d.dy, z + d.dz);
            if (r == 0) continue;
            sum += r;
            ++n;
        }
        if (n == 0) return;  // isolated voxel has no neighbourhood
        m(l, 1) += 1.0;
        m(l, 2) += std::abs(static_cast<double>(l) - sum / n);
    });
    return m;
}

// Features shared by the run-length, size-zone and dependence matrices,
// which all tabulate counts by (gray level i, size-like quantity j).
struct EmphasisNames {
    const char* small;        // sum p / j^2
    const char* large;        // sum p * j^2
    const char* gln;          // gray level non-uniformity
    const char* glnn;         // ... normalized
    const char* size_nu;      // size non-uniformity
    const char* size_nun;     // ... normalized
    const char* percentage;   // count / voxels (nullptr to skip)
    const char* size_var;     // variance of j
    const char* entropy;      // entropy of p
    const char* low_gray;     // sum p / i^2
    const char* high_gray;    // sum p * i^2
    const char* small_low;    // sum p / (i^2 j^2)
    const char* small_high;   // sum p * i^2 / j^2
    const char* large_low;    // sum p * j^2 / i^2
    const char* large_high;   // sum p * i^2 * j^2
};

void emphasis_features(const TextureMatrix& m, const EmphasisNames& names, double denominator_voxels,
                       FeatureVector& out, const std::string& filter) {
    const Family fam = family_of(m.kind);
    auto add = [&](const char* name, double v) {
        if (name) out.push({filter, fam, name}, v);
    };
    double total = 0.0;
    for (double c : m.cells) total += c;
    std::vector<double> by_level(static_cast<size_t>(m.n_levels) + 1, 0.0);
    std::vector<double> by_size(static_cast<size_t>(m.n_cols) + 1, 0.0);
    double se = 0, le = 0, lg = 0, hg = 0, sl = 0, sh = 0, ll = 0, lh = 0, mu_i = 0, mu_j = 0, ent = 0;
    for (int i = 1; i <= m.n_levels; ++i)
        for (int j = 1; j <= m.n_cols; ++j) {
            const double c = m(i, j);
            if (c == 0.0) continue;
            const double p = c / total;
            const double i2 = double(i) * i, j2 = double(j) * j;
            by_level[static_cast<size_t>(i)] += c;
            by_size[static_cast<size_t>(j)] += c;
            se += p / j2;
            le += p * j2;
            lg += p / i2;
            hg += p * i2;
            sl += p / (i2 * j2);
            sh += p * i2 / j2;
            ll += p * j2 / i2;
            lh += p * i2 * j2;
            mu_i += p * i;
            mu_j += p * j;
            ent -= xlog2x(p);
        }
    double gln = 0, sn = 0, var_i = 0, var_j = 0;
    for (int i = 1; i <= m.n_levels; ++i) gln += by_level[static_cast<size_t>(i)] * by_level[static_cast<size_t>(i)];
    for (int j = 1; j <= m.n_cols; ++j) sn += by_size[static_cast<size_t>(j)] * by_size[static_cast<size_t>(j)];
    for (int i = 1; i <= m.n_levels; ++i)
        for (int j = 1; j <= m.n_cols; ++j) {
            const double p = m(i, j) / total;
            var_i += p * (i - mu_i) * (i - mu_i);
            var_j += p * (j - mu_j) * (j - mu_j);
        }
    add(names.small, se);
    add(names.large, le);
    add(names.gln, gln / total);
    add(names.glnn, gln / (total * total));
    add(names.size_nu, sn / total);
    add(names.size_nun, sn / (total * total));
    add(names.percentage, total / denominator_voxels);
    add("GrayLevelVariance", var_i);
    add(names.size_var, var_j);
    add(names.entropy, ent);
    add(names.low_gray, lg);
    add(names.high_gray, hg);
    add(names.small_low, sl);
    add(names.small_high, sh);
    add(names.large_low, ll);
    add(names.large_high, lh);
}

void glcm_features(const TextureMatrix& m, FeatureVector& out, const std::string& filter) {
    auto add = [&](const char* name, double v) { out.push({filter, Family::glcm, name}, v); };
    const int ng = m.n_levels;
    std::vector<double> px(static_cast<size_t>(ng) + 1, 0.0), py(px);
    std::vector<double> psum(2 * static_cast<size_t>(ng) + 1, 0.0), pdiff(static_cast<size_t>(ng), 0.0);
    double autocorr = 0, contrast = 0, energy = 0, hxy = 0, idm = 0, idmn = 0, id = 0, idn = 0, maxp = 0;
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            const double p = m(i, j);
            if (p == 0.0) continue;
            px[static_cast<size_t>(i)] += p;
            py[static_cast<size_t>(j)] += p;
            psum[static_cast<size_t>(i + j)] += p;
            pdiff[static_cast<size_t>(std::abs(i - j))] += p;
            const double d = i - j, ad = std::abs(d);
            autocorr += double(i) * j * p;
            contrast += d * d * p;
            energy += p * p;
            hxy -= xlog2x(p);
            idm += p / (1.0 + d * d);
            idmn += p / (1.0 + d * d / (double(ng) * ng));
            id += p / (1.0 + ad);
            idn += p / (1.0 + ad / ng);
            maxp = std::max(maxp, p);
        }
    double mux = 0, muy = 0, hx = 0, hy = 0;
    for (int i = 1; i <= ng; ++i) {
        mux += i * px[static_cast<size_t>(i)];
        muy += i * py[static_cast<size_t>(i)];
        hx -= xlog2x(px[static_cast<size_t>(i)]);
        hy -= xlog2x(py[static_cast<size_t>(i)]);
    }
    double varx = 0, vary = 0, prom = 0, shade = 0, tend = 0, hxy1 = 0, hxy2 = 0;
    for (int i = 1; i <= ng; ++i) {
        varx += (i - mux) * (i - mux) * px[static_cast<size_t>(i)];
        vary += (i - muy) * (i - muy) * py[static_cast<size_t>(i)];
    }
    for (int i = 1; i <= ng; ++i)
        for (int j = 1; j <= ng; ++j) {
            const double pxy = px[static_cast<size_t>(i)] * py[static_cast<size_t>(j)];
            const double p = m(i, j);
            if (pxy > 0.0) {
                hxy1 -= p * std::log2(pxy);
                hxy2 -= pxy * std::log2(pxy);
            }
            if (p == 0.0) continue;
            const double s = i + j - mux - muy;
            prom += s * s * s * s * p;
            shade += s * s * s * p;
            tend += s * s * p;
        }
    double sum_avg = 0, sum_ent = 0, diff_avg = 0, diff_ent = 0, inv_var = 0;
    for (size_t k = 2; k < psum.size(); ++k) {
        sum_avg += double(k) * psum[k];
        sum_ent -= xlog2x(psum[k]);
    }
    for (size_t k = 0; k < pdiff.size(); ++k) {
        diff_avg += double(k) * pdiff[k];
        diff_ent -= xlog2x(pdiff[k]);
        if (k > 0) inv_var += pdiff[k] / (double(k) * double(k));
    }
    double diff_var = 0;
    for (size_t k = 0; k < pdiff.size(); ++k) diff_var += (double(k) - diff_avg) * (double(k) - diff_avg) * pdiff[k];
    const double sxy = std::sqrt(varx * vary);
    const double hmax = std::max(hx, hy);

    add("Autocorrelation", autocorr);
    add("ClusterProminence", prom);
    add("ClusterShade", shade);
    add("ClusterTendency", tend);
    add("Contrast", contrast);
    // Zero marginal variance: perfectly (trivially) correlated.
    add("Correlation", sxy > 0.0 ? (autocorr - mux * muy) / sxy : 1.0);
    add("DifferenceAverage", diff_avg);
    add("DifferenceEntropy", diff_ent);
    add("DifferenceVariance", diff_var);
    add("Id", id);
    add("Idm", idm);
    add("Idmn", idmn);
    add("Idn", idn);
    add("Imc1", hmax > 0.0 ? (hxy - hxy1) / hmax : 0.0);
    add("Imc2", std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2 - hxy)))));
    add("InverseVariance", inv_var);
    add("JointAverage", mux);
    add("JointEnergy", energy);
    add("JointEntropy", hxy);
    add("MaximumProbability", maxp);
    add("SumAverage", sum_avg);
    add("SumEntropy", sum_ent);
    add("SumSquares", varx);
}

void ngtdm_features(const TextureMatrix& m, FeatureVector& out, const std::string& filter) {
    auto add = [&](const char* name, double v) { out.push({filter, Family::ngtdm, name}, v); };
    double nvp = 0.0, s_total = 0.0;
    for (int i = 1; i <= m.n_levels; ++i) {
        nvp += m(i, 1);
        s_total += m(i, 2);
    }
    std::vector<std::pair<int, std::pair<double, double>>> levels;  // (i, (p_i, s_i)) with p_i > 0
    for (int i = 1; i <= m.n_levels; ++i)
        if (m(i, 1) > 0.0) levels.push_back({i, {m(i, 1) / nvp, m(i, 2)}});
    const auto ngp = static_cast<double>(levels.size());

    double ps = 0.0;
    for (const auto& [i, v] : levels) ps += v.first * v.second;
    double pair_contrast = 0, busy_den = 0, complexity = 0, strength_num = 0;
    for (const auto& [i, a] : levels)
        for (const auto& [j, b] : levels) {
            const double d = i - j;
            pair_contrast += a.first * b.first * d * d;
            busy_den += std::abs(i * a.first - j * b.first);
            complexity += std::abs(d) * (a.first * a.second + b.first * b.second) / (a.first + b.first);
            strength_num += (a.first + b.first) * d * d;
        }
    const double coarseness = ps > 0.0 ? 1.0 / ps : 1e6;
    const double contrast = ngp > 1.0 ? pair_contrast / (ngp * (ngp - 1.0)) * s_total / nvp : 0.0;
    add("Busyness", busy_den > 0.0 ? ps / busy_den : 0.0);
    add("Coarseness", coarseness);
    add("Complexity", nvp > 0.0 ? complexity / nvp : 0.0);
    add("Contrast", contrast);
    add("Strength", s_total > 0.0 ? strength_num / s_total : 0.0);
}

}  // namespace

Family family_of(TextureKind k) {
    switch (k) {
        case TextureKind::glcm: return Family::glcm;
        case TextureKind::glrlm: return Family::glrlm;
        case TextureKind::glszm: return Family::glszm;
        case TextureKind::gldm: return Family::gldm;
        case TextureKind::ngtdm: return Family::ngtdm;
    }
    return Family::glcm;
}

const std::vector<Offset3>& unique_directions() {
    static const std::vector<Offset3> dirs{{1, 0, 0},  {0, 1, 0},  {0, 0, 1},   {1, 1, 0},  {1, -1, 0},
                                           {1, 0, 1},  {1, 0, -1}, {0, 1, 1},   {0, 1, -1}, {1, 1, 1},
                                           {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
    return dirs;
}

TextureMatrix texture_matrix(TextureKind kind, const LabelVolume& labels, const TextureParams& params) {
    const std::size_t n = labels.count();
    if (n == 0) throw InvalidArgument("texture matrix of an empty region");
    if (labels.n_bins < 1) throw InvalidArgument("label volume has no gray levels");
    if ((kind == TextureKind::glcm || kind == TextureKind::glrlm) && params.directions.empty())
        throw InvalidArgument("texture matrix needs at least one direction");
    TextureMatrix m;
    switch (kind) {
        case TextureKind::glcm: m = build_glcm(labels, params); break;
        case TextureKind::glrlm: m = build_glrlm(labels, params); break;
        case TextureKind::glszm: m = build_glszm(labels); break;
        case TextureKind::gldm: m = build_gldm(labels, params); break;
        case TextureKind::ngtdm: m = build_ngtdm(labels); break;
    }
    m.n_voxels = static_cast<double>(n);
    m.n_directions = kind == TextureKind::glrlm ? static_cast<int>(params.directions.size()) : 1;
    return m;
}

FeatureVector texture_features(const TextureMatrix& m, const std::string& filter) {
    FeatureVector out;
    switch (m.kind) {
        case TextureKind::glcm: glcm_features(m, out, filter); break;
        case TextureKind::glrlm:
            emphasis_features(m,
                              {"ShortRunEmphasis", "LongRunEmphasis", "GrayLevelNonUniformity",
                               "GrayLevelNonUniformityNormalized", "RunLengthNonUniformity",
                               "RunLengthNonUniformityNormalized", "RunPercentage", "RunVariance", "RunEntropy",
                               "LowGrayLevelRunEmphasis", "HighGrayLevelRunEmphasis", "ShortRunLowGrayLevelEmphasis",
                               "ShortRunHighGrayLevelEmphasis", "LongRunLowGrayLevelEmphasis",
                               "LongRunHighGrayLevelEmphasis"},
                              m.n_voxels * m.n_directions, out, filter);
            break;
        case TextureKind::glszm:
            emphasis_features(m,
                              {"SmallAreaEmphasis", "LargeAreaEmphasis", "GrayLevelNonUniformity",
                               "GrayLevelNonUniformityNormalized", "SizeZoneNonUniformity",
                               "SizeZoneNonUniformityNormalized", "ZonePercentage", "ZoneVariance", "ZoneEntropy",
                               "LowGrayLevelZoneEmphasis", "HighGrayLevelZoneEmphasis", "SmallAreaLowGrayLevelEmphasis",
                               "SmallAreaHighGrayLevelEmphasis", "LargeAreaLowGrayLevelEmphasis",
                               "LargeAreaHighGrayLevelEmphasis"},
                              m.n_voxels, out, filter);
            break;
        case TextureKind::gldm:
            emphasis_features(m,
                              {"SmallDependenceEmphasis", "LargeDependenceEmphasis", "GrayLevelNonUniformity",
                               "GrayLevelNonUniformityNormalized", "DependenceNonUniformity",
                               "DependenceNonUniformityNormalized", nullptr, "DependenceVariance", "DependenceEntropy",
                               "LowGrayLevelEmphasis", "HighGrayLevelEmphasis", "SmallDependenceLowGrayLevelEmphasis",
                               "SmallDependenceHighGrayLevelEmphasis", "LargeDependenceLowGrayLevelEmphasis",
                               "LargeDependenceHighGrayLevelEmphasis"},
                              m.n_voxels, out, filter);
            break;
        case TextureKind::ngtdm: ngtdm_features(m, out, filter); break;
    }
    return out;
}

}  // namespace omics
