#pragma once

#include <array>
#include <string>
#include <vector>

#include "omics/volume.hpp"

namespace omics {

enum class FilterKind { original, square, squareroot, logarithm, exponential, gradient, log_sigma, wavelet };

/// Single-level Haar subband. Letter a of the label is the filter applied
/// along axis a (x, y, z): L = low-pass, H = high-pass.
enum class Subband : unsigned { LLL = 0, LLH, LHL, LHH, HLL, HLH, HHL, HHH };

std::string to_string(Subband b);
Subband parse_subband(const std::string& label);

/// Image filter applied before feature computation.
class FilterSpec {
public:
    static FilterSpec original() { return FilterSpec(FilterKind::original); }
    static FilterSpec square() { return FilterSpec(FilterKind::square); }
    static FilterSpec squareroot() { return FilterSpec(FilterKind::squareroot); }
    static FilterSpec logarithm() { return FilterSpec(FilterKind::logarithm); }
    static FilterSpec exponential() { return FilterSpec(FilterKind::exponential); }
    static FilterSpec gradient() { return FilterSpec(FilterKind::gradient); }
    /// sigma_mm must be one of 1, 2 or 3.
    static FilterSpec log_sigma(double sigma_mm);
    static FilterSpec wavelet(Subband band);

    /// Inverse of label().
    static FilterSpec parse(const std::string& label);

    FilterKind kind() const noexcept { return kind_; }
    double sigma_mm() const noexcept { return sigma_mm_; }
    Subband subband() const noexcept { return band_; }

    /// Stable identifier used in feature names, e.g. "log_sigma_2mm", "wavelet_HLH".
    std::string label() const;

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;

private:
    explicit FilterSpec(FilterKind k) : kind_(k) {}
    FilterKind kind_ = FilterKind::original;
    double sigma_mm_ = 0.0;
    Subband band_ = Subband::LLL;
};

/// The 17 filters of the default extraction catalogue, original first.
std::vector<FilterSpec> default_filters();

/// Apply a filter; the output lies on the input grid.
Volume3D apply_filter(const Volume3D& v, const FilterSpec& spec);

/// Coefficients of one orthonormal 3D Haar level. Odd axes are cropped by
/// their last slice first; every band has dims floor(n/2) per axis.
struct HaarLevel {
    Grid band_grid;
    std::array<std::vector<double>, 8> bands;  // indexed by Subband
};

HaarLevel haar_decompose(const Volume3D& v);

}  // namespace omics
