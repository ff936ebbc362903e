#pragma once

#include <filesystem>

#include "omics/volume.hpp"

namespace omics {

// VOL1 format: a JSON header
//   {"dims":[nx,ny,nz],"spacing":[sx,sy,sz],"origin":[ox,oy,oz],
//    "dtype":"f32"|"u8","data":"<path relative to the header>"}
// next to a raw little-endian payload of nx*ny*nz elements, x fastest.

Volume3D read_volume(const std::filesystem::path& header);
Mask3D read_mask(const std::filesystem::path& header);

/// Writes `<header>` and its payload `<header stem>.raw` in the same directory.
void write_volume(const std::filesystem::path& header, const Volume3D& v);
void write_mask(const std::filesystem::path& header, const Mask3D& m);

}  // namespace omics
