// SPDX-License-Identifier: Apache-2.0

#include "sparsechan/band_profile.hpp"

namespace sparsechan::presets {

BandProfile cm_wave() {
    return BandProfile{Band::cm_wave, "cmWave", -7.17, 0.40, 4.23, 3.25, 9, 4.93};
}

BandProfile mm_wave() {
    return BandProfile{Band::mm_wave, "mmWave", -7.42, 0.46, 5.52, 4.36, 8, 9.86};
}

BandProfile sub_thz() {
    return BandProfile{Band::sub_thz, "subTHz", -8.47, 0.67, 8.0, 7.9, 3, 17.99};
}

std::vector<BandProfile> all() { return {cm_wave(), mm_wave(), sub_thz()}; }

BandProfile by_band(Band b) {
    switch (b) {
        case Band::cm_wave: return cm_wave();
        case Band::mm_wave: return mm_wave();
        case Band::sub_thz: return sub_thz();
        case Band::custom: break;
    }
    throw std::invalid_argument("no preset profile for band 'custom'");
}

}  // namespace sparsechan::presets
