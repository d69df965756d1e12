#pragma once

#include <cstdint>

#include "pcreg/geometry/point_cloud.hpp"
#include "pcreg/geometry/rigid_transform.hpp"

namespace pcreg {

enum class CropMode : std::uint8_t { HalfSpace, Spherical };

struct SyntheticPairSpec {
    double overlap_target = 0.5;    // fraction in (0, 1]
    CropMode crop_mode = CropMode::HalfSpace;
    double periodic_period = 10.0;  // meters
    double periodic_duty = 0.7;     // fraction in (0, 1]
    double max_rotation_deg = 30.0;
    double max_translation_m = 5.0;
    double noise_sigma = 0.0;       // meters, >= 0

    // Throws std::invalid_argument outside the documented ranges.
    void validate() const;
};

struct SyntheticPair {
    PointCloud p;          // fragment in the scan frame
    PointCloud q;          // fragment moved by t_gt
    RigidTransform t_gt;   // aligns p onto q
    double measured_overlap = 0.0;
};

// Two partially overlapping fragments of one scan: crops tuned to hit
// overlap_target, independent periodic sampling of each fragment, Gaussian
// jitter, and a random pose within the spec's magnitudes applied to Q.
// Deterministic in (scan, spec, seed). Overlap is measured as the fraction
// of P points with a Q neighbor within 0.5 m after ground-truth alignment;
// if it cannot be brought within +/-0.1 of the target over bounded retries,
// throws GenerationFailedError.
SyntheticPair make_synthetic_pair(const PointCloud& scan, const SyntheticPairSpec& spec,
                                  std::uint64_t seed);

// Measured overlap of p against q after aligning with t (fraction of p
// points with a q neighbor within `radius`). Exposed for tests and reports.
double measure_overlap(const PointCloud& p, const PointCloud& q, const RigidTransform& t,
                       double radius = 0.5);

}  // namespace pcreg
