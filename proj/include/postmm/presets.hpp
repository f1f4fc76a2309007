#pragma once

#include "postmm/network.hpp"

namespace postmm::presets {

/// Which side of the guide axis successive posts sit on.
enum class OffsetPattern {
  same_side,    ///< every post at h = a/2 + d
  alternating,  ///< signs +, -, +, ... starting from the first post
};

/// Post at axis offset d (h = a/2 + d).
PostJunction post(const Waveguide& wg, double R, double d);

/// Posts of radius R with axis offsets d[i], separated centre to centre by
/// l[i], signs applied per `pattern`.
Network post_chain(const Waveguide& wg, double R, const std::vector<double>& d,
                   const std::vector<double>& l, OffsetPattern pattern);

/// r = 2 mm posts at d1 = 3 mm and d2 = 5 mm, spaced l, in WR-62.
Network two_post(double l);

/// r = 2 mm, l = 14.7404 mm, offsets d1, d2, d1 with d1 = 3.4475 mm,
/// d2 = 1.5137 mm.
Network three_post_filter(OffsetPattern pattern = OffsetPattern::alternating);

/// r = 2 mm, spacings l1, l2, l2, l1 (14.1461, 15.9014 mm), offsets
/// d1, d2, d3, d2, d1 (3.9639, 1.7958, 1.3672 mm).
Network five_post_filter(OffsetPattern pattern = OffsetPattern::alternating);

}  // namespace postmm::presets
