#include "postmm/presets.hpp"

#include "postmm/errors.hpp"

namespace postmm::presets {

PostJunction post(const Waveguide& wg, double R, double d) { return {wg, 0.5 * wg.a + d, R}; }

Network post_chain(const Waveguide& wg, double R, const std::vector<double>& d,
                   const std::vector<double>& l, OffsetPattern pattern) {
  if (d.empty() || l.size() + 1 != d.size())
    throw InvalidInput("post chain needs one spacing fewer than posts");
  Network net{wg, {}};
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) net.elements.emplace_back(UniformGuide{l[i - 1]});
    const double sign = pattern == OffsetPattern::alternating && i % 2 == 1 ? -1.0 : 1.0;
    net.elements.emplace_back(post(wg, R, sign * d[i]));
  }
  return net;
}

Network two_post(double l) {
  return post_chain(Waveguide::wr62(), 2e-3, {3e-3, 5e-3}, {l}, OffsetPattern::same_side);
}

Network three_post_filter(OffsetPattern pattern) {
  const double d1 = 3.4475e-3;
  const double d2 = 1.5137e-3;
  const double l = 14.7404e-3;
  return post_chain(Waveguide::wr62(), 2e-3, {d1, d2, d1}, {l, l}, pattern);
}

Network five_post_filter(OffsetPattern pattern) {
  const double d1 = 3.9639e-3;
  const double d2 = 1.7958e-3;
  const double d3 = 1.3672e-3;
  const double l1 = 14.1461e-3;
  const double l2 = 15.9014e-3;
  return post_chain(Waveguide::wr62(), 2e-3, {d1, d2, d3, d2, d1}, {l1, l2, l2, l1}, pattern);
}

}  // namespace postmm::presets
