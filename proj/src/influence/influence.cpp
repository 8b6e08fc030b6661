#include "ptcyl/influence/influence.hpp"

#include <stdexcept>

namespace ptcyl::influence {

InfluenceMatrix build_influence(
    int m, int parity, const std::vector<int>& blocks,
    const std::function<Eigen::VectorXcd(int)>& probe_response,
    ScalingMode mode, const Thresholds& th) {
  int total = 0;
  for (int s : blocks) total += s;
  if (total <= 0)
    throw std::invalid_argument("build_influence: empty probe layout");
  InfluenceMatrix im;
  im.m = m;
  im.parity = parity;
  im.blocks = blocks;
  im.C.resize(total, total);
  for (int j = 0; j < total; ++j) {
    Eigen::VectorXcd col = probe_response(j);
    if (col.size() != total)
      throw std::runtime_error("build_influence: bad residual length");
    im.C.col(j) = col;
  }
  im.inv = condition_matrix(im.C, blocks, mode, th);
  return im;
}

} // namespace ptcyl::influence
