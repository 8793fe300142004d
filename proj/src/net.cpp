#include "loopgeo/net.hpp"

#include <cmath>
#include <stdexcept>

namespace loopgeo {

std::vector<int> canonical_rotation(std::vector<int> seq) {
    if (seq.size() <= 1) return seq;
    size_t n = seq.size();
    size_t best = 0;
    for (size_t s = 1; s < n; ++s) {
        for (size_t k = 0; k < n; ++k) {
            int a = seq[(s + k) % n], b = seq[(best + k) % n];
            if (a != b) {
                if (a < b) best = s;
                break;
            }
        }
    }
    std::vector<int> out(n);
    for (size_t k = 0; k < n; ++k) out[k] = seq[(best + k) % n];
    return out;
}

Net::Net(const Cover& cover, double L, double eps) : cover_(&cover), L_(L), eps_(eps) {
    if (!(L > 0) || !(eps > 0)) throw std::invalid_argument("Net: L and eps must be positive");
}

NetElement Net::project(const Curve& gamma) {
    if (!gamma.closed()) throw std::invalid_argument("Net::project: curve must be closed");
    double len = gamma.length();
    if (len > L_) throw std::invalid_argument("Net::project: curve too long for this net");
    const Surface& s = *cover_->surface;

    int pieces = std::max(1, int(std::ceil(6.0 * len / eps_)));
    std::vector<int> labels;
    labels.reserve(pieces);
    for (int i = 0; i < pieces; ++i) {
        SurfacePoint p = gamma.eval(double(i) / pieces);
        int lab = s.field_nearest(cover_->field, p).second;
        // drop consecutive repeats (zero-length nerve hops)
        if (labels.empty() || labels.back() != lab) labels.push_back(lab);
    }
    while (labels.size() > 1 && labels.front() == labels.back()) labels.pop_back();

    std::vector<int> key = canonical_rotation(labels);
    // the returned curve stays aligned with gamma's start so that matched
    // constant-speed sup distances reflect the projection quality
    std::vector<SurfacePoint> bps;
    bps.reserve(labels.size());
    for (int lab : labels) bps.push_back(cover_->centers[lab]);
    NetElement el;
    el.center_indices = key;
    el.aligned_indices = labels;
    el.curve = Curve::through(s, bps, true);
    auto it = elements_.find(key);
    if (it == elements_.end()) elements_.emplace(std::move(key), el);
    return el;
}

}  // namespace loopgeo
