#pragma once

#include <map>
#include <vector>

#include "loopgeo/cover.hpp"
#include "loopgeo/curve.hpp"

namespace loopgeo {

/// A broken geodesic through cover centers, keyed by its cyclic center
/// sequence.
struct NetElement {
    std::vector<int> center_indices;  // canonical (minimal) rotation
    std::vector<int> aligned_indices; // same cycle, starting where the source curve starts
    Curve curve;                      // broken geodesic through aligned_indices
};

/// Lexicographically minimal rotation of a cyclic index sequence.
std::vector<int> canonical_rotation(std::vector<int> seq);

/// The net of broken geodesics over a cover, holding only the elements that
/// projections have materialized (the full net is astronomically large).
class Net {
public:
    Net(const Cover& cover, double L, double eps);

    const Cover& cover() const { return *cover_; }
    double L() const { return L_; }
    double eps() const { return eps_; }

    /// Subdivide gamma into arcs shorter than eps/6, snap the subdivision
    /// points to their nearest cover centers, and connect consecutive
    /// centers by minimizing geodesics. Inserts the element under its
    /// canonical key; the returned copy keeps gamma's start alignment.
    NetElement project(const Curve& gamma);

    size_t size_observed() const { return elements_.size(); }
    const std::map<std::vector<int>, NetElement>& elements() const { return elements_; }

private:
    const Cover* cover_;
    double L_, eps_;
    std::map<std::vector<int>, NetElement> elements_;
};

}  // namespace loopgeo
