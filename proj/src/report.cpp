#include "loopgeo/report.hpp"

#include <algorithm>
#include <ctime>
#include <sstream>

namespace loopgeo {

using nlohmann::ordered_json;

ordered_json report_json(const LogScalar& x) {
    ordered_json j;
    j["level"] = x.level();
    j["lo"] = x.lo();
    j["hi"] = x.hi();
    j["zero"] = x.is_zero();
    j["repr"] = x.str();
    return j;
}

ordered_json report_json(const GeometryParams& p) {
    ordered_json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["v"] = p.v;
    j["D"] = p.D;
    j["d"] = p.d;
    j["c"] = p.c;
    j["a"] = p.a;
    j["delta"] = p.delta;
    j["l"] = p.l;
    return j;
}

ordered_json report_json(const BoundReport& r) {
    ordered_json j;
    j["inputs"] = report_json(r.inputs);
    j["c1"] = r.constants_c1;
    j["c2"] = r.constants_c2;
    j["r"] = report_json(r.r);
    j["R"] = report_json(r.R);
    j["ball_count"] = report_json(r.N_bound);
    j["net_size"] = report_json(r.net_size_bound);
    j["width"] = report_json(r.W_bound);
    j["G"] = report_json(r.G_value);
    j["envelope"] = report_json(r.envelope);
    j["length"] = report_json(r.L_bound);
    // plain doubles where the magnitude allows, for human eyes
    j["r_value"] = r.r.to_double();
    j["R_value"] = r.R.to_double();
    return j;
}

ordered_json report_json(const SurfaceInvariants& inv) {
    ordered_json j;
    j["diameter_est"] = inv.diameter_est;
    j["area"] = inv.area;
    j["curv_lower_est"] = inv.curv_lower_est;
    return j;
}

ordered_json report_json(const Cover& c) {
    ordered_json j;
    j["eps"] = c.eps;
    j["pack_radius"] = c.pack_radius;
    j["cover_radius"] = c.cover_radius;
    j["center_count"] = c.centers.size();
    j["center_vertices"] = c.center_vertices;
    ordered_json edges = ordered_json::array();
    for (const NerveEdge& e : c.nerve_edges) edges.push_back({e.i, e.j, e.dist});
    j["nerve_edges"] = std::move(edges);
    return j;
}

ordered_json report_json(const Calibration& cal) {
    ordered_json j;
    j["r_emp"] = cal.r_emp;
    j["R_emp"] = cal.R_emp;
    j["probes"] = cal.probes;
    return j;
}

namespace {
const char* kind_name(Homotopy::Kind k) {
    switch (k) {
        case Homotopy::Kind::FreeClosed: return "free-closed";
        case Homotopy::Kind::BasedLoop: return "based-loop";
        default: return "fixed-endpoints";
    }
}
}  // namespace

ordered_json report_json(const Homotopy& H) {
    ordered_json j;
    j["kind"] = kind_name(H.kind);
    j["levels"] = H.levels.size();
    j["max_level_length"] = H.max_level_length();
    j["width"] = width(H);
    j["continuity_budget"] = H.continuity_budget;
    j["is_contraction"] = H.is_contraction();
    return j;
}

ordered_json report_json(const Curve& c, int sample_points) {
    ordered_json j;
    j["length"] = c.length();
    j["closed"] = c.closed();
    if (sample_points > 0) {
        const Surface& s = c.surface();
        ordered_json pts = ordered_json::array();
        for (const SurfacePoint& p : c.samples(sample_points)) {
            Vec3 x = s.position(p);
            pts.push_back({x.x, x.y, x.z});
        }
        j["samples"] = std::move(pts);
    }
    return j;
}

ordered_json report_json(const CompressedSweepout& cs) {
    ordered_json j;
    j["members"] = cs.out.family.size();
    j["degree"] = cs.out.degree;
    double mx = 0;
    ordered_json lens = ordered_json::array();
    for (const Curve& c : cs.out.family) {
        lens.push_back(c.length());
        mx = std::max(mx, c.length());
    }
    j["max_length"] = mx;
    j["lengths"] = std::move(lens);
    j["W_emp"] = cs.W_emp;
    j["delta_measured"] = cs.delta_measured;
    return j;
}

ordered_json metadata_block() {
    ordered_json j;
    j["generator"] = "loopgeo";
    j["time_utc"] = []() {
        std::time_t t = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        return std::string(buf);
    }();
    return j;
}

std::string level_lengths_csv(const Homotopy& H) {
    std::ostringstream out;
    out << "level,length\n";
    for (size_t j = 0; j < H.levels.size(); ++j) out << j << "," << H.levels[j].length() << "\n";
    return out.str();
}

std::string curve_samples_csv(const Curve& c, int samples) {
    const Surface& s = c.surface();
    std::ostringstream out;
    out << "t,x,y,z\n";
    std::vector<SurfacePoint> pts = c.samples(samples);
    for (size_t i = 0; i < pts.size(); ++i) {
        Vec3 x = s.position(pts[i]);
        out << double(i) / samples << "," << x.x << "," << x.y << "," << x.z << "\n";
    }
    return out.str();
}

std::string render_report(const ordered_json& body) { return body.dump(2) + "\n"; }

}  // namespace loopgeo
