#ifndef CVX_SERIALIZE_HPP
#define CVX_SERIALIZE_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvx/convex_fn.hpp"
#include "cvx/convex_set.hpp"

namespace cvx {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Sets: {"points": [[...]], "balls": [{"center": [...], "radius": r}]}
// ---------------------------------------------------------------------------

inline json set_to_json(const ConvexSet& s) {
    json j;
    if (s.is_empty()) {
        j["empty"] = true;
        return j;
    }
    if (s.is_generator()) {
        const GeneratorSet& g = s.generator();
        j["points"] = json::array();
        for (const auto& p : g.points) j["points"].push_back(p);
        j["balls"] = json::array();
        for (const auto& b : g.balls) j["balls"].push_back({{"center", b.center}, {"radius", b.radius}});
        if (g.open) j["open"] = true;
    } else {
        j["implicit"] = s.implicit().name;
        j["dim"] = s.dim();
        j["interior_point"] = s.interior_point();
    }
    if (!s.cuts().empty()) {
        j["cuts"] = json::array();
        for (const auto& h : s.cuts()) j["cuts"].push_back({{"normal", h.normal}, {"offset", h.offset}});
    }
    return j;
}

inline ConvexSet set_from_json(const json& j) {
    if (j.value("empty", false)) return ConvexSet();
    if (j.contains("implicit"))
        throw PreconditionError("set_from_json: implicit sets are named builders, not data");
    GeneratorSet g;
    if (j.contains("points"))
        for (const auto& p : j["points"]) g.points.push_back(p.get<Vec>());
    if (j.contains("balls"))
        for (const auto& b : j["balls"])
            g.balls.push_back({b.at("center").get<Vec>(), b.at("radius").get<double>()});
    g.open = j.value("open", false);
    if (!g.points.empty())
        g.dim = g.points.front().size();
    else if (!g.balls.empty())
        g.dim = g.balls.front().center.size();
    else
        throw PreconditionError("set_from_json: no generators");
    ConvexSet s(std::move(g));
    if (j.contains("cuts"))
        for (const auto& h : j["cuts"])
            s = s.cut({h.at("normal").get<Vec>(), h.at("offset").get<double>()});
    return s;
}

// ---------------------------------------------------------------------------
// Function expression trees: node-type tags, recursively
// ---------------------------------------------------------------------------

inline json fn_to_json(const FnPtr& nptr) {
    if (!nptr) return nullptr;
    const FnNode& n = *nptr;
    json j;
    switch (n.kind) {
        case FnKind::affine:
            j["node"] = "affine";
            j["w"] = n.w;
            j["b"] = n.b;
            break;
        case FnKind::max_of:
            j["node"] = "max";
            break;
        case FnKind::sum_of:
            j["node"] = "sum";
            break;
        case FnKind::scale:
            j["node"] = "scale";
            j["c"] = n.c;
            break;
        case FnKind::dist_to_set:
            j["node"] = "dist";
            j["set"] = set_to_json(n.set);
            break;
        case FnKind::norm_of_affine:
            j["node"] = "norm_affine";
            j["rows"] = n.mat;
            j["shift"] = n.shift;
            break;
        case FnKind::square:
            j["node"] = "square";
            break;
        case FnKind::sup_family:
            j["node"] = "sup_family";
            j["name"] = n.name;
            j["params"] = n.params;
            break;
        case FnKind::inf_conv:
            j["node"] = "inf_conv";
            j["L"] = n.lip;
            j["set"] = set_to_json(n.set);
            break;
        case FnKind::hartman_limit: {
            j["node"] = "hartman";
            j["base"] = n.base_const;
            json st = json::array();
            for (const auto& s : n.stages)
                st.push_back({{"a", s.a}, {"b", s.b}, {"set", set_to_json(s.D)}});
            j["stages"] = std::move(st);
            break;
        }
        case FnKind::opaque:
            j["node"] = "opaque";
            j["name"] = n.name;
            break;
    }
    if (!n.children.empty()) {
        json kids = json::array();
        for (const auto& c : n.children) kids.push_back(fn_to_json(c));
        j["children"] = std::move(kids);
    }
    return j;
}

inline json fn_to_json(const ConvexFn& f) { return fn_to_json(f.root()); }

inline json certificate_to_json(const Certificate& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["pass"] = c.pass;
    j["samples"] = c.samples;
    j["tolerance"] = c.tolerance;
    j["seed"] = c.seed;
    j["label"] = c.label;
    if (!c.pass) {
        j["worst"] = {{"amount", c.worst.amount}, {"note", c.worst.note}};
        if (!c.worst.at_x.empty()) j["worst"]["at"] = c.worst.at_x;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Atomic writes and CSV
// ---------------------------------------------------------------------------

inline void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericError("atomic_write: cannot open " + tmp);
        out << content;
        if (!out) throw NumericError("atomic_write: short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw NumericError("atomic_write: rename failed for " + path);
}

class CsvBuilder {
  public:
    explicit CsvBuilder(std::vector<std::string> header) : cols_(header.size()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            os_ << (i ? "," : "") << header[i];
        os_ << "\n";
        os_.precision(17);
    }

    template <typename... Ts>
    void row(const Ts&... vals) {
        std::size_t i = 0;
        ((os_ << (i++ ? "," : "") << vals), ...);
        if (i != cols_) throw PreconditionError("CsvBuilder: column count mismatch");
        os_ << "\n";
    }

    std::string str() const { return os_.str(); }

  private:
    std::ostringstream os_;
    std::size_t cols_;
};

}  // namespace cvx

#endif
