#pragma once

// Serialization: environment files, partition-tree dumps, and the event
// trace.  All output goes through nlohmann::ordered_json so that key order
// and number formatting are deterministic (traces must replay byte-exact).

#include "partition.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace visdeploy::io {

using json = nlohmann::ordered_json;

inline json to_json(Vec2 p) { return json::array({p.x, p.y}); }

inline Vec2 vec_from(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("expected [x, y] coordinate pair");
    return Vec2(j[0].get<double>(), j[1].get<double>());
}

inline json to_json(const Polygon& p) {
    json a = json::array();
    for (auto& v : p.v) a.push_back(to_json(v));
    return a;
}

inline Polygon polygon_from(const json& j) {
    Polygon p;
    for (auto& e : j) p.v.push_back(vec_from(e));
    return p;
}

inline json to_json(const Segment& s) { return json::array({to_json(s.a), to_json(s.b)}); }

inline json to_json(const Ptvuid& id) {
    json a = json::array();
    for (int d : id.d) a.push_back(d);
    return a;
}

inline Ptvuid ptvuid_from(const json& j) {
    Ptvuid id;
    for (auto& e : j) id.d.push_back(e.get<int>());
    return id;
}

// --------------------------------------------------------------------------
// Environment files: {"outer": [[x,y],...], "holes": [[[x,y],...], ...]}

inline json to_json(const Environment& env) {
    json j;
    j["outer"] = to_json(env.outer);
    json hs = json::array();
    for (auto& h : env.holes) hs.push_back(to_json(h));
    j["holes"] = hs;
    return j;
}

inline Environment env_from_json(const json& j) {
    if (!j.contains("outer"))
        throw std::invalid_argument("environment file: missing \"outer\"");
    Environment env;
    env.outer = polygon_from(j["outer"]);
    if (j.contains("holes"))
        for (auto& h : j["holes"]) env.holes.push_back(polygon_from(h));
    env.normalize();
    env.validate(); // throws with the first violation and vertex indices
    return env;
}

inline Environment load_env(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open environment file: " + path);
    json j = json::parse(in);
    return env_from_json(j);
}

inline void save_env(const Environment& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write environment file: " + path);
    out << to_json(env).dump(2) << "\n";
}

// --------------------------------------------------------------------------
// Partition-tree dump: every vertex {id, vantage, boundary, gap_edges, sparse}
// plus the phantom-wall registry.

inline json cell_to_json(const Cell& c) {
    json j;
    j["id"] = to_json(c.id);
    j["vantage"] = to_json(c.vantage);
    j["boundary"] = to_json(c.poly);
    json gaps = json::array();
    for (auto& g : c.gaps) {
        json gj;
        gj["seg"] = to_json(g.seg);
        gj["label"] = to_string(g.label);
        gj["index"] = g.child_index;
        gaps.push_back(gj);
    }
    j["gap_edges"] = gaps;
    j["sparse"] = c.vlabel == VantageLabel::unlabeled
                      ? json(nullptr)
                      : json(c.vlabel == VantageLabel::sparse);
    j["status"] = to_string(c.status);
    return j;
}

inline json tree_to_json(const PartitionTree& tree, std::size_t root_vertex) {
    json j;
    j["root_vertex"] = root_vertex;
    json cells = json::array();
    for (auto& [id, c] : tree.cells) cells.push_back(cell_to_json(c));
    j["vertices"] = cells;
    json walls = json::array();
    for (auto& w : tree.walls) {
        json wj;
        wj["seg"] = to_json(w.seg);
        wj["cell"] = to_json(w.cell);
        wj["gap"] = w.gap_index;
        walls.push_back(wj);
    }
    j["phantom_walls"] = walls;
    return j;
}

inline PartitionTree tree_from_json(const json& j) {
    PartitionTree tree;
    for (auto& cj : j.at("vertices")) {
        Cell c;
        c.id = ptvuid_from(cj.at("id"));
        c.vantage = vec_from(cj.at("vantage"));
        c.poly = polygon_from(cj.at("boundary"));
        for (auto& gj : cj.at("gap_edges")) {
            CellGap g;
            auto& sj = gj.at("seg");
            g.seg = Segment{vec_from(sj[0]), vec_from(sj[1])};
            std::string label = gj.at("label").get<std::string>();
            if (label == "parent") g.label = GapLabel::parent;
            else if (label == "child") g.label = GapLabel::child;
            else if (label == "phantom_wall") g.label = GapLabel::phantom_wall;
            else g.label = GapLabel::unexplored;
            g.child_index = gj.value("index", 0);
            // Recover the polygon edge carrying this gap.
            for (std::size_t e = 0; e < c.poly.size(); ++e)
                if (segments_coincide(c.poly.edge(e), g.seg)) g.edge = int(e);
            if (g.label == GapLabel::parent) c.parent_gap = int(c.gaps.size());
            c.gaps.push_back(g);
        }
        if (!cj.at("sparse").is_null())
            c.vlabel = cj.at("sparse").get<bool>() ? VantageLabel::sparse
                                                   : VantageLabel::nonsparse;
        std::string st = cj.value("status", "permanent");
        c.status = st == "retracting"  ? CellStatus::retracting
                   : st == "contending" ? CellStatus::contending
                                        : CellStatus::permanent;
        tree.cells.emplace(c.id, std::move(c));
    }
    for (auto& wj : j.at("phantom_walls")) {
        PhantomWall w;
        auto& sj = wj.at("seg");
        w.seg = Segment{vec_from(sj[0]), vec_from(sj[1])};
        w.cell = ptvuid_from(wj.at("cell"));
        w.gap_index = wj.value("gap", 0);
        tree.walls.push_back(w);
    }
    return tree;
}

inline PartitionTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tree file: " + path);
    return tree_from_json(json::parse(in));
}

inline void save_tree(const PartitionTree& tree, std::size_t root_vertex,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tree file: " + path);
    out << tree_to_json(tree, root_vertex).dump(2) << "\n";
}

// --------------------------------------------------------------------------
// Event trace: one JSON object per line; first line is a config header.
// Identical runs must produce byte-identical files.

class TraceWriter {
  public:
    TraceWriter() = default;

    void open(const std::string& path) {
        file_.open(path);
        if (!file_) throw std::runtime_error("cannot write trace file: " + path);
        out_ = &file_;
    }
    void use_stream(std::ostream& os) { out_ = &os; }
    bool active() const { return out_ != nullptr; }

    void header(const json& config) {
        if (!out_) return;
        json j;
        j["header"] = config;
        (*out_) << j.dump() << "\n";
    }

    void event(double t, const std::string& kind, int agent, json data) {
        if (!out_) return;
        json j;
        j["t"] = t;
        j["kind"] = kind;
        j["agent"] = agent;
        j["data"] = std::move(data);
        (*out_) << j.dump() << "\n";
    }

  private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

} // namespace visdeploy::io
