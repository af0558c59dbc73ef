#pragma once

// Discrete-time network simulator for the distributed deployment.  Each tick
// runs every agent's communication, state-transition, and navigation sub-steps
// in an interleaving order (fixed round-robin or a seeded per-tick shuffle).
// Broadcasts are delivered instantly to the sender's current visibility
// neighbours; an agent reads one inbox message per tick.
//
// The simulator also keeps the bookkeeping the acceptance checks need: the
// time of the last partition-structure change, per-tick connectivity of the
// visibility graph over the agents, and the longest streak of ticks during
// which the proxy wait-for graph contained a directed cycle.

#include "deployment.hpp"
#include "io.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace visdeploy {

struct ScheduleConfig {
    double dt = 0.01;
    double u_max = 1.0;
    enum class Interleaving { round_robin, seeded_random };
    Interleaving interleaving = Interleaving::round_robin;
    double max_time = 1e4;
    int settle_ticks = 10;
    std::uint32_t seed = 0;

    const char* interleaving_name() const {
        return interleaving == Interleaving::round_robin ? "round_robin"
                                                         : "seeded_random";
    }
};

struct WorldState {
    Environment env;
    DeployContext ctx{env, 0.0};
    std::vector<AgentState> agents;
    std::vector<std::deque<SnapshotPtr>> inboxes;
    double time = 0.0;
    long tick = 0;

    // Visibility adjacency, recomputed per row only when an agent has moved.
    std::vector<Vec2> vis_pos;
    std::vector<std::vector<char>> vis;
    bool vis_ready = false;

    std::mt19937 rng;

    double t_star = 0.0;              // last status/wall/delete event
    long connectivity_checks = 0;
    long connectivity_violations = 0;
    long wait_cycle_streak = 0;
    long max_wait_cycle_streak = 0;
    long stable_ticks = 0;

    WorldState(Environment e, std::uint32_t seed)
        : env(std::move(e)), ctx{env, env.area()}, rng(seed) {}
    WorldState(const WorldState&) = delete;
    WorldState& operator=(const WorldState&) = delete;
};

inline std::unique_ptr<WorldState> make_world(const Environment& env,
                                              int n_agents,
                                              std::size_t root_vertex,
                                              std::uint32_t seed) {
    auto w = std::make_unique<WorldState>(env, seed);
    Vec2 root = env.vertex(root_vertex);
    for (int i = 0; i < n_agents; ++i) {
        AgentState a;
        a.uid = i;
        a.position = root;
        a.mode = i == 0 ? AgentMode::lead : AgentMode::explore;
        a.xi_current = Ptvuid{};
        a.xi_last = Ptvuid{};
        if (i == 0)
            a.vantage_points.push_back({Ptvuid{}, root, VantageLabel::unlabeled});
        w->agents.push_back(std::move(a));
    }
    w->inboxes.resize(std::size_t(n_agents));
    w->vis_pos.assign(std::size_t(n_agents), Vec2{1e300, 1e300});
    w->vis.assign(std::size_t(n_agents), std::vector<char>(std::size_t(n_agents), 0));
    return w;
}

namespace netsim_detail {

inline void refresh_visibility(WorldState& w) {
    std::size_t n = w.agents.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 p = w.agents[i].position;
        if (w.vis_ready && p.dist(w.vis_pos[i]) <= 0.0) continue;
        w.vis_pos[i] = p;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                w.vis[i][i] = 1;
                continue;
            }
            char v = w.env.contains_segment(p, w.agents[j].position, tol::on) ? 1 : 0;
            w.vis[i][j] = v;
            w.vis[j][i] = v;
        }
    }
    w.vis_ready = true;
}

inline bool agents_connected(const WorldState& w) {
    std::size_t n = w.agents.size();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n; ++j)
            if (!seen[j] && w.vis[i][j]) {
                seen[j] = 1;
                ++count;
                stack.push_back(j);
            }
    }
    return count == n;
}

// Directed cycle test over the live proxy wait-for graph.
inline bool wait_cycle_present(const WorldState& w) {
    std::map<Ptvuid, std::vector<Ptvuid>> g;
    for (auto& a : w.agents)
        if (a.proxied && !a.proxied->wait_set.empty())
            for (auto& t : a.proxied->wait_set) g[a.proxied->id].push_back(t);
    if (g.empty()) return false;
    std::map<Ptvuid, int> state; // 0 new, 1 open, 2 done
    std::function<bool(const Ptvuid&)> dfs = [&](const Ptvuid& v) -> bool {
        int& st = state[v];
        if (st == 1) return true;
        if (st == 2) return false;
        st = 1;
        auto it = g.find(v);
        if (it != g.end())
            for (auto& nx : it->second)
                if (dfs(nx)) return true;
        st = 2;
        return false;
    };
    for (auto& [v, _] : g)
        if (state[v] == 0 && dfs(v)) return true;
    return false;
}

} // namespace netsim_detail

inline std::set<int> visibility_neighbors(const WorldState& w, int uid) {
    std::set<int> out;
    for (std::size_t j = 0; j < w.agents.size(); ++j)
        if (int(j) != uid && w.vis[std::size_t(uid)][j]) out.insert(int(j));
    return out;
}

// One simulation tick.  Returns true when anything observable happened
// (message, event, or movement); the quiescence window counts the rest.
inline bool step(WorldState& w, const ScheduleConfig& cfg, io::TraceWriter& trace) {
    using namespace netsim_detail;
    refresh_visibility(w);

    std::size_t n = w.agents.size();
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = int(i);
    if (cfg.interleaving == ScheduleConfig::Interleaving::seeded_random)
        std::shuffle(order.begin(), order.end(), w.rng);

    bool activity = false;
    std::vector<AgentEvent> events;
    for (int idx : order) {
        AgentState& a = w.agents[std::size_t(idx)];
        std::set<int> vis_now = visibility_neighbors(w, idx);

        auto out = comm_step(a, w.inboxes[std::size_t(idx)], vis_now);
        if (out) {
            activity = true;
            for (int j : vis_now) w.inboxes[std::size_t(j)].push_back(*out);
            io::json data;
            data["to"] = io::json::array();
            for (int j : vis_now) data["to"].push_back(j);
            trace.event(w.time, "msg", a.uid, std::move(data));
        }

        events.clear();
        Vec2 before_mode_pos = a.position;
        AgentMode before_mode = a.mode;
        state_step(a, w.ctx, events);
        nav_step(a, cfg.dt, cfg.u_max, events);
        if (a.position.dist(before_mode_pos) > 0) activity = true;

        for (auto& e : events) {
            activity = true;
            io::json data;
            if (e.kind == "move") {
                data["p"] = io::to_json(a.position);
            } else {
                data["detail"] = e.detail;
            }
            trace.event(w.time, e.kind, a.uid, std::move(data));
            if (e.kind == "status" || e.kind == "wall" || e.kind == "delete")
                w.t_star = w.time;
        }
        if (a.mode != before_mode && events.empty()) {
            io::json data;
            data["detail"] = to_string(a.mode);
            trace.event(w.time, "mode", a.uid, std::move(data));
            activity = true;
        }
    }

    ++w.connectivity_checks;
    if (!agents_connected(w)) ++w.connectivity_violations;

    if (wait_cycle_present(w)) {
        ++w.wait_cycle_streak;
        w.max_wait_cycle_streak = std::max(w.max_wait_cycle_streak, w.wait_cycle_streak);
    } else {
        w.wait_cycle_streak = 0;
    }

    for (auto& ib : w.inboxes)
        if (!ib.empty()) activity = true;

    ++w.tick;
    w.time = double(w.tick) * cfg.dt;
    if (activity)
        w.stable_ticks = 0;
    else
        ++w.stable_ticks;
    return activity;
}

struct DeployReport {
    bool quiescent = false;
    double t_star = 0.0;
    double t_end = 0.0;
    long ticks = 0;
    std::map<Ptvuid, Cell> cells; // freshest surviving copies
    int walls = 0;                // unique phantom-wall segments
    bool all_permanent = false;
    int settled_sparse_leaders = 0;
    long connectivity_checks = 0;
    long connectivity_violations = 0;
    long max_wait_cycle_streak = 0;
    std::vector<Vec2> positions;
    std::vector<AgentMode> modes;
};

inline DeployReport build_report(const WorldState& w) {
    DeployReport r;
    r.t_star = w.t_star;
    r.t_end = w.time;
    r.ticks = w.tick;
    r.connectivity_checks = w.connectivity_checks;
    r.connectivity_violations = w.connectivity_violations;
    r.max_wait_cycle_streak = w.max_wait_cycle_streak;

    std::set<Ptvuid> deleted;
    for (auto& a : w.agents)
        for (auto& d : a.deletions) deleted.insert(d.id);

    auto offer = [&](const Cell& c) {
        if (deleted.count(c.id)) return;
        auto it = r.cells.find(c.id);
        if (it == r.cells.end() || c.revision > it->second.revision)
            r.cells.insert_or_assign(c.id, c);
    };
    for (auto& a : w.agents) {
        for (auto& c : a.cells) offer(c);
        if (a.proxied) offer(*a.proxied);
    }

    std::vector<Segment> walls;
    auto add_wall = [&](const Segment& s) {
        for (auto& t : walls)
            if (segments_coincide(s, t)) return;
        walls.push_back(s);
    };
    for (auto& [id, c] : r.cells)
        for (auto& g : c.gaps)
            if (g.label == GapLabel::phantom_wall) add_wall(g.seg);
    for (auto& a : w.agents)
        for (auto& d : a.deletions) add_wall(d.parent_gap);
    r.walls = int(walls.size());

    r.all_permanent = !r.cells.empty();
    for (auto& [id, c] : r.cells)
        if (c.status != CellStatus::permanent) r.all_permanent = false;

    for (auto& a : w.agents) {
        r.positions.push_back(a.position);
        r.modes.push_back(a.mode);
        if (a.mode != AgentMode::lead) continue;
        for (auto& ve : a.vantage_points)
            if (ve.label == VantageLabel::sparse && a.at(ve.p)) {
                ++r.settled_sparse_leaders;
                break;
            }
    }
    return r;
}

// Run until nothing observable happens for a settle window (or the time
// budget runs out).  The optional callback fires after every tick — the CLI
// uses it to rasterize frames.
template <typename FrameCb = std::nullptr_t>
inline DeployReport run_to_quiescence(WorldState& w, const ScheduleConfig& cfg,
                                      io::TraceWriter& trace,
                                      FrameCb&& frame_cb = nullptr) {
    while (w.time < cfg.max_time) {
        step(w, cfg, trace);
        if constexpr (!std::is_same_v<std::decay_t<FrameCb>, std::nullptr_t>)
            frame_cb(w);
        if (w.stable_ticks >= cfg.settle_ticks) break;
    }
    DeployReport r = build_report(w);
    r.quiescent = w.stable_ticks >= cfg.settle_ticks;
    return r;
}

// Fraction of sampled environment points visible from at least one position.
// Returns the fraction and (optionally) the first uncovered sample found.
inline double coverage_fraction(const Environment& env,
                                const std::vector<Vec2>& positions,
                                int samples, std::uint32_t seed,
                                Vec2* first_uncovered = nullptr) {
    Vec2 lo, hi;
    deploy_detail::bbox_of(env.outer, lo, hi);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
    int in_env = 0, covered = 0;
    bool found = false;
    while (in_env < samples) {
        Vec2 p{ux(rng), uy(rng)};
        if (!env.contains(p, tol::on)) continue;
        ++in_env;
        bool vis = false;
        for (auto& q : positions)
            if (env.contains_segment(q, p, tol::on)) {
                vis = true;
                break;
            }
        if (vis)
            ++covered;
        else if (!found && first_uncovered) {
            *first_uncovered = p;
            found = true;
        }
    }
    return double(covered) / double(samples);
}

inline io::json config_header(const ScheduleConfig& cfg, int n_agents,
                              std::size_t root_vertex, const Environment& env) {
    io::json j;
    j["agents"] = n_agents;
    j["seed"] = cfg.seed;
    j["dt"] = cfg.dt;
    j["u_max"] = cfg.u_max;
    j["interleaving"] = cfg.interleaving_name();
    j["root_vertex"] = root_vertex;
    j["n"] = env.n();
    j["h"] = env.h();
    return j;
}

} // namespace visdeploy
