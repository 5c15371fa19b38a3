#pragma once

#include <cassert>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "routesim/error.hpp"
#include "routesim/metrics.hpp"
#include "routesim/packet.hpp"
#include "routesim/policy.hpp"
#include "routesim/rng.hpp"
#include "routesim/topology.hpp"
#include "routesim/traffic.hpp"

namespace routesim {

enum class Serialization { node, link };

inline Serialization serialization_from_string(const std::string& s) {
    if (s == "node") return Serialization::node;
    if (s == "link") return Serialization::link;
    throw ParseError("unknown serialization mode: " + s);
}

struct SimConfig {
    double link_time_ms = 1.0;
    Serialization serialization = Serialization::link;
    double comm_interval_ms = 0.0;  // advertised-state staleness; 0 = live
    int action_history_len = 5;
    bool record_trace = false;
    bool audit = false;  // packet-conservation check after every event
};

struct TraceEvent {
    double time_ms;
    const char* event;  // create | tx_start | arrive | deliver
    std::uint64_t packet_id;
    NodeId node;
    NodeId next_node;  // -1 where not applicable
    double q_ms;       // queueing time, tx_start only
};

// Deterministic event-driven simulation: packet creation, FIFO queueing,
// per-hop transmission and reward measurement. Events fire in nondecreasing
// time order with ties broken by insertion sequence.
class Simulator {
public:
    Simulator(const Topology& topo, SimConfig cfg, TrafficConfig traffic, Policy& policy,
              Rng traffic_rng, Rng explore_rng)
        : topo_(&topo),
          cfg_(cfg),
          traffic_(traffic),
          policy_(&policy),
          traffic_rng_(traffic_rng),
          explore_rng_(explore_rng),
          nodes_(topo.n_nodes()) {
        traffic_.validate(topo.n_nodes());
        for (NodeId n = 0; n < topo.n_nodes(); ++n) {
            nodes_[n].link_busy_until.assign(topo.degree(n), 0.0);
            nodes_[n].live_dest_counts.assign(topo.n_nodes(), 0);
            nodes_[n].snap_dest_counts.assign(topo.n_nodes(), 0);
        }
    }

    // Replay a frozen endpoint series instead of drawing endpoints live.
    void set_fixed_series(const std::vector<PacketDraw>* series) { series_ = series; }
    void set_load_schedule(const LoadSchedule* schedule) { schedule_ = schedule; }

    Metrics run(double until_ms) {
        if (schedule_) schedule_->validate(until_ms);
        until_ = until_ms;
        if (cfg_.comm_interval_ms > 0) push_event(Event::snapshot(0.0));
        push_event(Event::create(0.0));
        while (!events_.empty()) {
            Event ev = events_.top();
            if (ev.t >= until_ms) break;
            events_.pop();
            handle(ev);
            if (cfg_.audit) audit_conservation();
        }
        metrics_.created_count = next_packet_id_;
        return metrics_;
    }

    const std::vector<TraceEvent>& trace() const { return trace_; }

    // Live in-system packet counts, exposed for conservation checks.
    std::uint64_t packets_created() const { return next_packet_id_; }
    std::uint64_t packets_delivered() const { return metrics_.delivered_count(); }
    std::uint64_t packets_in_system() const {
        std::uint64_t n = in_flight_.size();
        for (const auto& node : nodes_) n += node.queue.size() + (node.pending ? 1 : 0);
        return n;
    }

private:
    struct PendingSend {
        Packet pkt;
        NodeId next;
        bool wakeup_scheduled = false;
    };

    struct Node {
        std::deque<Packet> queue;
        std::optional<PendingSend> pending;  // decided, waiting for its link (link mode)
        double node_busy_until = 0.0;
        std::vector<double> link_busy_until;   // adjacency order
        std::vector<NodeId> recent_actions;    // newest first, capped
        std::vector<int> live_dest_counts;     // queued + pending, per destination
        std::vector<int> snap_dest_counts;     // last snapshot
        int snap_len = 0;
        int live_len() const { return static_cast<int>(queue.size()) + (pending ? 1 : 0); }
    };

    struct Event {
        double t;
        std::uint64_t seq;
        enum Kind { Snapshot, Create, Dispatch, Complete } kind;
        std::uint64_t packet_id = 0;
        NodeId a = -1, b = -1;
        double q_ms = 0.0;

        static Event snapshot(double t) { return {t, 0, Snapshot}; }
        static Event create(double t) { return {t, 0, Create}; }
        static Event dispatch(double t, NodeId n) { return {t, 0, Dispatch, 0, n}; }
        static Event complete(double t, std::uint64_t id, NodeId from, NodeId to, double q) {
            return {t, 0, Complete, id, from, to, q};
        }
    };

    struct EventOrder {
        bool operator()(const Event& x, const Event& y) const {
            if (x.t != y.t) return x.t > y.t;
            return x.seq > y.seq;
        }
    };

    void push_event(Event ev) {
        ev.seq = next_seq_++;
        events_.push(ev);
    }

    void handle(const Event& ev) {
        switch (ev.kind) {
            case Event::Snapshot: on_snapshot(ev.t); break;
            case Event::Create: on_create(ev.t); break;
            case Event::Dispatch: dispatch(ev.a, ev.t); break;
            case Event::Complete: on_complete(ev.t, ev.packet_id, ev.a, ev.b, ev.q_ms); break;
        }
    }

    void on_snapshot(double t) {
        for (auto& node : nodes_) {
            node.snap_len = node.live_len();
            node.snap_dest_counts = node.live_dest_counts;
        }
        push_event(Event::snapshot(t + cfg_.comm_interval_ms));
    }

    void on_create(double t) {
        if (series_ && next_packet_id_ >= series_->size()) return;  // series exhausted
        Packet p;
        if (series_) {
            auto [src, dst] = (*series_)[next_packet_id_];
            p.src = src;
            p.dst = dst;
        } else {
            auto [src, dst] = draw_endpoints(traffic_, traffic_rng_, topo_->n_nodes());
            p.src = src;
            p.dst = dst;
        }
        p.id = next_packet_id_++;
        p.created_at = t;
        p.node_arrival_at = t;
        p.hops = {p.src};
        trace(t, "create", p.id, p.src, p.dst, 0.0);
        NodeId src = p.src;
        nodes_[src].live_dest_counts[p.dst]++;
        nodes_[src].queue.push_back(std::move(p));
        double interval =
            schedule_ ? schedule_->interval_at(t, traffic_.generated_interval)
                      : traffic_.generated_interval;
        push_event(Event::create(t + interval));
        dispatch(src, t);
    }

    double transmitter_free_at(const Node& node, NodeId n, NodeId next) const {
        if (cfg_.serialization == Serialization::node) return node.node_busy_until;
        return node.link_busy_until[topo_->neighbor_index(n, next)];
    }

    // Serve the node's queue: run decision epochs and start transmissions as
    // the transmitter (node or chosen link) allows. FIFO: only the HOL packet
    // is ever eligible, and a decided packet blocks the queue until it leaves.
    void dispatch(NodeId n, double t) {
        Node& node = nodes_[n];
        for (;;) {
            if (node.pending) {
                double free_at = transmitter_free_at(node, n, node.pending->next);
                if (free_at > t) {
                    if (!node.pending->wakeup_scheduled) {
                        node.pending->wakeup_scheduled = true;
                        push_event(Event::dispatch(free_at, n));
                    }
                    return;
                }
                start_transmission(n, t);
                continue;
            }
            if (node.queue.empty()) return;
            // In node mode the decision coincides with transmission start, so
            // it is deferred while the transmitter is busy. In link mode the
            // HOL decision happens as soon as the packet reaches the head.
            if (cfg_.serialization == Serialization::node && node.node_busy_until > t) return;
            Packet pkt = std::move(node.queue.front());
            node.queue.pop_front();
            Decision d = build_decision(n, pkt, t);
            NodeId v = policy_->decide(d);
            if (topo_->neighbor_index(n, v) < 0)
                throw ContractViolation("policy routed node " + std::to_string(n) +
                                        " to non-neighbor " + std::to_string(v));
            push_recent_action(node, v);
            node.pending = PendingSend{std::move(pkt), v, false};
        }
    }

    void start_transmission(NodeId n, double t) {
        Node& node = nodes_[n];
        PendingSend ps = std::move(*node.pending);
        node.pending.reset();
        const double q = t - ps.pkt.node_arrival_at;
        const double l = cfg_.link_time_ms;
        node.live_dest_counts[ps.pkt.dst]--;
        if (cfg_.serialization == Serialization::node)
            node.node_busy_until = t + l;
        else
            node.link_busy_until[topo_->neighbor_index(n, ps.next)] = t + l;
        trace(t, "tx_start", ps.pkt.id, n, ps.next, q);
        const std::uint64_t id = ps.pkt.id;
        in_flight_.emplace(id, std::move(ps.pkt));
        push_event(Event::complete(t + l, id, n, ps.next, q));
    }

    void on_complete(double t, std::uint64_t id, NodeId from, NodeId to, double q) {
        auto it = in_flight_.find(id);
        assert(it != in_flight_.end());
        Packet pkt = std::move(it->second);
        in_flight_.erase(it);
        const HopReward reward{q, cfg_.link_time_ms};
        pkt.reward_sum += reward.total();
        pkt.hops.push_back(to);
        const bool terminal = (to == pkt.dst);
        trace(t, terminal ? "deliver" : "arrive", id, from, to, 0.0);
        if (terminal) {
            pkt.delivered_at = t;
            metrics_.record(pkt);
            HopFeedback fb{id, from, to, pkt.dst, reward, true, t, nullptr};
            policy_->on_hop_complete(fb);
        } else {
            pkt.node_arrival_at = t;
            const NodeId dst = pkt.dst;
            nodes_[to].live_dest_counts[dst]++;
            nodes_[to].queue.push_back(std::move(pkt));
            // The receiver view is captured before the receiver's own next
            // decision epoch, so h/s successors reflect the state at receipt.
            ReceiverView rv = build_receiver_view(to);
            HopFeedback fb{id, from, to, dst, reward, false, t, &rv};
            policy_->on_hop_complete(fb);
            dispatch(to, t);
        }
        dispatch(from, t);
    }

    void push_recent_action(Node& node, NodeId v) {
        node.recent_actions.insert(node.recent_actions.begin(), v);
        if (static_cast<int>(node.recent_actions.size()) > cfg_.action_history_len)
            node.recent_actions.resize(cfg_.action_history_len);
    }

    std::vector<NeighborInfo> neighbor_infos(NodeId n) const {
        std::vector<NeighborInfo> out;
        out.reserve(topo_->degree(n));
        const bool live = cfg_.comm_interval_ms <= 0.0;
        for (NodeId v : topo_->neighbors(n)) {
            const Node& nb = nodes_[v];
            if (live)
                out.push_back({v, nb.live_len(), &nb.live_dest_counts});
            else
                out.push_back({v, nb.snap_len, &nb.snap_dest_counts});
        }
        return out;
    }

    Decision build_decision(NodeId n, const Packet& hol, double t) {
        Decision d;
        d.node = n;
        d.now = t;
        d.packet = &hol;
        d.future_dsts.reserve(nodes_[n].queue.size());
        for (const Packet& p : nodes_[n].queue) d.future_dsts.push_back(p.dst);
        d.recent_actions = nodes_[n].recent_actions;
        d.neighbors = neighbor_infos(n);
        d.rng = &explore_rng_;
        return d;
    }

    ReceiverView build_receiver_view(NodeId v) {
        return ReceiverView{v, nodes_[v].recent_actions, neighbor_infos(v)};
    }

    void trace(double t, const char* kind, std::uint64_t id, NodeId node, NodeId next, double q) {
        if (cfg_.record_trace) trace_.push_back({t, kind, id, node, next, q});
    }

    void audit_conservation() const {
        const std::uint64_t in_system = packets_in_system();
        if (next_packet_id_ != metrics_.delivered_count() + in_system)
            throw Error("packet conservation violated");
    }

    const Topology* topo_;
    SimConfig cfg_;
    TrafficConfig traffic_;
    Policy* policy_;
    Rng traffic_rng_;
    Rng explore_rng_;
    const std::vector<PacketDraw>* series_ = nullptr;
    const LoadSchedule* schedule_ = nullptr;

    std::vector<Node> nodes_;
    std::priority_queue<Event, std::vector<Event>, EventOrder> events_;
    std::unordered_map<std::uint64_t, Packet> in_flight_;
    Metrics metrics_;
    std::vector<TraceEvent> trace_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_packet_id_ = 0;
    double until_ = 0.0;
};

}  // namespace routesim
