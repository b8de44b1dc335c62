#pragma once

#include "spectrade/market.hpp"
#include "spectrade/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace spectrade {

// Undirected conflict graph over buyers: an edge means the two buyers are
// within the protection distance and must not share a channel.
class ConflictGraph {
public:
    ConflictGraph(std::vector<int> buyer_ids)
        : ids_(std::move(buyer_ids)), adj_(ids_.size() * ids_.size(), 0) {}

    std::size_t size() const { return ids_.size(); }
    const std::vector<int>& buyer_ids() const { return ids_; }
    int id_at(std::size_t index) const { return ids_[index]; }

    void add_edge(std::size_t i, std::size_t j) {
        adj_[i * ids_.size() + j] = 1;
        adj_[j * ids_.size() + i] = 1;
    }

    bool edge(std::size_t i, std::size_t j) const {
        return adj_[i * ids_.size() + j] != 0;
    }

    std::size_t edge_count() const {
        std::size_t count = 0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (edge(i, j)) ++count;
        return count;
    }

private:
    std::vector<int> ids_;
    std::vector<char> adj_;
};

namespace detail {

// Tries to express a rational as an integer number of millionths. Generated
// scenarios always land on this grid, which keeps the quadratic distance
// loop in 128-bit integers instead of bignum rationals.
inline std::optional<std::int64_t> as_millionths(const Rational& value) {
    static const BigInt kScale = 1000000;
    BigInt den = denominator(value);
    if (kScale % den != 0) return std::nullopt;
    BigInt scaled = numerator(value) * (kScale / den);
    if (scaled < -1000000000000000LL || scaled > 1000000000000000LL)
        return std::nullopt;
    return static_cast<std::int64_t>(scaled);
}

}  // namespace detail

// Two buyers conflict when their Euclidean distance is at or below the
// protection distance; only pairs strictly farther apart may share.
inline ConflictGraph build_conflict_graph(const std::vector<Bid>& bids,
                                          const Rational& protection_distance) {
    std::vector<const Bid*> ordered;
    ordered.reserve(bids.size());
    for (const Bid& bid : bids) ordered.push_back(&bid);
    std::sort(ordered.begin(), ordered.end(),
              [](const Bid* a, const Bid* b) { return a->buyer_id < b->buyer_id; });
    std::vector<int> ids;
    ids.reserve(ordered.size());
    for (const Bid* bid : ordered) ids.push_back(bid->buyer_id);
    ConflictGraph graph(std::move(ids));

    bool on_grid = true;
    std::vector<std::int64_t> gx(ordered.size()), gy(ordered.size());
    for (std::size_t i = 0; i < ordered.size() && on_grid; ++i) {
        auto x = detail::as_millionths(ordered[i]->x);
        auto y = detail::as_millionths(ordered[i]->y);
        if (x && y) {
            gx[i] = *x;
            gy[i] = *y;
        } else {
            on_grid = false;
        }
    }
    std::optional<std::int64_t> gp = detail::as_millionths(protection_distance);

    if (on_grid && gp) {
        __int128 limit = static_cast<__int128>(*gp) * *gp;
        for (std::size_t i = 0; i < ordered.size(); ++i)
            for (std::size_t j = i + 1; j < ordered.size(); ++j) {
                __int128 dx = gx[i] - gx[j];
                __int128 dy = gy[i] - gy[j];
                if (dx * dx + dy * dy <= limit) graph.add_edge(i, j);
            }
        return graph;
    }

    Rational limit = protection_distance * protection_distance;
    for (std::size_t i = 0; i < ordered.size(); ++i)
        for (std::size_t j = i + 1; j < ordered.size(); ++j) {
            Rational dx = ordered[i]->x - ordered[j]->x;
            Rational dy = ordered[i]->y - ordered[j]->y;
            if (dx * dx + dy * dy <= limit) graph.add_edge(i, j);
        }
    return graph;
}

// A buyer group: pairwise non-conflicting buyers that can be served on the
// same channels. group_id is 1-based in extraction order.
struct BuyerGroup {
    int group_id = 0;
    std::vector<int> members;  // buyer ids, ascending

    bool operator==(const BuyerGroup&) const = default;
};

// Partitions all buyers into groups by repeatedly extracting a maximal
// independent set: pick the remaining vertex with the fewest remaining
// conflicts (ties by the tie-break key), add it, drop its neighbours, repeat
// until no candidate is left, then start the next group. Every buyer lands in
// exactly one group. The procedure looks only at positions, never at bids, so
// a buyer cannot steer its group membership by misreporting its price.
inline std::vector<BuyerGroup> form_buyer_groups(const ConflictGraph& graph,
                                                 TieBreak tie = {}) {
    std::size_t n = graph.size();
    std::vector<char> grouped(n, 0);
    std::vector<BuyerGroup> groups;
    std::size_t remaining = n;
    std::vector<char> candidate(n);
    std::vector<std::size_t> degree(n);
    std::vector<std::size_t> pool;
    while (remaining > 0) {
        pool.clear();
        for (std::size_t i = 0; i < n; ++i) {
            candidate[i] = !grouped[i];
            if (candidate[i]) pool.push_back(i);
        }
        for (std::size_t i : pool) {
            degree[i] = 0;
            for (std::size_t j : pool)
                if (j != i && graph.edge(i, j)) ++degree[i];
        }
        BuyerGroup group;
        group.group_id = static_cast<int>(groups.size()) + 1;
        std::size_t candidates_left = pool.size();
        while (candidates_left > 0) {
            std::size_t best = n;
            for (std::size_t i : pool) {
                if (!candidate[i]) continue;
                if (best == n || degree[i] < degree[best] ||
                    (degree[i] == degree[best] &&
                     tie.key(graph.id_at(i)) < tie.key(graph.id_at(best))))
                    best = i;
            }
            group.members.push_back(graph.id_at(best));
            grouped[best] = 1;
            candidate[best] = 0;
            --candidates_left;
            --remaining;
            for (std::size_t j : pool)
                if (candidate[j] && graph.edge(best, j)) {
                    candidate[j] = 0;
                    --candidates_left;
                    for (std::size_t u : pool)
                        if (candidate[u] && graph.edge(j, u)) --degree[u];
                }
        }
        std::sort(group.members.begin(), group.members.end());
        groups.push_back(std::move(group));
    }
    return groups;
}

}  // namespace spectrade
