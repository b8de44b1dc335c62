#pragma once

#include "spectrade/rational.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace spectrade {

// One seller offering `supply` identical channels at a per-channel ask.
struct Ask {
    int seller_id = 0;
    Money per_channel;
    int supply = 0;

    bool operator==(const Ask&) const = default;
};

// One buyer requesting up to `demand` channels at a per-channel bid, located
// at (x, y) inside the deployment area.
struct Bid {
    int buyer_id = 0;
    Money per_channel;
    int demand = 0;
    Rational x;
    Rational y;

    bool operator==(const Bid&) const = default;
};

// A complete market instance. `rng_seed` records which seed generated it;
// hand-written scenarios may use any value.
struct Scenario {
    std::vector<Ask> asks;
    std::vector<Bid> bids;
    Rational area_side;
    Rational protection_distance;
    std::uint64_t rng_seed = 0;

    bool operator==(const Scenario&) const = default;
};

// Private valuations used for utility accounting. The mechanism never sees
// these; tests set them equal to the submitted prices to model truthful play.
struct SellerTruth {
    Money valuation;
    int supply = 0;
};

struct BuyerTruth {
    Money valuation;
    int demand = 0;
};

struct TruthProfile {
    std::map<int, SellerTruth> sellers;
    std::map<int, BuyerTruth> buyers;
};

inline TruthProfile truthful_profile(const Scenario& scenario) {
    TruthProfile profile;
    for (const Ask& ask : scenario.asks)
        profile.sellers[ask.seller_id] = {ask.per_channel, ask.supply};
    for (const Bid& bid : scenario.bids)
        profile.buyers[bid.buyer_id] = {bid.per_channel, bid.demand};
    return profile;
}

inline std::map<int, Bid> bid_table(const Scenario& scenario) {
    std::map<int, Bid> table;
    for (const Bid& bid : scenario.bids) table[bid.buyer_id] = bid;
    return table;
}

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ScenarioError {
public:
    ParseError(int line, const std::string& what)
        : ScenarioError("line " + std::to_string(line) + ": " + what),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// Structural checks shared by the parser and programmatic construction.
// Throws ScenarioError on the first problem found.
inline void validate_scenario(const Scenario& scenario) {
    if (scenario.area_side <= 0)
        throw ScenarioError("area side must be positive");
    if (scenario.protection_distance <= 0)
        throw ScenarioError("protection distance must be positive");
    std::set<int> seller_ids;
    for (const Ask& ask : scenario.asks) {
        if (!seller_ids.insert(ask.seller_id).second)
            throw ScenarioError("duplicate seller id " +
                                std::to_string(ask.seller_id));
        if (ask.per_channel <= 0)
            throw ScenarioError("seller " + std::to_string(ask.seller_id) +
                                ": ask must be positive");
        if (ask.supply <= 0)
            throw ScenarioError("seller " + std::to_string(ask.seller_id) +
                                ": supply must be positive");
    }
    std::set<int> buyer_ids;
    for (const Bid& bid : scenario.bids) {
        if (!buyer_ids.insert(bid.buyer_id).second)
            throw ScenarioError("duplicate buyer id " +
                                std::to_string(bid.buyer_id));
        if (bid.per_channel <= 0)
            throw ScenarioError("buyer " + std::to_string(bid.buyer_id) +
                                ": bid must be positive");
        if (bid.demand <= 0)
            throw ScenarioError("buyer " + std::to_string(bid.buyer_id) +
                                ": demand must be positive");
        if (bid.x < 0 || bid.x > scenario.area_side || bid.y < 0 ||
            bid.y > scenario.area_side)
            throw ScenarioError("buyer " + std::to_string(bid.buyer_id) +
                                ": position outside the area");
    }
}

namespace detail {

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t'))
            ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t')
            ++pos;
        if (pos > start) fields.emplace_back(line.substr(start, pos - start));
    }
    return fields;
}

inline int parse_int_field(const std::string& text, int line,
                           const char* what) {
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(line, std::string("bad ") + what + " '" + text + "'");
    return value;
}

inline std::uint64_t parse_u64_field(const std::string& text, int line,
                                     const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(line, std::string("bad ") + what + " '" + text + "'");
    return value;
}

inline Rational parse_decimal_field(const std::string& text, int line,
                                    const char* what) {
    auto value = parse_decimal(text);
    if (!value)
        throw ParseError(line, std::string("bad ") + what + " '" + text + "'");
    return *value;
}

}  // namespace detail

// Text format, one record per line, '#' starts a comment:
//   area <side> protect <distance> seed <u64>
//   S <id> <ask> <supply>
//   B <id> <bid> <demand> <x> <y>
// The header must come first. Prices, distances and coordinates are decimals
// and are kept exact.
inline Scenario parse_scenario(std::istream& in) {
    Scenario scenario;
    bool have_header = false;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        std::vector<std::string> fields = detail::split_fields(line);
        if (fields.empty()) continue;
        if (!have_header) {
            if (fields.size() != 6 || fields[0] != "area" ||
                fields[2] != "protect" || fields[4] != "seed")
                throw ParseError(line_no,
                                 "expected 'area <side> protect <distance> "
                                 "seed <u64>' header");
            scenario.area_side =
                detail::parse_decimal_field(fields[1], line_no, "area side");
            scenario.protection_distance = detail::parse_decimal_field(
                fields[3], line_no, "protection distance");
            scenario.rng_seed =
                detail::parse_u64_field(fields[5], line_no, "seed");
            have_header = true;
            continue;
        }
        if (fields[0] == "S") {
            if (fields.size() != 4)
                throw ParseError(line_no, "seller line needs 'S <id> <ask> <supply>'");
            Ask ask;
            ask.seller_id = detail::parse_int_field(fields[1], line_no, "seller id");
            ask.per_channel = detail::parse_decimal_field(fields[2], line_no, "ask");
            ask.supply = detail::parse_int_field(fields[3], line_no, "supply");
            scenario.asks.push_back(std::move(ask));
        } else if (fields[0] == "B") {
            if (fields.size() != 6)
                throw ParseError(line_no,
                                 "buyer line needs 'B <id> <bid> <demand> <x> <y>'");
            Bid bid;
            bid.buyer_id = detail::parse_int_field(fields[1], line_no, "buyer id");
            bid.per_channel = detail::parse_decimal_field(fields[2], line_no, "bid");
            bid.demand = detail::parse_int_field(fields[3], line_no, "demand");
            bid.x = detail::parse_decimal_field(fields[4], line_no, "x");
            bid.y = detail::parse_decimal_field(fields[5], line_no, "y");
            scenario.bids.push_back(std::move(bid));
        } else {
            throw ParseError(line_no, "unknown record '" + fields[0] + "'");
        }
    }
    if (!have_header) throw ParseError(line_no, "missing header line");
    validate_scenario(scenario);
    return scenario;
}

inline Scenario parse_scenario_text(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

// Canonical form: header, sellers sorted by id, buyers sorted by id, exact
// decimals. parse(serialize(s)) reproduces s except for record order.
inline std::string serialize_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << "area " << format_decimal_exact(scenario.area_side) << " protect "
        << format_decimal_exact(scenario.protection_distance) << " seed "
        << scenario.rng_seed << "\n";
    std::vector<Ask> asks = scenario.asks;
    std::sort(asks.begin(), asks.end(), [](const Ask& a, const Ask& b) {
        return a.seller_id < b.seller_id;
    });
    for (const Ask& ask : asks)
        out << "S " << ask.seller_id << " "
            << format_decimal_exact(ask.per_channel) << " " << ask.supply
            << "\n";
    std::vector<Bid> bids = scenario.bids;
    std::sort(bids.begin(), bids.end(), [](const Bid& a, const Bid& b) {
        return a.buyer_id < b.buyer_id;
    });
    for (const Bid& bid : bids)
        out << "B " << bid.buyer_id << " "
            << format_decimal_exact(bid.per_channel) << " " << bid.demand
            << " " << format_decimal_exact(bid.x) << " "
            << format_decimal_exact(bid.y) << "\n";
    return out.str();
}

}  // namespace spectrade
