#include "spectrade/generator.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

using namespace spectrade;

TEST_CASE("generation is deterministic in the seed") {
    GeneratorConfig config;
    CHECK(generate_scenario(config, 42) == generate_scenario(config, 42));
    CHECK_FALSE(generate_scenario(config, 42) == generate_scenario(config, 43));
}

TEST_CASE("entity draws do not shift when other counts change") {
    GeneratorConfig small;
    small.sellers = 5;
    small.buyers = 50;
    GeneratorConfig large;
    large.sellers = 9;
    large.buyers = 120;

    Scenario a = generate_scenario(small, 7);
    Scenario b = generate_scenario(large, 7);
    for (int i = 0; i < small.sellers; ++i) CHECK(a.asks[i] == b.asks[i]);
    for (int i = 0; i < small.buyers; ++i) CHECK(a.bids[i] == b.bids[i]);
}

TEST_CASE("draws respect the configured ranges") {
    GeneratorConfig config;
    config.sellers = 40;
    config.buyers = 300;
    config.pattern = {3, 5, Rational(1, 10)};
    Scenario scenario = generate_scenario(config, 11);

    Rational base = config.pattern.base_bid;
    for (const Ask& ask : scenario.asks) {
        CHECK(ask.per_channel > base);
        CHECK(ask.per_channel <= 2);
        CHECK(ask.supply >= 1);
        CHECK(ask.supply <= 3);
    }
    std::set<int> demands;
    for (const Bid& bid : scenario.bids) {
        CHECK(bid.per_channel > base);
        CHECK(bid.per_channel <= 1);
        CHECK(bid.demand >= 1);
        CHECK(bid.demand <= 5);
        demands.insert(bid.demand);
        CHECK(bid.x >= 0);
        CHECK(bid.x <= config.area_side);
        CHECK(bid.y >= 0);
        CHECK(bid.y <= config.area_side);
    }
    CHECK(demands.size() == 5);
    validate_scenario(scenario);
}

TEST_CASE("zero base bid spans the whole unit range") {
    GeneratorConfig config;
    config.buyers = 200;
    Scenario scenario = generate_scenario(config, 3);
    for (const Bid& bid : scenario.bids) {
        CHECK(bid.per_channel > 0);
        CHECK(bid.per_channel <= 1);
    }
}

TEST_CASE("clustered buyers land inside their hotspot boxes") {
    GeneratorConfig config;
    config.buyers = 100;
    config.distribution = Distribution::Cluster;
    Scenario scenario = generate_scenario(config, 21);

    // The last 2 x 20 buyers fill the hotspots in index order; each block
    // must fit in a box of the hotspot side, inside the area.
    int base = 60;
    for (int h = 0; h < 2; ++h) {
        Rational min_x = config.area_side, max_x = 0;
        Rational min_y = config.area_side, max_y = 0;
        for (int i = 0; i < 20; ++i) {
            const Bid& bid =
                scenario.bids[static_cast<std::size_t>(base + h * 20 + i)];
            min_x = std::min(min_x, bid.x);
            max_x = std::max(max_x, bid.x);
            min_y = std::min(min_y, bid.y);
            max_y = std::max(max_y, bid.y);
        }
        CHECK(max_x - min_x <= config.hotspot_side);
        CHECK(max_y - min_y <= config.hotspot_side);
    }
    validate_scenario(scenario);

    // Covering the whole population with hotspots is fine too.
    config.buyers = 40;
    validate_scenario(generate_scenario(config, 5));
}

TEST_CASE("configuration errors are rejected") {
    GeneratorConfig config;
    config.buyers = 30;
    config.distribution = Distribution::Cluster;
    CHECK_THROWS_AS(generate_scenario(config, 1), ScenarioError);  // 40 > 30

    config = {};
    config.pattern.base_bid = 1;
    CHECK_THROWS_AS(generate_scenario(config, 1), ScenarioError);

    config = {};
    config.hotspot_side = 200;
    config.distribution = Distribution::Cluster;
    CHECK_THROWS_AS(generate_scenario(config, 1), ScenarioError);

    config = {};
    config.sellers = 0;
    CHECK_THROWS_AS(generate_scenario(config, 1), ScenarioError);
}

TEST_CASE("patterns parse from both separators") {
    auto pattern = parse_pattern("3,5,0");
    REQUIRE(pattern);
    CHECK(pattern->max_supply == 3);
    CHECK(pattern->max_demand == 5);
    CHECK(pattern->base_bid == 0);

    pattern = parse_pattern("5:7:0.1");
    REQUIRE(pattern);
    CHECK(pattern->max_supply == 5);
    CHECK(pattern->max_demand == 7);
    CHECK(pattern->base_bid == Rational(1, 10));
    CHECK(to_string(*pattern) == "5:7:0.1");

    CHECK_FALSE(parse_pattern("3,5"));
    CHECK_FALSE(parse_pattern("0,5,0"));
    CHECK_FALSE(parse_pattern("3,0,0"));
    CHECK_FALSE(parse_pattern("3,5,1"));
    CHECK_FALSE(parse_pattern("3,5,-0.1"));
    CHECK_FALSE(parse_pattern("a,b,c"));
    CHECK_FALSE(parse_pattern("3,5,0,1"));
}
