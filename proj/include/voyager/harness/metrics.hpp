// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voyager::harness {

struct Point {
    double x = 0;
    double z = 0;
};

struct Circle {
    Point center;
    double radius = 0;

    bool contains(const Point& p, double eps = 1e-9) const;
};

/// Welzl's algorithm with a fixed shuffle. Throws std::invalid_argument on empty input.
Circle smallest_enclosing_circle(std::vector<Point> points);

class MetricsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Tier { wooden, stone, iron, diamond };
std::string_view to_string(Tier t);
inline constexpr Tier all_tiers[] = {Tier::wooden, Tier::stone, Tier::iron, Tier::diamond};

/// "<tier>_pickaxe", "_axe", "_shovel", "_hoe" or "_sword".
bool is_tier_tool(std::string_view item, Tier tier);

struct CurvePoint {
    int iteration = 0;
    int unique_items = 0;
};

/// Per-iteration view of one driver's round events.
struct Sample {
    int iteration = 0;
    std::vector<std::string> new_items;
    Point position;
    std::string biome;
};

/// Round events in iteration order. Throws MetricsError on a malformed round event.
std::vector<Sample> samples(const std::vector<nlohmann::json>& events, const std::string& driver = "");

std::vector<CurvePoint> unique_items_curve(const std::vector<Sample>& samples);
std::map<Tier, int> tech_tree(const std::vector<Sample>& samples);

struct Metrics {
    std::vector<CurvePoint> unique_items_curve;
    std::map<Tier, int> tech_tree; // absent tier: never unlocked
    std::optional<Circle> coverage;
    std::set<std::string> terrains;
    std::set<std::string> items;
};

Metrics compute_metrics(const std::vector<nlohmann::json>& events, const std::string& driver = "");

/// iteration,unique_items,wooden,stone,iron,diamond,radius; tiers are 1 once unlocked.
std::string metrics_csv(const std::vector<Sample>& samples);

/// "6" or "N/A".
std::string tier_cell(const std::map<Tier, int>& tree, Tier tier);

struct Spread {
    double mean = 0;
    double sd = 0; // sample standard deviation; 0 for a single value
    std::string text() const; // "92 ± 72"
};

Spread mean_sd(const std::vector<double>& values);

} // namespace voyager::harness
