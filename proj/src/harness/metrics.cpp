// SPDX-License-Identifier: Apache-2.0
#include "voyager/harness/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace voyager::harness {

namespace {

double dist(const Point& a, const Point& b)
{
    return std::hypot(a.x - b.x, a.z - b.z);
}

Circle from_two(const Point& a, const Point& b)
{
    Point c{(a.x + b.x) / 2, (a.z + b.z) / 2};
    return {c, std::max(dist(c, a), dist(c, b))};
}

// Circumcircle; collinear triples fall back to the widest pair.
Circle from_three(const Point& a, const Point& b, const Point& c)
{
    double bx = b.x - a.x, bz = b.z - a.z;
    double cx = c.x - a.x, cz = c.z - a.z;
    double d = 2 * (bx * cz - bz * cx);
    if (std::abs(d) < 1e-12) {
        Circle best = from_two(a, b);
        for (const auto& cand : {from_two(a, c), from_two(b, c)})
            if (cand.radius > best.radius)
                best = cand;
        return best;
    }
    double b2 = bx * bx + bz * bz, c2 = cx * cx + cz * cz;
    Point center{a.x + (cz * b2 - bz * c2) / d, a.z + (bx * c2 - cx * b2) / d};
    return {center, std::max({dist(center, a), dist(center, b), dist(center, c)})};
}

} // namespace

bool Circle::contains(const Point& p, double eps) const
{
    return dist(center, p) <= radius + eps;
}

Circle smallest_enclosing_circle(std::vector<Point> points)
{
    if (points.empty())
        throw std::invalid_argument("enclosing circle of no points");
    std::mt19937_64 rng(0x5eed);
    std::shuffle(points.begin(), points.end(), rng);
    const double eps = 1e-12;
    Circle c{points[0], 0};
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (c.contains(points[i], eps))
            continue;
        c = {points[i], 0};
        for (std::size_t j = 0; j < i; ++j) {
            if (c.contains(points[j], eps))
                continue;
            c = from_two(points[i], points[j]);
            for (std::size_t k = 0; k < j; ++k)
                if (!c.contains(points[k], eps))
                    c = from_three(points[i], points[j], points[k]);
        }
    }
    return c;
}

std::string_view to_string(Tier t)
{
    switch (t) {
    case Tier::wooden: return "wooden";
    case Tier::stone: return "stone";
    case Tier::iron: return "iron";
    case Tier::diamond: return "diamond";
    }
    return "?";
}

bool is_tier_tool(std::string_view item, Tier tier)
{
    auto prefix = std::string(to_string(tier)) + "_";
    if (item.substr(0, prefix.size()) != prefix)
        return false;
    auto rest = item.substr(prefix.size());
    for (std::string_view tool : {"pickaxe", "axe", "shovel", "hoe", "sword"})
        if (rest == tool)
            return true;
    return false;
}

std::vector<Sample> samples(const std::vector<nlohmann::json>& events, const std::string& driver)
{
    std::vector<Sample> out;
    for (const auto& e : events) {
        if (e.value("type", "") != "round")
            continue;
        if (!driver.empty() && e.value("driver", "") != driver)
            continue;
        try {
            Sample s;
            s.iteration = e.at("iteration").get<int>();
            s.new_items = e.at("new_items").get<std::vector<std::string>>();
            const auto& p = e.at("position");
            s.position = {p.at(0).get<double>(), p.at(2).get<double>()};
            s.biome = e.value("biome", "");
            if (!out.empty() && s.iteration <= out.back().iteration)
                throw MetricsError(fmt::format("iteration {} does not increase", s.iteration));
            out.push_back(std::move(s));
        } catch (const nlohmann::json::exception& ex) {
            throw MetricsError(fmt::format("malformed round event {}: {}", e.value("seq", -1), ex.what()));
        }
    }
    return out;
}

std::vector<CurvePoint> unique_items_curve(const std::vector<Sample>& samples)
{
    std::set<std::string> seen;
    std::vector<CurvePoint> curve;
    for (const auto& s : samples) {
        seen.insert(s.new_items.begin(), s.new_items.end());
        curve.push_back({s.iteration, static_cast<int>(seen.size())});
    }
    return curve;
}

std::map<Tier, int> tech_tree(const std::vector<Sample>& samples)
{
    std::map<Tier, int> tree;
    for (const auto& s : samples)
        for (const auto& item : s.new_items)
            for (auto tier : all_tiers)
                if (is_tier_tool(item, tier) && !tree.count(tier))
                    tree[tier] = s.iteration;
    return tree;
}

Metrics compute_metrics(const std::vector<nlohmann::json>& events, const std::string& driver)
{
    auto ss = samples(events, driver);
    Metrics m;
    m.unique_items_curve = unique_items_curve(ss);
    m.tech_tree = tech_tree(ss);
    std::vector<Point> pts;
    for (const auto& s : ss) {
        pts.push_back(s.position);
        if (!s.biome.empty())
            m.terrains.insert(s.biome);
        m.items.insert(s.new_items.begin(), s.new_items.end());
    }
    if (!pts.empty())
        m.coverage = smallest_enclosing_circle(pts);
    return m;
}

std::string metrics_csv(const std::vector<Sample>& ss)
{
    std::string out = "iteration,unique_items,wooden,stone,iron,diamond,radius\n";
    auto curve = unique_items_curve(ss);
    auto tree = tech_tree(ss);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        pts.push_back(ss[i].position);
        auto circle = smallest_enclosing_circle(pts);
        out += fmt::format("{},{}", ss[i].iteration, curve[i].unique_items);
        for (auto tier : all_tiers) {
            auto it = tree.find(tier);
            out += (it != tree.end() && it->second <= ss[i].iteration) ? ",1" : ",0";
        }
        out += fmt::format(",{:.6f}\n", circle.radius);
    }
    return out;
}

std::string tier_cell(const std::map<Tier, int>& tree, Tier tier)
{
    auto it = tree.find(tier);
    return it == tree.end() ? "N/A" : std::to_string(it->second);
}

std::string Spread::text() const
{
    return fmt::format("{:.0f} ± {:.0f}", mean, sd);
}

Spread mean_sd(const std::vector<double>& values)
{
    if (values.empty())
        throw std::invalid_argument("mean of no values");
    Spread s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0;
        for (double v : values)
            sq += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

} // namespace voyager::harness
