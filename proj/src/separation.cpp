#include "carlab/separation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <json.hpp>

#include "carlab/kernel.hpp"

namespace carlab {

namespace {

constexpr double kTwoPi = 2.0 * 3.141592653589793238462643383279502884;

double metric_eval(Metric metric, const Point& a, const Point& b) {
    return metric == Metric::Rho ? pseudo_hyperbolic(a, b) : rho_s(a, b);
}

/// Argument of one coordinate as a fraction of the circle, in [0,1).
double arg01(const Complex& z) {
    double t = std::arg(z) / kTwoPi;
    if (t < 0.0) t += 1.0;
    if (t >= 1.0) t -= 1.0;
    return t;
}

} // namespace

double separation_constant(const RandomSequence& seq, Metric metric) {
    const long n = seq.size();
    if (n < 2) return 1.0;
    double best = 1.0;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j < n; ++j)
            best = std::min(best, metric_eval(metric, seq.points[static_cast<size_t>(i)],
                                              seq.points[static_cast<size_t>(j)]));
    return best;
}

PartitionResult greedy_partition(const RandomSequence& seq, double delta, Metric metric) {
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidInput("greedy_partition: delta must lie in (0,1)");
    PartitionResult res;
    res.threshold = delta;
    const long n = seq.size();
    res.assignment.resize(static_cast<size_t>(n), -1);
    std::vector<std::vector<long>> parts;
    for (long i = 0; i < n; ++i) {
        int placed = -1;
        for (size_t p = 0; p < parts.size(); ++p) {
            bool ok = true;
            for (long j : parts[p]) {
                if (metric_eval(metric, seq.points[static_cast<size_t>(i)],
                                seq.points[static_cast<size_t>(j)]) < delta) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                placed = static_cast<int>(p);
                break;
            }
        }
        if (placed < 0) {
            placed = static_cast<int>(parts.size());
            parts.emplace_back();
        }
        parts[static_cast<size_t>(placed)].push_back(i);
        res.assignment[static_cast<size_t>(i)] = placed;
    }
    res.parts_used = static_cast<int>(parts.size());
    return res;
}

std::vector<CollisionEvent> rectangle_collisions(const RandomSequence& seq, int M) {
    if (seq.domain != Domain::Polydisc)
        throw InvalidInput("rectangle_collisions: polydisc sequences only");
    if (M < 1) throw InvalidInput("rectangle_collisions: M must be >= 1");
    // group points by region
    std::map<DyadicIndex, std::vector<int>> by_region;
    for (long i = 0; i < seq.size(); ++i)
        by_region[seq.region_of[static_cast<size_t>(i)]].push_back(static_cast<int>(i));

    std::vector<CollisionEvent> events;
    std::map<std::vector<int>, size_t> seen; // member set -> event index
    for (const auto& [region, idxs] : by_region) {
        if (static_cast<int>(idxs.size()) < M + 1) continue;
        const int d = region.dim();
        for (int grid = 0; grid < 2; ++grid) {
            const bool shifted = grid == 1;
            std::map<std::vector<long>, std::vector<int>> buckets;
            for (int pi : idxs) {
                const Point& z = seq.points[static_cast<size_t>(pi)];
                std::vector<long> rect(static_cast<size_t>(d));
                for (int c = 0; c < d; ++c) {
                    const double width = std::exp2(-region.m[static_cast<size_t>(c)]);
                    double t = arg01(z[c]);
                    if (shifted) {
                        t += 0.5 * width; // shift by 2^{-m_i-1} modulo 1
                        if (t >= 1.0) t -= 1.0;
                    }
                    long j = static_cast<long>(std::floor(t / width));
                    const long cells = static_cast<long>(std::exp2(region.m[static_cast<size_t>(c)]));
                    if (j >= cells) j = cells - 1; // t/width rounding at the top edge
                    rect[static_cast<size_t>(c)] = j;
                }
                buckets[std::move(rect)].push_back(pi);
            }
            for (auto& [rect, members] : buckets) {
                if (static_cast<int>(members.size()) < M + 1) continue;
                std::sort(members.begin(), members.end());
                if (seen.count(members)) continue; // same set caught by the other grid
                CollisionEvent ev;
                ev.region = region;
                ev.rectangle = rect;
                ev.members = members;
                ev.shifted = shifted;
                seen[ev.members] = events.size();
                events.push_back(std::move(ev));
            }
        }
    }
    return events;
}

namespace {

/// Largest per-coordinate band gap that cannot be ruled out for a pair at
/// pseudo-hyperbolic distance <= radius. Bands m and m+delta satisfy
/// rho >= (1 - 2^{1-delta})/(1 + 2^{1-delta}) through the radial Moebius
/// quotient, so gaps with that bound above the radius never interact.
int max_band_gap(double radius) {
    for (int delta = 1; delta <= 64; ++delta) {
        const double y = std::exp2(1 - delta);
        if ((1.0 - y) / (1.0 + y) > radius) return delta - 1;
    }
    return 1 << 20; // radius ~ 1, no pruning possible
}

} // namespace

long cluster_count(const RandomSequence& seq, int M, int l) {
    if (M < 1) throw InvalidInput("cluster_count: M must be >= 1");
    if (l < 0) throw InvalidInput("cluster_count: l must be >= 0");
    const double radius = std::exp2(-l);
    const int gap = max_band_gap(radius);

    std::map<DyadicIndex, std::vector<int>> by_region;
    for (long i = 0; i < seq.size(); ++i)
        by_region[seq.region_of[static_cast<size_t>(i)]].push_back(static_cast<int>(i));

    // candidate neighbor regions per region: every coordinate band within gap
    std::vector<const std::vector<int>*> lists;
    std::vector<const DyadicIndex*> keys;
    for (const auto& [reg, idxs] : by_region) {
        keys.push_back(&reg);
        lists.push_back(&idxs);
    }
    const size_t R = keys.size();
    long count = 0;
    for (size_t a = 0; a < R; ++a) {
        std::vector<const std::vector<int>*> cand;
        for (size_t b = 0; b < R; ++b) {
            bool near = true;
            for (int c = 0; c < keys[a]->dim() && near; ++c)
                near = std::abs(keys[a]->m[static_cast<size_t>(c)] -
                                keys[b]->m[static_cast<size_t>(c)]) <= gap;
            if (near) cand.push_back(lists[b]);
        }
        bool hit = false;
        for (int i : *lists[a]) {
            long neighbors = 0;
            for (const auto* lst : cand) {
                for (int j : *lst) {
                    if (i == j) continue;
                    if (pseudo_hyperbolic(seq.points[static_cast<size_t>(i)],
                                          seq.points[static_cast<size_t>(j)]) <= radius) {
                        if (++neighbors >= M) break;
                    }
                }
                if (neighbors >= M) break;
            }
            if (neighbors >= M) {
                hit = true;
                break;
            }
        }
        if (hit) ++count;
    }
    return count;
}

double uniform_separation_product(const RandomSequence& seq, int n) {
    if (n < 0 || n >= seq.size()) throw InvalidInput("uniform_separation_product: index out of range");
    double log_sum = 0.0;
    for (long j = 0; j < seq.size(); ++j) {
        if (j == n) continue;
        const double d = pseudo_hyperbolic(seq.points[static_cast<size_t>(j)],
                                           seq.points[static_cast<size_t>(n)]);
        if (d == 0.0) return 0.0; // duplicate point
        log_sum += std::log(d);
    }
    return std::exp(log_sum);
}

double uniform_separation_min(const RandomSequence& seq) {
    double best = 1.0;
    for (long i = 0; i < seq.size(); ++i)
        best = std::min(best, uniform_separation_product(seq, static_cast<int>(i)));
    return best;
}

void write_collisions_jsonl(std::ostream& os, const std::vector<CollisionEvent>& events) {
    for (const CollisionEvent& ev : events) {
        nlohmann::json row;
        row["region"] = ev.region.m;
        row["degree"] = ev.region.degree;
        row["rectangle"] = ev.rectangle;
        row["members"] = ev.members;
        row["shifted"] = ev.shifted;
        os << row.dump() << "\n";
    }
}

void write_partition_jsonl(std::ostream& os, const PartitionResult& partition) {
    std::vector<std::vector<int>> parts(static_cast<size_t>(partition.parts_used));
    for (size_t i = 0; i < partition.assignment.size(); ++i)
        parts[static_cast<size_t>(partition.assignment[i])].push_back(static_cast<int>(i));
    for (size_t p = 0; p < parts.size(); ++p) {
        nlohmann::json row;
        row["part"] = p;
        row["threshold"] = partition.threshold;
        row["members"] = parts[p];
        os << row.dump() << "\n";
    }
}

} // namespace carlab
