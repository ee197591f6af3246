#include "defsched/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>

namespace defsched {

namespace {

template <typename T>
bool dominates_impl(std::span<const T> a, std::span<const T> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dominates: length mismatch");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
        if (a[i] > b[i]) strict = true;
    }
    return strict;
}

}  // namespace

bool dominates(std::span<const long long> a, std::span<const long long> b) {
    return dominates_impl(a, b);
}

bool dominates(std::span<const double> a, std::span<const double> b) {
    return dominates_impl(a, b);
}

std::vector<int> sort_fronts(std::span<const ObjectiveVector> points) {
    const int n = static_cast<int>(points.size());
    std::vector<int> ranks(n, 0);
    if (n == 0) return ranks;

    // Deb's fast non-dominated sort.
    std::vector<std::vector<int>> dominated_by(n);
    std::vector<int> domination_count(n, 0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (dominates(points[a], points[b])) {
                dominated_by[a].push_back(b);
                ++domination_count[b];
            } else if (dominates(points[b], points[a])) {
                dominated_by[b].push_back(a);
                ++domination_count[a];
            }
        }
    }
    std::vector<int> current;
    for (int i = 0; i < n; ++i)
        if (domination_count[i] == 0) current.push_back(i);
    int rank = 0;
    while (!current.empty()) {
        std::vector<int> next;
        for (int i : current) {
            ranks[i] = rank;
            for (int j : dominated_by[i])
                if (--domination_count[j] == 0) next.push_back(j);
        }
        current = std::move(next);
        ++rank;
    }
    return ranks;
}

CrowdingValue crowding_distance(const ObjectiveVector& point, std::span<const ObjectiveVector> ref,
                                int self) {
    CrowdingValue value;
    const int neighbours = static_cast<int>(ref.size()) - (self >= 0 ? 1 : 0);
    if (neighbours < 2) {
        value.boundary = true;
        return value;
    }
    const std::size_t m = point.size();
    for (std::size_t i = 0; i < m; ++i) {
        long long lo = std::numeric_limits<long long>::max();
        long long hi = std::numeric_limits<long long>::min();
        for (const auto& p : ref) {
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        if (self < 0) {
            lo = std::min(lo, point[i]);
            hi = std::max(hi, point[i]);
        }
        if (hi == lo) continue;  // zero-range objective: neutral

        // Closest neighbour at or above / at or below in this objective.
        long long above = std::numeric_limits<long long>::max();
        long long below = std::numeric_limits<long long>::min();
        bool strictly_above = false, strictly_below = false;
        for (int k = 0; k < static_cast<int>(ref.size()); ++k) {
            if (k == self) continue;
            long long v = ref[k][i];
            if (v >= point[i]) above = std::min(above, v);
            if (v <= point[i]) below = std::max(below, v);
            if (v > point[i]) strictly_above = true;
            if (v < point[i]) strictly_below = true;
        }
        if (!strictly_above || !strictly_below) {
            value.boundary = true;
            if (above == std::numeric_limits<long long>::max()) above = hi;
            if (below == std::numeric_limits<long long>::min()) below = lo;
        }
        value.distance += static_cast<double>(above - below) / static_cast<double>(hi - lo);
    }
    return value;
}

namespace {

double slice_volume(std::vector<std::vector<double>> pts, const std::vector<double>& ref, int m) {
    if (pts.empty()) return 0.0;
    if (m == 1) {
        double best = 0.0;
        for (const auto& p : pts) best = std::max(best, p[0] - ref[0]);
        return best;
    }
    std::sort(pts.begin(), pts.end(),
              [m](const auto& a, const auto& b) { return a[m - 1] > b[m - 1]; });
    double volume = 0.0;
    std::vector<std::vector<double>> slab;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        // Projection of pts[i]; drop it when an existing slab point dominates it.
        std::vector<double> proj(pts[i].begin(), pts[i].begin() + (m - 1));
        bool covered = false;
        for (const auto& q : slab) {
            bool all = true;
            for (int c = 0; c < m - 1 && all; ++c) all = q[c] >= proj[c];
            if (all) {
                covered = true;
                break;
            }
        }
        if (!covered) slab.push_back(std::move(proj));
        double upper = pts[i][m - 1];
        double lower = (i + 1 < pts.size()) ? pts[i + 1][m - 1] : ref[m - 1];
        if (upper > lower) volume += (upper - lower) * slice_volume(slab, ref, m - 1);
    }
    return volume;
}

}  // namespace

double hypervolume(std::span<const std::vector<double>> points, const std::vector<double>& reference) {
    if (points.empty()) return 0.0;
    const int m = static_cast<int>(reference.size());
    std::vector<std::vector<double>> clamped;
    clamped.reserve(points.size());
    bool warned = false;
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != m)
            throw std::invalid_argument("hypervolume: point/reference length mismatch");
        std::vector<double> q = p;
        for (int c = 0; c < m; ++c) {
            if (q[c] < reference[c]) {
                if (!warned) {
                    std::cerr << "hypervolume: point below reference clamped\n";
                    warned = true;
                }
                q[c] = reference[c];
            }
        }
        clamped.push_back(std::move(q));
    }
    return slice_volume(std::move(clamped), reference, m);
}

std::vector<std::vector<double>> normalize_points(std::span<const ObjectiveVector> points,
                                                  const ObjectiveVector& z_min,
                                                  const ObjectiveVector& z_max) {
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        std::vector<double> q(p.size());
        for (std::size_t c = 0; c < p.size(); ++c) {
            long long range = z_max[c] - z_min[c];
            q[c] = range == 0 ? 0.0 : static_cast<double>(p[c] - z_min[c]) / static_cast<double>(range);
        }
        out.push_back(std::move(q));
    }
    return out;
}

double normalized_hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& z_min,
                              const ObjectiveVector& z_max) {
    auto normalized = normalize_points(points, z_min, z_max);
    std::vector<double> reference(z_min.size(), 0.0);
    return hypervolume(normalized, reference);
}

FrontArchive::FrontArchive(std::vector<FrontEntry> entries) : entries_(std::move(entries)) {
    std::vector<ObjectiveVector> points;
    points.reserve(entries_.size());
    for (const auto& e : entries_) points.push_back(e.z);
    ranks_ = sort_fronts(points);
}

std::vector<FrontEntry> FrontArchive::front(int rank) const {
    std::vector<FrontEntry> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (ranks_[i] == rank) out.push_back(entries_[i]);
    return out;
}

std::vector<ObjectiveVector> FrontArchive::front_vectors() const {
    std::vector<ObjectiveVector> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (ranks_[i] == 0) out.push_back(entries_[i].z);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FrontArchive merge_nondominated(std::span<const FrontArchive> archives) {
    // Collapse duplicates to the lowest payload id, then keep rank 0.
    std::map<ObjectiveVector, long long> best_payload;
    for (const auto& archive : archives)
        for (const auto& e : archive.entries()) {
            auto [it, inserted] = best_payload.try_emplace(e.z, e.payload);
            if (!inserted && e.payload < it->second) it->second = e.payload;
        }
    std::vector<FrontEntry> unique;
    unique.reserve(best_payload.size());
    for (const auto& [z, payload] : best_payload) unique.push_back({z, payload});

    std::vector<ObjectiveVector> points;
    points.reserve(unique.size());
    for (const auto& e : unique) points.push_back(e.z);
    auto ranks = sort_fronts(points);
    std::vector<FrontEntry> kept;
    for (std::size_t i = 0; i < unique.size(); ++i)
        if (ranks[i] == 0) kept.push_back(std::move(unique[i]));
    return FrontArchive(std::move(kept));
}

}  // namespace defsched
