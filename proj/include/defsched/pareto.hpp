#pragma once

#include <span>
#include <vector>

#include "defsched/model.hpp"

namespace defsched {

/// Componentwise maximization dominance: a >= b everywhere, > somewhere.
/// Throws std::invalid_argument on length mismatch.
bool dominates(std::span<const long long> a, std::span<const long long> b);
bool dominates(std::span<const double> a, std::span<const double> b);

/// Non-dominated sorting: rank 0 is the maximal set, rank n entries are
/// dominated only by earlier ranks. Empty input gives empty output.
std::vector<int> sort_fronts(std::span<const ObjectiveVector> points);

/// Crowding distance of `point` against reference set `ref`. `self` is the
/// index of `point` inside `ref` when it is a member (excluded from its own
/// neighbourhood), or -1. Boundary points — no strictly better or strictly
/// worse neighbour in some positive-range objective — carry an infinite
/// marker that wins every comparison against finite distances; the finite
/// part is still accumulated from the remaining objectives. Zero-range
/// objectives contribute nothing. |ref| < 2 (excluding self) is boundary.
struct CrowdingValue {
    double distance = 0.0;
    bool boundary = false;

    /// <0, 0, >0 like a three-way compare; boundary beats finite, two
    /// boundary markers tie.
    friend int crowding_compare(const CrowdingValue& a, const CrowdingValue& b) {
        if (a.boundary != b.boundary) return a.boundary ? 1 : -1;
        if (a.boundary) return 0;
        if (a.distance < b.distance) return -1;
        if (a.distance > b.distance) return 1;
        return 0;
    }
};

CrowdingValue crowding_distance(const ObjectiveVector& point, std::span<const ObjectiveVector> ref,
                                int self = -1);

/// Exact hypervolume of the union of boxes [reference, point] by recursive
/// slicing, for points already normalized (typically to [0,1]^m with the
/// reference at the origin). Coordinates below the reference are clamped to
/// it and a warning is emitted once per call.
double hypervolume(std::span<const std::vector<double>> points, const std::vector<double>& reference);

/// Normalize integer objective vectors with (z - z_min) / (z_max - z_min)
/// per coordinate; zero-range coordinates map to 0.
std::vector<std::vector<double>> normalize_points(std::span<const ObjectiveVector> points,
                                                  const ObjectiveVector& z_min,
                                                  const ObjectiveVector& z_max);

/// Hypervolume of `points` after normalization against the minima reference.
double normalized_hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& z_min,
                              const ObjectiveVector& z_max);

// ---------------------------------------------------------------------------

struct FrontEntry {
    ObjectiveVector z;
    long long payload = -1;  // caller-side solution id
};

/// Entries with dominance bookkeeping; immutable after construction.
class FrontArchive {
public:
    FrontArchive() = default;
    explicit FrontArchive(std::vector<FrontEntry> entries);

    const std::vector<FrontEntry>& entries() const { return entries_; }
    const std::vector<int>& ranks() const { return ranks_; }

    /// Entries of the given rank, in entry order.
    std::vector<FrontEntry> front(int rank = 0) const;
    /// Distinct objective vectors of rank 0, sorted (for set comparisons).
    std::vector<ObjectiveVector> front_vectors() const;

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<FrontEntry> entries_;
    std::vector<int> ranks_;
};

/// Rank-0 entries of the union of all archives. Entries with identical
/// objective vectors collapse to the lowest payload id.
FrontArchive merge_nondominated(std::span<const FrontArchive> archives);

}  // namespace defsched
