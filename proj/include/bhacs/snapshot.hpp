#pragma once

#include <array>
#include <string>

#include "bhacs/fields.hpp"
#include "bhacs/metric.hpp"

namespace bhacs {

// Fixed binary container for a field on disk. Layout (all little-endian):
//   bytes 0..6   magic "BHACS1\n"
//   u32          grid size n
//   u32          metric kind (0 Euclidean, 1 general constant)
//   16 x f64     metric entries, row-major
//   64 bytes     zero-padded ASCII label
//   f64          e2
//   f64          e1
//   6 x f64      Chern periods, pair order (01)(02)(03)(12)(13)(23)
//   n^4 x 16 f64 field values, points lexicographic (axis 0 slowest),
//                matrices row-major
// Round trips are bit-exact: load followed by save reproduces the file.
struct SnapshotMeta {
    std::string label;
    double e2 = 0.0;
    double e1 = 0.0;
    std::array<double, 6> periods{};
};

struct Snapshot {
    EndoField field;
    MetricField metric;
    SnapshotMeta meta;
};

void save_snapshot(const std::string& path, const EndoField& field, const MetricField& metric,
                   const SnapshotMeta& meta);

Snapshot load_snapshot(const std::string& path);

}  // namespace bhacs
