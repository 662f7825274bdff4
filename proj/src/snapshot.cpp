#include "bhacs/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace bhacs {

static_assert(std::endian::native == std::endian::little,
              "snapshot serialization assumes a little-endian host");

namespace {

constexpr char kMagic[7] = {'B', 'H', 'A', 'C', 'S', '1', '\n'};
constexpr std::size_t kLabelBytes = 64;

void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is, const char* what) {
    std::uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
        throw Error(std::string("snapshot: truncated while reading ") + what);
    return v;
}

double read_f64(std::istream& is, const char* what) {
    double v = 0.0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
        throw Error(std::string("snapshot: truncated while reading ") + what);
    return v;
}

}  // namespace

void save_snapshot(const std::string& path, const EndoField& field, const MetricField& metric,
                   const SnapshotMeta& meta) {
    if (meta.label.size() >= kLabelBytes)
        throw Error("snapshot: label longer than 63 bytes");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("snapshot: cannot open '" + path + "' for writing");
    os.write(kMagic, sizeof kMagic);
    write_u32(os, static_cast<std::uint32_t>(field.grid.n));
    write_u32(os, metric.is_identity ? 0u : 1u);
    for (int i = 0; i < 16; ++i) write_f64(os, metric.g.a[i]);
    char label[kLabelBytes] = {};
    std::memcpy(label, meta.label.data(), meta.label.size());
    os.write(label, kLabelBytes);
    write_f64(os, meta.e2);
    write_f64(os, meta.e1);
    for (double p : meta.periods) write_f64(os, p);
    os.write(reinterpret_cast<const char*>(field.data.data()),
             static_cast<std::streamsize>(field.data.size() * sizeof(Mat4)));
    if (!os) throw Error("snapshot: write to '" + path + "' failed");
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("snapshot: cannot open '" + path + "'");
    char magic[sizeof kMagic];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw Error("snapshot: '" + path + "' is not a field snapshot (bad magic)");
    const std::uint32_t n = read_u32(is, "grid size");
    if (n < 8 || n > 4096) throw Error("snapshot: implausible grid size");
    const std::uint32_t kind = read_u32(is, "metric kind");
    if (kind > 1) throw Error("snapshot: unknown metric kind");
    Mat4 g;
    for (int i = 0; i < 16; ++i) g.a[i] = read_f64(is, "metric entry");

    Snapshot snap;
    if (kind == 0) {
        if (max_abs(g - Mat4::identity()) != 0.0)
            throw Error("snapshot: Euclidean kind with non-identity entries");
        snap.metric = MetricField::flat();
    } else {
        snap.metric = MetricField::constant(g);
    }
    char label[kLabelBytes];
    if (!is.read(label, kLabelBytes)) throw Error("snapshot: truncated label");
    label[kLabelBytes - 1] = '\0';
    snap.meta.label = label;
    snap.meta.e2 = read_f64(is, "e2");
    snap.meta.e1 = read_f64(is, "e1");
    for (int c = 0; c < 6; ++c) snap.meta.periods[c] = read_f64(is, "period");
    snap.field = EndoField(Grid(static_cast<int>(n)));
    const std::streamsize bytes =
        static_cast<std::streamsize>(snap.field.data.size() * sizeof(Mat4));
    if (!is.read(reinterpret_cast<char*>(snap.field.data.data()), bytes))
        throw Error("snapshot: truncated field payload");
    is.peek();
    if (!is.eof()) throw Error("snapshot: trailing bytes after field payload");
    return snap;
}

}  // namespace bhacs
