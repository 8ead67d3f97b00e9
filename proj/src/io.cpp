#include "agraph/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace agraph {

namespace {

// Little-endian primitives. Bulk payloads take the memcpy path on
// little-endian hosts and fall back to per-element composition elsewhere.

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    put_bytes(out, b, 8);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

class Reader {
public:
    Reader(const std::string& path, std::ifstream stream)
        : path_(path), stream_(std::move(stream)) {}

    static Reader open(const std::string& path) {
        std::ifstream stream(path, std::ios::binary);
        if (!stream) throw IoError("cannot open '" + path + "' for reading");
        return Reader(path, std::move(stream));
    }

    std::uint64_t offset() const { return offset_; }

    bool at_eof() {
        stream_.peek();
        return stream_.eof();
    }

    void read_exact(void* p, std::size_t n, const char* what) {
        stream_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(stream_.gcount()) != n)
            throw DataError("'" + path_ + "': truncated " + what + " at byte offset " +
                            std::to_string(offset_));
        offset_ += n;
    }

    std::uint32_t read_u32(const char* what) {
        unsigned char b[4];
        read_exact(b, 4, what);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }

    std::uint64_t read_u64(const char* what) {
        unsigned char b[8];
        read_exact(b, 8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }

    float read_f32(const char* what) {
        const std::uint32_t bits = read_u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    double read_f64(const char* what) {
        const std::uint64_t bits = read_u64(what);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    void read_f32_block(float* dst, std::size_t n, const char* what) {
        if constexpr (std::endian::native == std::endian::little) {
            read_exact(dst, n * 4, what);
        } else {
            for (std::size_t i = 0; i < n; ++i) dst[i] = read_f32(what);
        }
    }

    void read_u32_block(std::uint32_t* dst, std::size_t n, const char* what) {
        if constexpr (std::endian::native == std::endian::little) {
            read_exact(dst, n * 4, what);
        } else {
            for (std::size_t i = 0; i < n; ++i) dst[i] = read_u32(what);
        }
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream stream_;
    std::uint64_t offset_ = 0;
};

void write_f32_block(std::ostream& out, const float* src, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
        put_bytes(out, src, n * 4);
    } else {
        for (std::size_t i = 0; i < n; ++i) put_f32(out, src[i]);
    }
}

void write_u32_block(std::ostream& out, const std::uint32_t* src, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
        put_bytes(out, src, n * 4);
    } else {
        for (std::size_t i = 0; i < n; ++i) put_u32(out, src[i]);
    }
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

constexpr char kMagic[8] = {'A', 'G', 'R', 'A', 'P', 'H', '0', '1'};
constexpr std::uint32_t kVersion = 1;

} // namespace

VectorDataset read_fvecs(const std::string& path, MetricKind metric) {
    Reader in = Reader::open(path);
    VectorDataset dataset;
    std::uint32_t dim = 0;
    std::vector<float> row;
    while (!in.at_eof()) {
        const std::uint64_t record_offset = in.offset();
        const std::uint32_t record_dim = in.read_u32("record header");
        if (record_dim == 0 || record_dim > (1u << 24))
            throw DataError("'" + path + "': implausible dimension " +
                            std::to_string(record_dim) + " at byte offset " +
                            std::to_string(record_offset));
        if (dim == 0) {
            dim = record_dim;
            dataset = VectorDataset(dim, metric);
        } else if (record_dim != dim) {
            throw DataError("'" + path + "': inconsistent dimension " +
                            std::to_string(record_dim) + " (expected " + std::to_string(dim) +
                            ") at byte offset " + std::to_string(record_offset));
        }
        row.resize(dim);
        in.read_f32_block(row.data(), dim, "record payload");
        dataset.push_row(row);
    }
    if (dim == 0) dataset = VectorDataset(1, metric); // empty file: degenerate empty dataset
    normalize_in_place(dataset);
    return dataset;
}

void write_fvecs(const std::string& path, const VectorDataset& dataset) {
    std::ofstream out = open_for_write(path);
    for (std::uint32_t i = 0; i < dataset.count(); ++i) {
        put_u32(out, dataset.dim());
        write_f32_block(out, dataset.row(i), dataset.dim());
    }
    finish_write(out, path);
}

std::vector<std::vector<std::uint32_t>> read_ivecs(const std::string& path) {
    Reader in = Reader::open(path);
    std::vector<std::vector<std::uint32_t>> lists;
    while (!in.at_eof()) {
        const std::uint64_t record_offset = in.offset();
        const std::uint32_t len = in.read_u32("record header");
        if (len > (1u << 24))
            throw DataError("'" + path + "': implausible record length " + std::to_string(len) +
                            " at byte offset " + std::to_string(record_offset));
        std::vector<std::uint32_t> ids(len);
        in.read_u32_block(ids.data(), len, "record payload");
        lists.push_back(std::move(ids));
    }
    return lists;
}

void write_ivecs(const std::string& path,
                 const std::vector<std::vector<std::uint32_t>>& lists) {
    std::ofstream out = open_for_write(path);
    for (const auto& ids : lists) {
        put_u32(out, static_cast<std::uint32_t>(ids.size()));
        write_u32_block(out, ids.data(), ids.size());
    }
    finish_write(out, path);
}

VectorDataset read_raw_f32(const std::string& path, std::uint32_t dim, std::uint32_t count,
                           MetricKind metric) {
    if (dim == 0) throw UsageError("raw-f32: --dim is required and must be >= 1");
    Reader in = Reader::open(path);
    std::vector<float> data(static_cast<std::size_t>(dim) * count);
    in.read_f32_block(data.data(), data.size(), "raw payload");
    if (!in.at_eof())
        throw DataError("'" + path + "': trailing bytes after " + std::to_string(count) +
                        " rows at byte offset " + std::to_string(in.offset()));
    VectorDataset dataset(dim, metric, std::move(data));
    normalize_in_place(dataset);
    return dataset;
}

void save_index(const SearchGraph& graph, const std::string& path) {
    std::ofstream out = open_for_write(path);
    const VectorDataset& data = graph.dataset();

    put_bytes(out, kMagic, 8);
    put_u32(out, kVersion);
    put_u32(out, data.dim());
    put_u32(out, graph.size());
    const std::uint8_t metric_tag = static_cast<std::uint8_t>(data.metric());
    put_bytes(out, &metric_tag, 1);
    put_f64(out, graph.log_base());
    put_f64(out, graph.search_params().delta);
    put_u32(out, graph.search_params().bsize);

    write_f32_block(out, data.raw().data(), static_cast<std::size_t>(data.dim()) * graph.size());

    std::uint64_t offset = 0;
    put_u64(out, offset);
    for (std::uint32_t u = 0; u < graph.size(); ++u) {
        offset += graph.neighbors(u).size();
        put_u64(out, offset);
    }
    for (std::uint32_t u = 0; u < graph.size(); ++u) {
        const auto list = graph.neighbors(u);
        write_u32_block(out, list.data(), list.size());
    }

    put_u32(out, static_cast<std::uint32_t>(graph.hints().size()));
    write_u32_block(out, graph.hints().data(), graph.hints().size());

    finish_write(out, path);
}

SearchGraph load_index(const std::string& path, std::uint64_t seed) {
    Reader in = Reader::open(path);

    char magic[8];
    in.read_exact(magic, 8, "magic");
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw DataError("'" + path + "': not an index file (bad magic)");
    const std::uint32_t version = in.read_u32("version");
    if (version != kVersion)
        throw DataError("'" + path + "': unsupported index version " + std::to_string(version));

    const std::uint32_t dim = in.read_u32("dim");
    const std::uint32_t count = in.read_u32("count");
    std::uint8_t metric_tag;
    in.read_exact(&metric_tag, 1, "metric tag");
    if (metric_tag > 1)
        throw DataError("'" + path + "': unknown metric tag " + std::to_string(metric_tag));
    const double log_base = in.read_f64("log base");
    const double delta = in.read_f64("delta");
    const std::uint32_t bsize = in.read_u32("bsize");

    std::vector<float> payload(static_cast<std::size_t>(dim) * count);
    in.read_f32_block(payload.data(), payload.size(), "dataset payload");
    VectorDataset dataset(dim, static_cast<MetricKind>(metric_tag), std::move(payload));
    dataset.validate();

    std::vector<std::uint64_t> offsets(static_cast<std::size_t>(count) + 1);
    for (auto& o : offsets) o = in.read_u64("adjacency offsets");
    std::vector<std::vector<std::uint32_t>> adjacency(count);
    for (std::uint32_t u = 0; u < count; ++u) {
        if (offsets[u + 1] < offsets[u])
            throw DataError("'" + path + "': adjacency offsets are not monotone");
        adjacency[u].resize(offsets[u + 1] - offsets[u]);
        in.read_u32_block(adjacency[u].data(), adjacency[u].size(), "adjacency ids");
    }

    const std::uint32_t hint_count = in.read_u32("hint count");
    std::vector<std::uint32_t> hints(hint_count);
    in.read_u32_block(hints.data(), hint_count, "hints");

    if (!in.at_eof())
        throw DataError("'" + path + "': trailing bytes at offset " + std::to_string(in.offset()));

    SearchGraph graph = SearchGraph::from_parts(
        std::move(dataset), log_base, Configuration{bsize, delta}, std::move(adjacency),
        std::move(hints));
    graph.reseed(seed);
    return graph;
}

Distribution parse_distribution(const std::string& name) {
    if (name == "uniform") return Distribution::Uniform;
    if (name == "gaussian" || name == "normal") return Distribution::Gaussian;
    throw UsageError("unknown distribution '" + name + "' (expected uniform or gaussian)");
}

VectorDataset synthesize(std::uint32_t count, std::uint32_t dim, Distribution dist,
                         std::uint64_t seed, MetricKind metric) {
    if (dim == 0) throw UsageError("synthesize: dim must be >= 1");
    Rng rng = Rng::derive(seed, 0xda7a);
    std::vector<float> data;
    data.reserve(static_cast<std::size_t>(count) * dim);
    for (std::size_t i = 0; i < static_cast<std::size_t>(count) * dim; ++i) {
        const double v = dist == Distribution::Uniform ? rng.uniform() : rng.gaussian();
        data.push_back(static_cast<float>(v));
    }
    VectorDataset dataset(dim, metric, std::move(data));
    normalize_in_place(dataset);
    return dataset;
}

} // namespace agraph
