#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agraph/dataset.hpp"
#include "agraph/graph.hpp"

namespace agraph {

// fvecs/ivecs: repeated records of [dim: u32 LE][dim x 32-bit LE payload].
// Cosine datasets are normalized on load.

VectorDataset read_fvecs(const std::string& path, MetricKind metric);
void write_fvecs(const std::string& path, const VectorDataset& dataset);

std::vector<std::vector<std::uint32_t>> read_ivecs(const std::string& path);
void write_ivecs(const std::string& path,
                 const std::vector<std::vector<std::uint32_t>>& lists);

/// Headerless float32 rows; dim and count must be supplied by the caller.
VectorDataset read_raw_f32(const std::string& path, std::uint32_t dim, std::uint32_t count,
                           MetricKind metric);

// Index file: little-endian, 8-byte magic "AGRAPH01", u32 version, u32 dim,
// u32 count, u8 metric tag, f64 log base, f64 delta, u32 bsize, then the
// dataset payload (dim*count f32), adjacency as CSR (u64 offsets, u32 ids),
// and the hint list (u32 count, u32 ids).

void save_index(const SearchGraph& graph, const std::string& path);
SearchGraph load_index(const std::string& path, std::uint64_t seed = 1);

enum class Distribution : std::uint8_t { Uniform = 0, Gaussian = 1 };
Distribution parse_distribution(const std::string& name);

/// Deterministic synthetic dataset; rows are generated sequentially from the
/// seed, so the first `count` rows of a larger draw are identical.
VectorDataset synthesize(std::uint32_t count, std::uint32_t dim, Distribution dist,
                         std::uint64_t seed, MetricKind metric);

} // namespace agraph
