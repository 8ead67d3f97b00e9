#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include "agraph/errors.hpp"

namespace agraph {

enum class MetricKind : std::uint8_t {
    L2 = 0,
    NormalizedCosine = 1,
};

const char* to_string(MetricKind metric);
MetricKind parse_metric(const std::string& name);

namespace detail {

inline float l2_sq_scalar(const float* a, const float* b, std::size_t n) {
    float s0 = 0.f, s1 = 0.f, s2 = 0.f, s3 = 0.f;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float d0 = a[i] - b[i];
        const float d1 = a[i + 1] - b[i + 1];
        const float d2 = a[i + 2] - b[i + 2];
        const float d3 = a[i + 3] - b[i + 3];
        s0 += d0 * d0;
        s1 += d1 * d1;
        s2 += d2 * d2;
        s3 += d3 * d3;
    }
    for (; i < n; ++i) {
        const float d = a[i] - b[i];
        s0 += d * d;
    }
    return (s0 + s1) + (s2 + s3);
}

inline float dot_scalar(const float* a, const float* b, std::size_t n) {
    float s0 = 0.f, s1 = 0.f, s2 = 0.f, s3 = 0.f;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

#if defined(__AVX2__)
inline float hsum256(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 shuf = _mm_movehdup_ps(lo);
    __m128 sums = _mm_add_ps(lo, shuf);
    shuf = _mm_movehl_ps(shuf, sums);
    sums = _mm_add_ss(sums, shuf);
    return _mm_cvtss_f32(sums);
}

inline float l2_sq(const float* a, const float* b, std::size_t n) {
    if (n < 16) return l2_sq_scalar(a, b, n);
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
        acc = _mm256_fmadd_ps(d, d, acc);
    }
    float sum = hsum256(acc);
    for (; i < n; ++i) {
        const float d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

inline float dot(const float* a, const float* b, std::size_t n) {
    if (n < 16) return dot_scalar(a, b, n);
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
    }
    float sum = hsum256(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}
#else
inline float l2_sq(const float* a, const float* b, std::size_t n) { return l2_sq_scalar(a, b, n); }
inline float dot(const float* a, const float* b, std::size_t n) { return dot_scalar(a, b, n); }
#endif

} // namespace detail

inline float l2_distance(const float* a, const float* b, std::size_t n) {
    return std::sqrt(detail::l2_sq(a, b, n));
}

/// 1 - dot on unit-norm inputs, clamped to [0, 2].
inline float cosine_distance(const float* a, const float* b, std::size_t n) {
    const float d = 1.0f - detail::dot(a, b, n);
    if (d < 0.0f) return 0.0f;
    if (d > 2.0f) return 2.0f;
    return d;
}

/// Unchecked hot-path dispatch; preconditions (same dim, finite, unit norms
/// for cosine) are guaranteed by VectorDataset's ingestion invariants.
inline float distance_unchecked(MetricKind metric, const float* a, const float* b, std::size_t n) {
    return metric == MetricKind::L2 ? l2_distance(a, b, n) : cosine_distance(a, b, n);
}

/// Checked distance between two vectors. Throws UsageError on dimension
/// mismatch or non-finite input.
float distance(MetricKind metric, std::span<const float> u, std::span<const float> v);

/// Contiguous row-major float32 vectors plus the metric they live under.
/// Immutable once ingested; concurrent readers need no coordination.
class VectorDataset {
public:
    VectorDataset() = default;
    VectorDataset(std::uint32_t dim, MetricKind metric);
    VectorDataset(std::uint32_t dim, MetricKind metric, std::vector<float> data);

    std::uint32_t dim() const { return dim_; }
    std::uint32_t count() const { return count_; }
    MetricKind metric() const { return metric_; }
    bool empty() const { return count_ == 0; }

    const float* row(std::uint32_t i) const { return data_.data() + static_cast<std::size_t>(i) * dim_; }
    std::span<const float> row_span(std::uint32_t i) const { return {row(i), dim_}; }
    std::span<const float> raw() const { return {data_.data(), data_.size()}; }

    void reserve(std::uint32_t count) { data_.reserve(static_cast<std::size_t>(count) * dim_); }
    /// Appends one vector; validates dimension and finiteness.
    void push_row(std::span<const float> v);

    /// Full invariant check, including unit norms for cosine datasets.
    void validate() const;

    std::size_t memory_bytes() const { return data_.size() * sizeof(float); }

private:
    std::uint32_t dim_ = 0;
    std::uint32_t count_ = 0;
    MetricKind metric_ = MetricKind::L2;
    std::vector<float> data_;

    friend void normalize_in_place(VectorDataset& dataset);
};

/// Scales every row to unit L2 norm for NormalizedCosine datasets; L2
/// datasets pass through unchanged. Throws DataError naming the row index
/// when a zero vector is encountered.
void normalize_in_place(VectorDataset& dataset);

} // namespace agraph
