#include "agraph/dataset.hpp"

#include <cmath>

namespace agraph {

const char* to_string(MetricKind metric) {
    return metric == MetricKind::L2 ? "l2" : "cos";
}

MetricKind parse_metric(const std::string& name) {
    if (name == "l2" || name == "L2") return MetricKind::L2;
    if (name == "cos" || name == "cosine") return MetricKind::NormalizedCosine;
    throw UsageError("unknown metric '" + name + "' (expected l2 or cos)");
}

namespace {

bool all_finite(const float* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(v[i])) return false;
    return true;
}

} // namespace

float distance(MetricKind metric, std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size())
        throw UsageError("distance: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
    if (u.empty()) throw UsageError("distance: empty vectors");
    if (!all_finite(u.data(), u.size()) || !all_finite(v.data(), v.size()))
        throw UsageError("distance: non-finite input");
    return distance_unchecked(metric, u.data(), v.data(), u.size());
}

VectorDataset::VectorDataset(std::uint32_t dim, MetricKind metric) : dim_(dim), metric_(metric) {
    if (dim == 0) throw UsageError("VectorDataset: dim must be >= 1");
}

VectorDataset::VectorDataset(std::uint32_t dim, MetricKind metric, std::vector<float> data)
    : dim_(dim), metric_(metric), data_(std::move(data)) {
    if (dim == 0) throw UsageError("VectorDataset: dim must be >= 1");
    if (data_.size() % dim_ != 0)
        throw DataError("VectorDataset: data length " + std::to_string(data_.size()) +
                        " is not a multiple of dim " + std::to_string(dim_));
    count_ = static_cast<std::uint32_t>(data_.size() / dim_);
    for (std::uint32_t i = 0; i < count_; ++i)
        if (!all_finite(row(i), dim_))
            throw DataError("VectorDataset: non-finite value in row " + std::to_string(i));
}

void VectorDataset::push_row(std::span<const float> v) {
    if (dim_ == 0) throw UsageError("VectorDataset: dim not set");
    if (v.size() != dim_)
        throw UsageError("VectorDataset: row has dimension " + std::to_string(v.size()) +
                         ", expected " + std::to_string(dim_));
    if (!all_finite(v.data(), v.size()))
        throw DataError("VectorDataset: non-finite value in row " + std::to_string(count_));
    data_.insert(data_.end(), v.begin(), v.end());
    ++count_;
}

void VectorDataset::validate() const {
    if (dim_ == 0) throw DataError("VectorDataset: dim must be >= 1");
    if (data_.size() != static_cast<std::size_t>(dim_) * count_)
        throw DataError("VectorDataset: data length does not equal dim * count");
    for (std::uint32_t i = 0; i < count_; ++i) {
        if (!all_finite(row(i), dim_))
            throw DataError("VectorDataset: non-finite value in row " + std::to_string(i));
        if (metric_ == MetricKind::NormalizedCosine) {
            const float norm = std::sqrt(detail::dot_scalar(row(i), row(i), dim_));
            if (std::fabs(norm - 1.0f) > 1e-5f)
                throw DataError("VectorDataset: row " + std::to_string(i) +
                                " is not unit-norm (|v| = " + std::to_string(norm) + ")");
        }
    }
}

void normalize_in_place(VectorDataset& dataset) {
    if (dataset.metric() == MetricKind::L2) return;
    const std::uint32_t dim = dataset.dim();
    for (std::uint32_t i = 0; i < dataset.count(); ++i) {
        float* v = dataset.data_.data() + static_cast<std::size_t>(i) * dim;
        double sq = 0.0;
        for (std::uint32_t j = 0; j < dim; ++j) sq += static_cast<double>(v[j]) * v[j];
        if (sq == 0.0)
            throw DataError("normalize: zero vector at row " + std::to_string(i));
        const float inv = static_cast<float>(1.0 / std::sqrt(sq));
        for (std::uint32_t j = 0; j < dim; ++j) v[j] *= inv;
    }
}

} // namespace agraph
