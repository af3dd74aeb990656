#include "rmode/core.hpp"

#include "rmode/errors.hpp"
#include "rmode/parallel.hpp"

#include <cmath>
#include <string>

namespace rmode {

SignalBuffer::SignalBuffer(std::vector<double> samples, double sample_rate, double start_time)
    : samples_(std::move(samples)), sample_rate_(sample_rate), start_time_(start_time) {
    if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
        throw DomainError("SignalBuffer: sample_rate must be finite and > 0, got " +
                          std::to_string(sample_rate_));
    if (!std::isfinite(start_time_))
        throw DomainError("SignalBuffer: start_time must be finite");
    for (std::size_t i = 0; i < samples_.size(); ++i)
        if (!std::isfinite(samples_[i]))
            throw DomainError("SignalBuffer: non-finite sample at index " + std::to_string(i));
}

SignalBuffer SignalBuffer::zeros(std::size_t n, double sample_rate, double start_time) {
    return SignalBuffer(std::vector<double>(n, 0.0), sample_rate, start_time);
}

SampleRange intersect(SampleRange a, SampleRange b) noexcept {
    SampleRange r{std::max(a.begin, b.begin), std::min(a.end, b.end)};
    if (r.end < r.begin) r.end = r.begin;
    return r;
}

void require_aligned(const SignalBuffer& a, const SignalBuffer& b) {
    if (a.sample_rate() != b.sample_rate())
        throw AlignmentError("sample_rate mismatch: " + std::to_string(a.sample_rate()) +
                             " vs " + std::to_string(b.sample_rate()));
    if (a.start_time() != b.start_time())
        throw AlignmentError("start_time mismatch: " + std::to_string(a.start_time()) + " vs " +
                             std::to_string(b.start_time()));
    if (a.size() != b.size())
        throw AlignmentError("length mismatch: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
}

namespace {

template <class Op>
SignalBuffer elementwise(const SignalBuffer& a, const SignalBuffer& b, Op op) {
    require_aligned(a, b);
    std::vector<double> out(a.size());
    const double* pa = a.data();
    const double* pb = b.data();
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = op(pa[i], pb[i]);
    return SignalBuffer(std::move(out), a.sample_rate(), a.start_time());
}

}  // namespace

SignalBuffer add_signals(const SignalBuffer& a, const SignalBuffer& b) {
    return elementwise(a, b, [](double x, double y) { return x + y; });
}

SignalBuffer subtract_signals(const SignalBuffer& a, const SignalBuffer& b) {
    return elementwise(a, b, [](double x, double y) { return x - y; });
}

SignalBuffer scale_signal(const SignalBuffer& a, double k) {
    if (!std::isfinite(k)) throw DomainError("scale_signal: scale factor must be finite");
    std::vector<double> out(a.size());
    const double* pa = a.data();
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = pa[i] * k;
    return SignalBuffer(std::move(out), a.sample_rate(), a.start_time());
}

double mean_square(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double sum = parallel::chunked_sum(x.size(), [&](std::size_t i) { return x[i] * x[i]; });
    return sum / static_cast<double>(x.size());
}

}  // namespace rmode
