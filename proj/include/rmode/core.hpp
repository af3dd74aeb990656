// core.hpp - uniformly sampled real signals and elementwise arithmetic
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmode {

// Immutable, uniformly sampled real waveform. Sample n sits at
// start_time + n / sample_rate. All samples are finite and sample_rate > 0;
// the constructor enforces both.
class SignalBuffer {
public:
    SignalBuffer(std::vector<double> samples, double sample_rate, double start_time = 0.0);

    static SignalBuffer zeros(std::size_t n, double sample_rate, double start_time = 0.0);

    std::span<const double> samples() const noexcept { return samples_; }
    const double* data() const noexcept { return samples_.data(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    double sample_rate() const noexcept { return sample_rate_; }
    double start_time() const noexcept { return start_time_; }
    double time_at(std::size_t i) const noexcept {
        return start_time_ + static_cast<double>(i) / sample_rate_;
    }

    // Moves the samples out; the buffer is left empty.
    std::vector<double> release() && noexcept { return std::move(samples_); }

private:
    std::vector<double> samples_;
    double sample_rate_;
    double start_time_;
};

// Half-open sample index range [begin, end).
struct SampleRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
    bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
};

SampleRange intersect(SampleRange a, SampleRange b) noexcept;

// Throws AlignmentError naming the first mismatched field.
void require_aligned(const SignalBuffer& a, const SignalBuffer& b);

SignalBuffer add_signals(const SignalBuffer& a, const SignalBuffer& b);
SignalBuffer subtract_signals(const SignalBuffer& a, const SignalBuffer& b);
SignalBuffer scale_signal(const SignalBuffer& a, double k);

double mean_square(std::span<const double> x);
inline double mean_square(const SignalBuffer& x) { return mean_square(x.samples()); }

}  // namespace rmode
