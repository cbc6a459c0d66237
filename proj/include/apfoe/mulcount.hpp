#pragma once

#include <cstdint>

namespace apfoe {

// Instrumented arithmetic: kernels report the real multiplications they execute
// (twiddle and chirp table precomputation excluded). Counting is off unless a
// MulCountScope is alive on the current thread.

enum class MulKind { FourthPower, Window, Fft, Mix, Filter, Refine, Chirp };

struct MulTally {
    std::uint64_t fourth_power = 0;
    std::uint64_t window = 0;
    std::uint64_t fft = 0;
    std::uint64_t mix = 0;
    std::uint64_t filter = 0;
    std::uint64_t refine = 0;
    std::uint64_t chirp = 0;

    std::uint64_t total() const noexcept {
        return fourth_power + window + fft + mix + filter + refine + chirp;
    }
};

class MulCountScope {
public:
    MulCountScope() noexcept;
    ~MulCountScope();
    MulCountScope(const MulCountScope&) = delete;
    MulCountScope& operator=(const MulCountScope&) = delete;

    const MulTally& tally() const noexcept { return tally_; }

private:
    MulTally tally_;
    MulTally* previous_;
};

namespace detail {
extern thread_local MulTally* active_tally;

inline void count_muls(MulKind kind, std::uint64_t n) noexcept {
    MulTally* t = active_tally;
    if (!t) return;
    switch (kind) {
    case MulKind::FourthPower: t->fourth_power += n; break;
    case MulKind::Window: t->window += n; break;
    case MulKind::Fft: t->fft += n; break;
    case MulKind::Mix: t->mix += n; break;
    case MulKind::Filter: t->filter += n; break;
    case MulKind::Refine: t->refine += n; break;
    case MulKind::Chirp: t->chirp += n; break;
    }
}
} // namespace detail

} // namespace apfoe
