#include "apfoe/mulcount.hpp"

namespace apfoe {

namespace detail {
thread_local MulTally* active_tally = nullptr;
}

MulCountScope::MulCountScope() noexcept : previous_(detail::active_tally) {
    detail::active_tally = &tally_;
}

MulCountScope::~MulCountScope() { detail::active_tally = previous_; }

} // namespace apfoe
