#pragma once

#include <cstdlib>
#include <thread>

namespace blab::par {

/// Worker cap: hardware concurrency clamped by the BLAB_THREADS environment
/// variable. Results never depend on it; chunk sums are combined in fixed
/// index order.
inline int maxThreads() {
    int hw = (int)std::thread::hardware_concurrency();
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("BLAB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

}  // namespace blab::par
