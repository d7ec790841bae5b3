#include "critical_hawkes/runner.hpp"

namespace critical_hawkes {

unsigned resolve_thread_count(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    const unsigned detected = std::thread::hardware_concurrency();
    return detected == 0 ? 1 : detected;
}

}  // namespace critical_hawkes
