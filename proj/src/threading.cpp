#include "bigmeans/threading.hpp"

#include <atomic>
#include <thread>

namespace bigmeans {

namespace {

unsigned default_count() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

std::atomic<unsigned>& slot() {
    static std::atomic<unsigned> count{default_count()};
    return count;
}

}  // namespace

void set_worker_count(unsigned count) { slot().store(count == 0 ? 1u : count); }

unsigned worker_count() { return slot().load(); }

}  // namespace bigmeans
