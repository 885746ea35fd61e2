#include "rmts/threads.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace rmts {

unsigned worker_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("RMTS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) n = static_cast<unsigned>(v);
        } catch (...) {
            n = 0;
        }
    }
    if (n == 0) n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

} // namespace rmts
