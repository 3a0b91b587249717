#include "mbdp/parallel.hpp"

#include <cstdlib>
#include <string>

#include "mbdp/errors.hpp"

namespace mbdp {

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv(kThreadsEnv); env && *env) {
        const std::string text(env);
        if (text.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError(std::string(kThreadsEnv) + " must be a positive integer, got '" + text + "'");
        const auto value = std::stoull(text);
        if (value > 0) return static_cast<std::size_t>(value);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace mbdp
