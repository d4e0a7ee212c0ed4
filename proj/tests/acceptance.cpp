#include <iostream>

#include <lcfib/verify.hpp>

// Prints one line per acceptance criterion and exits non-zero if any fails.
int main() {
    auto results = lcfib::run_acceptance(8);
    std::cout << lcfib::render_acceptance(results, false);
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}
