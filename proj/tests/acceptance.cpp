#include <iostream>

#include "dmv/verify/acceptance.hpp"

int main() {
    int failed = 0;
    dmv::acceptance::run_all({}, [&](const dmv::acceptance::Result& r) {
        std::cout << r.line() << std::endl;
        failed += !r.passed;
    });
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : std::string("acceptance: all criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
