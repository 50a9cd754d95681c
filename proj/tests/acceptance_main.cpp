// Runs every acceptance criterion at dim and 2·dim. Exit status is nonzero
// when any criterion misses its tolerance.
#include "rabi/acceptance.hpp"

#include <iostream>

int main() {
    const auto reports = rabi::run_acceptance({}, std::cout);
    int passed = 0;
    for (const auto& r : reports) passed += r.pass ? 1 : 0;
    std::cout << passed << "/" << reports.size() << " criteria passed\n";
    return rabi::all_passed(reports) ? 0 : 1;
}
