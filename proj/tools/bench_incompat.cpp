// Times the serial and parallel incompatibility searches on the same
// trial budget and checks that their results agree.
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>

#include "fairdag/criteria.hpp"

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
    std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;
    double tol = 1e-6;

    double t0 = now_seconds();
    fairdag::IncompatResult serial =
        fairdag::incompatibility_search_serial(trials, tol, seed);
    double t1 = now_seconds();
    fairdag::IncompatResult parallel =
        fairdag::incompatibility_search(trials, tol, seed);
    double t2 = now_seconds();

    double serial_s = t1 - t0;
    double parallel_s = t2 - t1;
    std::cout << "trials: " << trials << "\n"
              << "serial:   " << serial_s << " s\n"
              << "parallel: " << parallel_s << " s\n"
              << "speedup:  " << serial_s / parallel_s << "x\n";

    bool agree = serial.accepted == parallel.accepted &&
                 serial.satisfying == parallel.satisfying &&
                 serial.counterexample.has_value() ==
                     parallel.counterexample.has_value();
    std::cout << "results agree: " << (agree ? "yes" : "NO") << "\n";
    return agree ? 0 : 1;
}
