#pragma once

#include <cstdint>
#include <string>

namespace property {

struct Outcome {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    bool pass() const { return cases > 0 && failures == 0; }
};

// D(ab) = D(a) b + (-1)^{|D||a|} a D(b) for dx, t- and tau-flows on the CP1 and KdV covers.
Outcome leibniz(int cases, uint64_t seed);
// antiderivative(dx p) = p on the free subalgebra, for p with no generator-free term.
Outcome antiderivative_of_dx(int cases, uint64_t seed);
// Variational derivatives ignore a total derivative added to the density.
Outcome lift_independence(int cases, uint64_t seed);
// Products agree under every association order and graded reordering, and with
// an independent normal form of the expanded words.
Outcome confluence(int cases, uint64_t seed);

}  // namespace property
