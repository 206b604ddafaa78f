#pragma once

#include <cstdint>
#include <string>

namespace supertau {

enum class Kind : uint8_t {
    EvenJet = 1,   // u^{alpha,s}
    OnePoint = 2,  // f_{alpha,p}
    EvenTime = 3,  // t^{alpha,p}
    ExpGen = 4,    // exp(v^alpha); the stored power is the integer multiple
    OddSigma = 5,  // sigma^s_{alpha,k}; k = 0 is theta^s_alpha
    PhiGen = 6,    // Phi^n_{alpha,p}
    OddTime = 7,   // tau_k
};

// Packed generator key. Field layout (20 bits each) is chosen so that the
// numeric order of odd keys is (level, alpha, derivative) for sigma, then Phi,
// then the odd times.
struct Gen {
    uint64_t key = 0;

    static constexpr uint64_t kMask = (1u << 20) - 1;

    static Gen make(Kind k, uint64_t f1, uint64_t f2 = 0, uint64_t f3 = 0) {
        return Gen{(static_cast<uint64_t>(k) << 60) | ((f1 & kMask) << 40) | ((f2 & kMask) << 20) | (f3 & kMask)};
    }
    static Gen jet(int alpha, int s = 0) { return make(Kind::EvenJet, alpha, s); }
    static Gen onepoint(int alpha, int p) { return make(Kind::OnePoint, alpha, p); }
    static Gen time(int alpha, int p) { return make(Kind::EvenTime, alpha, p); }
    static Gen expo(int alpha) { return make(Kind::ExpGen, alpha); }
    static Gen sigma(int alpha, int k, int s = 0) { return make(Kind::OddSigma, k, alpha, s); }
    static Gen theta(int alpha, int s = 0) { return sigma(alpha, 0, s); }
    static Gen phi(int alpha, int p, int n) { return make(Kind::PhiGen, n, alpha, p); }
    static Gen otime(int k) { return make(Kind::OddTime, k); }

    Kind kind() const { return static_cast<Kind>(key >> 60); }
    int f1() const { return static_cast<int>((key >> 40) & kMask); }
    int f2() const { return static_cast<int>((key >> 20) & kMask); }
    int f3() const { return static_cast<int>(key & kMask); }
    bool odd() const { return kind() >= Kind::OddSigma; }

    // Accessors by kind.
    int alpha() const;
    int level() const;  // k for sigma, p for f/t/Phi, k for tau
    int deriv() const;  // s for jets and sigma, 0 otherwise
    int phi_n() const { return f1(); }

    Gen with_deriv(int s) const;

    friend bool operator==(Gen a, Gen b) { return a.key == b.key; }
    friend bool operator!=(Gen a, Gen b) { return a.key != b.key; }
    friend bool operator<(Gen a, Gen b) { return a.key < b.key; }
};

inline int Gen::alpha() const {
    switch (kind()) {
        case Kind::OddSigma:
        case Kind::PhiGen: return f2();
        case Kind::OddTime: return 0;
        default: return f1();
    }
}

inline int Gen::level() const {
    switch (kind()) {
        case Kind::OddSigma: return f1();
        case Kind::PhiGen: return f3();
        case Kind::OnePoint:
        case Kind::EvenTime: return f2();
        case Kind::OddTime: return f1();
        default: return 0;
    }
}

inline int Gen::deriv() const {
    switch (kind()) {
        case Kind::EvenJet: return f2();
        case Kind::OddSigma: return f3();
        default: return 0;
    }
}

inline Gen Gen::with_deriv(int s) const {
    switch (kind()) {
        case Kind::EvenJet: return jet(f1(), s);
        case Kind::OddSigma: return sigma(f2(), f1(), s);
        default: return *this;
    }
}

}  // namespace supertau
