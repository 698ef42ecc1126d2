#ifndef CVX_CERTIFICATE_HPP
#define CVX_CERTIFICATE_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cvx/vec.hpp"

namespace cvx {

enum class CertKind {
    convexity,
    lipschitz,
    control,
    ndc_witness,
    non_extendability,
    nesting,
    agreement,
    inclusion,
};

inline const char* to_string(CertKind k) {
    switch (k) {
        case CertKind::convexity: return "convexity";
        case CertKind::lipschitz: return "lipschitz";
        case CertKind::control: return "control";
        case CertKind::ndc_witness: return "ndc_witness";
        case CertKind::non_extendability: return "non_extendability";
        case CertKind::nesting: return "nesting";
        case CertKind::agreement: return "agreement";
        case CertKind::inclusion: return "inclusion";
    }
    return "?";
}

// Worst violation seen while sampling a check.
struct Violation {
    double amount = 0.0;   // how far past the tolerance
    Vec at_x;              // offending point(s), if applicable
    Vec at_y;
    std::string note;
};

// Outcome record of a numerical check. Reproducible from (inputs, seed).
struct Certificate {
    CertKind kind = CertKind::convexity;
    bool pass = false;
    std::size_t samples = 0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    Violation worst;
    std::string label;

    std::string report_line() const {
        std::ostringstream os;
        os.precision(17);
        os << (pass ? "PASS" : "FAIL") << ' ' << to_string(kind);
        if (!label.empty()) os << " [" << label << "]";
        os << " samples=" << samples << " tol=" << tolerance << " seed=" << seed;
        if (!pass) os << " worst=" << worst.amount << (worst.note.empty() ? "" : " " + worst.note);
        return os.str();
    }
};

inline Certificate merge(const Certificate& a, const Certificate& b) {
    Certificate c = a;
    c.pass = a.pass && b.pass;
    c.samples = a.samples + b.samples;
    if (!b.pass && b.worst.amount > c.worst.amount) c.worst = b.worst;
    return c;
}

// Thrown when a precondition is violated (rejected input).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative routine fails to certify or converge.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an assembled control fails certification; carries the evidence.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const Certificate& c)
        : std::runtime_error("certification failed: " + c.report_line()), cert(c) {}
    Certificate cert;
};

}  // namespace cvx

#endif
