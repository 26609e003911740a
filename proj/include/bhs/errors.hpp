#pragma once

#include <stdexcept>
#include <string>

namespace bhs {

// Base for all structured domain errors. `name()` is the stable identifier
// used in reports and CLI output; `what()` carries the human-readable detail.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string name, const std::string& msg)
        : std::runtime_error(msg), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

struct DivisionByZeroInterval : DomainError {
    explicit DivisionByZeroInterval(const std::string& msg = "interval divisor contains zero")
        : DomainError("DivisionByZeroInterval", msg) {}
};

struct SqrtOfNegativeInterval : DomainError {
    explicit SqrtOfNegativeInterval(const std::string& msg = "sqrt of interval with negative lower bound")
        : DomainError("SqrtOfNegativeInterval", msg) {}
};

struct EmptyIntervalOperand : DomainError {
    explicit EmptyIntervalOperand(const std::string& msg = "operation on empty interval")
        : DomainError("EmptyIntervalOperand", msg) {}
};

struct InvalidInterval : DomainError {
    explicit InvalidInterval(const std::string& msg)
        : DomainError("InvalidInterval", msg) {}
};

struct InvalidXi : DomainError {
    explicit InvalidXi(const std::string& msg = "xi must exceed 1")
        : DomainError("InvalidXi", msg) {}
    InvalidXi(std::string name, const std::string& msg) : DomainError(std::move(name), msg) {}
};

struct DegenerateXi : InvalidXi {
    explicit DegenerateXi(const std::string& msg = "xi = 1 degenerates the center-unstable direction")
        : InvalidXi("DegenerateXi", msg) {}
};

struct ComplexFixedPoints : DomainError {
    explicit ComplexFixedPoints(const std::string& msg = "1 - 4*mu < 0: fixed points are complex")
        : DomainError("ComplexFixedPoints", msg) {}
};

struct PlanarRequiresUnperturbed : DomainError {
    explicit PlanarRequiresUnperturbed(const std::string& msg = "operation requires kappa = eta = 0")
        : DomainError("PlanarRequiresUnperturbed", msg) {}
};

struct LegsUndefined : DomainError {
    explicit LegsUndefined(const std::string& msg = "legs require mu < -4")
        : DomainError("LegsUndefined", msg) {}
};

struct ZeroVector : DomainError {
    explicit ZeroVector(const std::string& msg = "cone membership of the zero vector is undefined")
        : DomainError("ZeroVector", msg) {}
};

struct InvalidConeConfig : DomainError {
    explicit InvalidConeConfig(const std::string& msg)
        : DomainError("InvalidConeConfig", msg) {}
};

struct ConeViolationAfterIteration : DomainError {
    explicit ConeViolationAfterIteration(const std::string& msg)
        : DomainError("ConeViolationAfterIteration", msg) {}
};

struct NotInBetween : DomainError {
    explicit NotInBetween(const std::string& msg = "disc is not in the superposition region")
        : DomainError("NotInBetween", msg) {}
};

struct NoLegInBetween : DomainError {
    explicit NoLegInBetween(const std::string& msg)
        : DomainError("NoLegInBetween", msg) {}
};

struct NoPositiveEpsilon : DomainError {
    explicit NoPositiveEpsilon(const std::string& msg)
        : DomainError("NoPositiveEpsilon", msg) {}
};

struct InvalidDisc : DomainError {
    explicit InvalidDisc(const std::string& msg) : DomainError("InvalidDisc", msg) {}
};

struct UsageError : DomainError {
    explicit UsageError(const std::string& msg) : DomainError("UsageError", msg) {}
};

} // namespace bhs
