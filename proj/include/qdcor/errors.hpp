#pragma once

#include <stdexcept>
#include <string>

namespace qdcor {

/// A moment of the requested order does not exist for the distribution
/// (e.g. Student-t of order >= df).
class MomentUnavailable : public std::runtime_error {
public:
    MomentUnavailable(int order, const std::string& what)
        : std::runtime_error(what), order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_;
};

/// A smoothness/positivity condition required by an asymptotic result
/// failed its numeric spot-check. `label()` names the condition.
class ConditionViolated : public std::runtime_error {
public:
    ConditionViolated(std::string label, const std::string& what)
        : std::runtime_error(what), label_(std::move(label)) {}
    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

/// A simulated estimator series was constant, so its Pearson correlation
/// is undefined.
class DegenerateSeries : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric machinery failure (root bracket not found, quadrature refinement
/// cap exceeded).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qdcor
