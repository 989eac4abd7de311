#ifndef ENVERIFY_ERRORS_H
#define ENVERIFY_ERRORS_H

#include <stdexcept>
#include <string>

namespace enverify {

/// A parameter lies outside the domain of the requested quantity
/// (fidelity below the Werner range, too many subspace rounds, ...).
class DomainError : public std::domain_error {
   public:
    explicit DomainError(const std::string &what) : std::domain_error(what) {
    }
};

/// The request is well-formed but exceeds a configured capacity
/// (enumeration size, dense amplitude cap, search bound).
class ResourceError : public std::runtime_error {
   public:
    explicit ResourceError(const std::string &what) : std::runtime_error(what) {
    }
};

}  // namespace enverify

#endif
