#pragma once

#include <stdexcept>
#include <string>

namespace seccorpus {

// Library-level failure with a short machine-readable reason as the message
// prefix, e.g. "degenerate_labels: training data contains a single class".
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seccorpus
