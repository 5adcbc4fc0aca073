#pragma once

#include <stdexcept>
#include <string>

namespace purifier {

// Base class for all library failures. category() is a stable,
// machine-readable tag; the CLI maps it to exit diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define PURIFIER_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& message)                     \
            : Error(#Name, message) {}                                \
    }

PURIFIER_DEFINE_ERROR(InvalidDataset);
PURIFIER_DEFINE_ERROR(InvalidPartition);
PURIFIER_DEFINE_ERROR(InvalidQuantile);
PURIFIER_DEFINE_ERROR(EmptyInput);
PURIFIER_DEFINE_ERROR(AlignmentError);
PURIFIER_DEFINE_ERROR(FitError);
PURIFIER_DEFINE_ERROR(DimensionError);
PURIFIER_DEFINE_ERROR(DivergenceUndefined);
PURIFIER_DEFINE_ERROR(UndefinedMetric);
PURIFIER_DEFINE_ERROR(ConfigError);

#undef PURIFIER_DEFINE_ERROR

}  // namespace purifier
