#include "dea/error.hpp"

#include <utility>

namespace dea {

ValidationError::ValidationError(const std::string& message, std::size_t row, std::size_t column)
    : Error(message), row_(row), column_(column) {}

SolverLimitError::SolverLimitError(const std::string& message, std::string dmu, std::size_t stage)
    : Error(message), dmu_(std::move(dmu)), stage_(stage) {}

}  // namespace dea
