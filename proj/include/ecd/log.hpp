#pragma once

#include <functional>
#include <string>

namespace ecd {

using WarningHandler = std::function<void(const std::string&)>;

// Default handler writes "warning: <msg>" to stderr.
void warn(const std::string& message);

// Returns the previous handler. Pass an empty function to restore the default.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace ecd
