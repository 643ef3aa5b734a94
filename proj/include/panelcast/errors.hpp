#pragma once

#include <stdexcept>
#include <string>

namespace panelcast {

/// Base of every error the library throws. `code()` is a stable,
/// machine-readable name used by the CLI and HTTP layers.
class Error : public std::runtime_error {
public:
	Error(std::string code, const std::string& message)
		: std::runtime_error(message), code_(std::move(code)) {}

	const std::string& code() const noexcept { return code_; }

private:
	std::string code_;
};

#define PANELCAST_DEFINE_ERROR(Name)                                      \
	class Name : public Error {                                           \
	public:                                                               \
		explicit Name(const std::string& message) : Error(#Name, message) {} \
	}

PANELCAST_DEFINE_ERROR(GapError);
PANELCAST_DEFINE_ERROR(ValueError);
PANELCAST_DEFINE_ERROR(DuplicateError);
PANELCAST_DEFINE_ERROR(LengthError);
PANELCAST_DEFINE_ERROR(DegenerateSeriesError);
PANELCAST_DEFINE_ERROR(NumericalError);
PANELCAST_DEFINE_ERROR(EmptyTrainingError);
PANELCAST_DEFINE_ERROR(NotFittedError);
PANELCAST_DEFINE_ERROR(ShapeError);
PANELCAST_DEFINE_ERROR(DegenerateScaleError);
PANELCAST_DEFINE_ERROR(ConfigError);
PANELCAST_DEFINE_ERROR(NoExogenousError);
PANELCAST_DEFINE_ERROR(SchemaError);

#undef PANELCAST_DEFINE_ERROR

} // namespace panelcast
