#ifndef OPTW_ERROR_HPP
#define OPTW_ERROR_HPP

#include <stdexcept>
#include <string>

namespace optw {

enum class ErrorCode {
    invalid_argument = 1,
    parse_error = 2,
    io_error = 3,
    domain_error = 4,
    unresolved = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

#define OPTW_REQUIRE(cond, code, msg)                       \
    do {                                                    \
        if (!(cond)) throw ::optw::Error((code), (msg));    \
    } while (0)

} // namespace optw

#endif
