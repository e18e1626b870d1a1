#include "lrdcp/error.hpp"

namespace lrdcp {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

void throw_domain(const std::string& what) { throw DomainError(what); }

}  // namespace lrdcp
