#pragma once

#include <stdexcept>
#include <string>

namespace sheetlint {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A formula (or address) failed to parse. The message names the offending
/// token and its character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// A workbook document violates the canonical schema. The message carries
/// sheet/cell context where available.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A reference could not be resolved (index underflow, unknown worksheet, ...).
class RefError : public Error {
public:
    using Error::Error;
};

} // namespace sheetlint
