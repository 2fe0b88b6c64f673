#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>

namespace nowcast {

// Base of every error thrown by the library. Messages carry enough context
// (file, line, month, id) to be shown to a user unchanged.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// File missing or unreadable.
class IoError : public Error {
public:
  using Error::Error;
};

// Malformed input: bad manifest line, bad CSV row, invalid UTF-8, bad month.
class ParseError : public Error {
public:
  using Error::Error;
};

// Input is well-formed but violates a contract (duplicate id, empty lexicon,
// gap in a monthly series, constant regressor, ...).
class DataError : public Error {
public:
  using Error::Error;
};

// A numerical procedure could not produce a result (singular design, ...).
class NumericError : public Error {
public:
  using Error::Error;
};

// Receives non-fatal warnings (dropped documents, overlapping lexicons, ...).
using WarningSink = std::function<void(const std::string&)>;

inline void warn_stderr(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

} // namespace nowcast
