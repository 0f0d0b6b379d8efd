#pragma once

#include <stdexcept>
#include <string>

namespace rushlarsen {

/// A multistep step was requested without enough (or inconsistent) history.
class HistoryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A model parameter document failed validation. `field()` names the offending entry.
class LoadError : public std::runtime_error {
 public:
  LoadError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rushlarsen
