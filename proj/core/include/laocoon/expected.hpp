#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace laocoon {

// Minimal value-or-error carrier (std::expected is C++23).
template <typename T, typename E>
class Expected {
 public:
  Expected(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Expected(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool has_value() const { return v_.index() == 0; }
  explicit operator bool() const { return has_value(); }

  const T& value() const& {
    if (!has_value()) throw std::logic_error("Expected: no value");
    return std::get<0>(v_);
  }
  T&& value() && {
    if (!has_value()) throw std::logic_error("Expected: no value");
    return std::get<0>(std::move(v_));
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const E& error() const {
    if (has_value()) throw std::logic_error("Expected: no error");
    return std::get<1>(v_);
  }

 private:
  std::variant<T, E> v_;
};

}  // namespace laocoon
