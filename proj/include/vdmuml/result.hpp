#pragma once

#include <cassert>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace vdmuml {

/// Either a value or a non-empty list of errors.
template <typename T, typename E>
class Result {
public:
    Result(T value) : data_(std::move(value)) {}
    Result(std::vector<E> errors) : data_(std::move(errors)) {
        assert(!std::get<1>(data_).empty());
    }
    Result(E error) : data_(std::vector<E>{std::move(error)}) {}

    bool ok() const { return data_.index() == 0; }
    explicit operator bool() const { return ok(); }

    const T& value() const& { return std::get<0>(data_); }
    T& value() & { return std::get<0>(data_); }
    T&& value() && { return std::get<0>(std::move(data_)); }

    const T& operator*() const& { return value(); }
    const T* operator->() const { return &value(); }

    const std::vector<E>& errors() const { return std::get<1>(data_); }

private:
    std::variant<T, std::vector<E>> data_;
};

} // namespace vdmuml
