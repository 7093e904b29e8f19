#pragma once

#include "dca/geometry.hpp"

#include <complex>
#include <memory>
#include <string>
#include <string_view>

namespace dca {

/// A small complex-valued expression language over the point z = x + iy.
///
///   variables   x  y  z  i  pi
///   operators   + - * / ^   (^ with an integer exponent multiplies repeatedly)
///   functions   re im abs conj exp sin cos sqrt
///
/// Examples: "re(z^3)", "x*x - y*y", "2*im(z) + 1".
class Expression {
public:
    /// Throws Error(ParseError) with the offending column.
    static Expression parse(std::string_view text);

    [[nodiscard]] std::complex<double> operator()(Point2 z) const;
    /// Real part of the value.
    [[nodiscard]] double real(Point2 z) const { return (*this)(z).real(); }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

} // namespace dca
