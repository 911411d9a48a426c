#include "isolattice/matrix.hpp"

namespace isolattice {

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
    return r;
}

IntMatrix to_integer(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integral(m(i, j))) {
                throw InvalidArgument("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") = " + to_string(m(i, j)) + " is not an integer");
            }
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

bool is_integral(const RatMatrix& m) {
    for (const auto& x : m.data())
        if (!is_integral(x)) return false;
    return true;
}

Integer denominator(const RatMatrix& m) {
    Integer d = 1;
    for (const auto& x : m.data()) d = lcm(d, x.get_den());
    return d;
}

template <typename T>
static bool antisymmetric(const Matrix<T>& m) {
    if (!m.is_square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (m(i, j) + m(j, i) != 0) return false;
    return true;
}

bool is_antisymmetric(const RatMatrix& m) { return antisymmetric(m); }
bool is_antisymmetric(const IntMatrix& m) { return antisymmetric(m); }

template <typename T>
static std::string render(const Matrix<T>& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += to_string(m(i, j));
        }
        out += "]";
    }
    return out + "]";
}

std::string to_string(const RatMatrix& m) { return render(m); }
std::string to_string(const IntMatrix& m) { return render(m); }

}  // namespace isolattice
