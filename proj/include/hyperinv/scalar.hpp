#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

namespace hyperinv {

/// Arbitrary-precision real with runtime-configurable decimal digits.
using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

/// Sets the default decimal precision for subsequently constructed mp_real
/// values on this thread and restores the previous one on destruction.
class precision_guard {
  public:
    explicit precision_guard(unsigned digits10)
        : previous_(mp_real::default_precision()) {
        mp_real::default_precision(digits10);
    }
    ~precision_guard() { mp_real::default_precision(previous_); }
    precision_guard(const precision_guard&) = delete;
    precision_guard& operator=(const precision_guard&) = delete;

  private:
    unsigned previous_;
};

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    using real_type = double;
    static constexpr bool is_complex = false;
    static double conj(double x) { return x; }
    static double real(double x) { return x; }
    static double imag(double) { return 0.0; }
    static double abs(double x) { return std::abs(x); }
    static bool finite(double x) { return std::isfinite(x); }
    static double epsilon() { return std::numeric_limits<double>::epsilon(); }
    static double sqrt(double x) { return std::sqrt(x); }
    static std::string name() { return "double"; }
};

template <>
struct scalar_traits<std::complex<double>> {
    using real_type = double;
    static constexpr bool is_complex = true;
    static std::complex<double> conj(const std::complex<double>& x) { return std::conj(x); }
    static double real(const std::complex<double>& x) { return x.real(); }
    static double imag(const std::complex<double>& x) { return x.imag(); }
    static double abs(const std::complex<double>& x) { return std::abs(x); }
    static bool finite(const std::complex<double>& x) {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    }
    static double epsilon() { return std::numeric_limits<double>::epsilon(); }
    static std::string name() { return "complex<double>"; }
};

template <>
struct scalar_traits<mp_real> {
    using real_type = mp_real;
    static constexpr bool is_complex = false;
    static mp_real conj(const mp_real& x) { return x; }
    static mp_real real(const mp_real& x) { return x; }
    static mp_real imag(const mp_real&) { return mp_real(0); }
    static mp_real abs(const mp_real& x) { return boost::multiprecision::abs(x); }
    static bool finite(const mp_real& x) {
        return !boost::multiprecision::isnan(x) && !boost::multiprecision::isinf(x);
    }
    // One unit in the last decimal place of the current working precision.
    static mp_real epsilon() {
        return boost::multiprecision::pow(mp_real(10),
                                          1 - static_cast<long>(mp_real::default_precision()));
    }
    static mp_real sqrt(const mp_real& x) { return boost::multiprecision::sqrt(x); }
    static std::string name() {
        return "mpfr(" + std::to_string(mp_real::default_precision()) + ")";
    }
};

template <class T>
using real_t = typename scalar_traits<T>::real_type;

/// abs() usable in generic code for both real and complex scalars.
template <class T>
real_t<T> scalar_abs(const T& x) {
    return scalar_traits<T>::abs(x);
}

template <class T>
T scalar_conj(const T& x) {
    return scalar_traits<T>::conj(x);
}

template <class T>
bool scalar_finite(const T& x) {
    return scalar_traits<T>::finite(x);
}

inline double to_double(double x) { return x; }
inline double to_double(const mp_real& x) { return static_cast<double>(x); }

}  // namespace hyperinv
