#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hyperinv/matrix.hpp"
#include "hyperinv/sparse.hpp"

namespace hyperinv {
namespace mmio {

enum class Symmetry { general, symmetric, hermitian };

struct Header {
    bool coordinate = false;   // else array
    bool complex_field = false;
    Symmetry symmetry = Symmetry::general;
};

namespace detail {

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline Header parse_header_line(const std::string& line) {
    std::istringstream ss(line);
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
        throw io_error("MatrixMarket: bad banner line");
    Header h;
    format = lower(format);
    if (format == "coordinate")
        h.coordinate = true;
    else if (format == "array")
        h.coordinate = false;
    else
        throw io_error("MatrixMarket: unsupported format '" + format + "'");
    field = lower(field);
    if (field == "real" || field == "integer")
        h.complex_field = false;
    else if (field == "complex")
        h.complex_field = true;
    else
        throw io_error("MatrixMarket: unsupported field '" + field + "'");
    symmetry = lower(symmetry);
    if (symmetry == "general")
        h.symmetry = Symmetry::general;
    else if (symmetry == "symmetric")
        h.symmetry = Symmetry::symmetric;
    else if (symmetry == "hermitian")
        h.symmetry = Symmetry::hermitian;
    else
        throw io_error("MatrixMarket: unsupported symmetry '" + symmetry + "'");
    return h;
}

inline bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos) continue;
        if (line[p] == '%') continue;
        return true;
    }
    return false;
}

inline double parse_double(const std::string& tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw io_error("MatrixMarket: bad numeric token '" + tok + "'");
    return v;
}

// Shortest decimal rendering that round-trips the double bit-exactly.
inline std::string render_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

template <class T>
struct value_io;

template <>
struct value_io<double> {
    static constexpr const char* field = "real";
    static constexpr int tokens = 1;
    static double read(const std::string& re, const std::string&) { return parse_double(re); }
    static void write(std::ostream& os, double v) { os << render_double(v); }
};

template <>
struct value_io<std::complex<double>> {
    static constexpr const char* field = "complex";
    static constexpr int tokens = 2;
    static std::complex<double> read(const std::string& re, const std::string& im) {
        return {parse_double(re), parse_double(im)};
    }
    static void write(std::ostream& os, const std::complex<double>& v) {
        os << render_double(v.real()) << ' ' << render_double(v.imag());
    }
};

template <>
struct value_io<mp_real> {
    static constexpr const char* field = "real";
    static constexpr int tokens = 1;
    static mp_real read(const std::string& re, const std::string&) {
        try {
            return mp_real(re);
        } catch (...) {
            throw io_error("MatrixMarket: bad numeric token '" + re + "'");
        }
    }
    static void write(std::ostream& os, const mp_real& v) {
        os << v.str(static_cast<unsigned>(mp_real::default_precision()) + 3,
                    std::ios_base::scientific);
    }
};

template <class T>
T read_value(std::istringstream& ss, bool file_is_complex) {
    std::string re, im;
    if (!(ss >> re)) throw io_error("MatrixMarket: missing value");
    if (file_is_complex) {
        if constexpr (!scalar_traits<T>::is_complex) {
            throw io_error("MatrixMarket: complex field requires a complex scalar type");
        } else {
            if (!(ss >> im)) throw io_error("MatrixMarket: missing imaginary part");
            return value_io<T>::read(re, im);
        }
    }
    if constexpr (scalar_traits<T>::is_complex)
        return T(parse_double(re), 0.0);
    else
        return value_io<T>::read(re, im);
}

template <class T>
T mirror(const T& v, Symmetry sym) {
    return sym == Symmetry::hermitian ? scalar_conj(v) : v;
}

}  // namespace detail

inline Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw io_error("MatrixMarket: empty stream");
    return detail::parse_header_line(line);
}

/// Header of a file without consuming it (for format dispatch).
inline Header peek_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    return read_header(in);
}

template <class T>
DenseMatrix<T> read_dense(std::istream& in) {
    const Header h = read_header(in);
    if (h.coordinate)
        throw io_error("MatrixMarket: expected array format for a dense matrix");
    std::string line;
    if (!detail::next_content_line(in, line)) throw io_error("MatrixMarket: missing size line");
    std::istringstream ss(line);
    int m = 0, n = 0;
    if (!(ss >> m >> n) || m <= 0 || n <= 0) throw io_error("MatrixMarket: bad size line");
    DenseMatrix<T> out(m, n);
    // array data is column-major; symmetric/hermitian files store the lower triangle
    auto read_one = [&]() {
        if (!detail::next_content_line(in, line)) throw io_error("MatrixMarket: too few values");
        std::istringstream vs(line);
        return detail::read_value<T>(vs, h.complex_field);
    };
    if (h.symmetry == Symmetry::general) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i) out(i, j) = read_one();
    } else {
        if (m != n) throw io_error("MatrixMarket: symmetric matrix must be square");
        for (int j = 0; j < n; ++j)
            for (int i = j; i < m; ++i) {
                const T v = read_one();
                out(i, j) = v;
                if (i != j) out(j, i) = detail::mirror(v, h.symmetry);
            }
    }
    return out;
}

template <class T>
SparseMatrix<T> read_sparse(std::istream& in) {
    const Header h = read_header(in);
    if (!h.coordinate)
        throw io_error("MatrixMarket: expected coordinate format for a sparse matrix");
    std::string line;
    if (!detail::next_content_line(in, line)) throw io_error("MatrixMarket: missing size line");
    std::istringstream ss(line);
    long long m = 0, n = 0, nnz = 0;
    if (!(ss >> m >> n >> nnz) || m <= 0 || n <= 0 || nnz < 0)
        throw io_error("MatrixMarket: bad size line");
    std::vector<std::tuple<int, int, T>> trip;
    trip.reserve(static_cast<std::size_t>(nnz) * (h.symmetry == Symmetry::general ? 1 : 2));
    for (long long e = 0; e < nnz; ++e) {
        if (!detail::next_content_line(in, line))
            throw io_error("MatrixMarket: too few entries");
        std::istringstream es(line);
        int i = 0, j = 0;
        if (!(es >> i >> j)) throw io_error("MatrixMarket: bad entry line");
        const T v = detail::read_value<T>(es, h.complex_field);
        trip.emplace_back(i - 1, j - 1, v);
        if (h.symmetry != Symmetry::general && i != j)
            trip.emplace_back(j - 1, i - 1, detail::mirror(v, h.symmetry));
    }
    return SparseMatrix<T>::from_triplets(static_cast<int>(m), static_cast<int>(n),
                                          std::move(trip));
}

template <class T>
std::vector<T> read_vector(std::istream& in) {
    auto m = read_dense<T>(in);
    if (m.cols() != 1) throw io_error("MatrixMarket: expected a one-column array vector");
    return m.entries();
}

template <class T>
void write_dense(std::ostream& os, const DenseMatrix<T>& a) {
    os << "%%MatrixMarket matrix array " << detail::value_io<T>::field << " general\n";
    os << a.rows() << ' ' << a.cols() << '\n';
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i) {
            detail::value_io<T>::write(os, a(i, j));
            os << '\n';
        }
}

template <class T>
void write_sparse(std::ostream& os, const SparseMatrix<T>& a) {
    os << "%%MatrixMarket matrix coordinate " << detail::value_io<T>::field << " general\n";
    os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    const auto& off = a.row_offsets();
    for (int i = 0; i < a.rows(); ++i)
        for (int k = off[i]; k < off[i + 1]; ++k) {
            os << (i + 1) << ' ' << (a.col_indices()[k] + 1) << ' ';
            detail::value_io<T>::write(os, a.values()[k]);
            os << '\n';
        }
}

template <class T>
void write_vector(std::ostream& os, const std::vector<T>& v) {
    os << "%%MatrixMarket matrix array " << detail::value_io<T>::field << " general\n";
    os << v.size() << " 1\n";
    for (const auto& e : v) {
        detail::value_io<T>::write(os, e);
        os << '\n';
    }
}

template <class T>
DenseMatrix<T> read_dense_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    return read_dense<T>(in);
}

template <class T>
SparseMatrix<T> read_sparse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    return read_sparse<T>(in);
}

template <class T>
void write_dense_file(const std::string& path, const DenseMatrix<T>& a) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    write_dense(os, a);
}

template <class T>
void write_sparse_file(const std::string& path, const SparseMatrix<T>& a) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    write_sparse(os, a);
}

}  // namespace mmio
}  // namespace hyperinv
