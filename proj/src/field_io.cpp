#include "wbd/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wbd/error.hpp"

namespace wbd::io {

namespace {

constexpr char kMagic[4] = {'W', 'B', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T value) {
    static_assert(std::endian::native == std::endian::little, "little-endian host required");
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    out.write(bytes, sizeof(T));
}

template <class T>
T get(std::istream& in) {
    char bytes[sizeof(T)];
    if (!in.read(bytes, sizeof(T))) throw DomainError("read_binary: truncated stream");
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_binary(std::ostream& out, const SpectralField& field) {
    const auto& g = field.grid();
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
    put<double>(out, g.length());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.components()));
    for (const auto& z : field.coeffs()) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
}

SpectralField read_binary(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw DomainError("read_binary: bad magic");
    if (get<std::uint32_t>(in) != kVersion) throw DomainError("read_binary: unsupported version");
    const auto d = static_cast<int>(get<std::uint32_t>(in));
    const auto n = static_cast<int>(get<std::uint32_t>(in));
    const double length = get<double>(in);
    const auto comps = static_cast<int>(get<std::uint32_t>(in));
    SpectralField f(GridSpec(d, n, length), comps);
    for (auto& z : f.coeffs()) {
        const double re = get<double>(in);
        const double im = get<double>(in);
        z = cplx(re, im);
    }
    return f;
}

void write_csv(std::ostream& out, const SpectralField& field) {
    const auto& g = field.grid();
    out << "# d=" << g.dim() << " n=" << g.n() << " length=" << fmt17(g.length())
        << " components=" << field.components() << "\n";
    out << (g.dim() == 1 ? "component,k1,re,im\n" : "component,k1,k2,re,im\n");
    for (int c = 0; c < field.components(); ++c) {
        auto v = field.component(c);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto k = g.wavevector(i);
            out << c << ',' << k[0];
            if (g.dim() == 2) out << ',' << k[1];
            out << ',' << fmt17(v[i].real()) << ',' << fmt17(v[i].imag()) << '\n';
        }
    }
}

SpectralField read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("# "))
        throw DomainError("read_csv: missing grid line");
    int d = 0, n = 0, comps = 0;
    double length = 0.0;
    if (std::sscanf(line.c_str(), "# d=%d n=%d length=%lf components=%d", &d, &n, &length, &comps) != 4)
        throw DomainError("read_csv: malformed grid line");
    SpectralField f(GridSpec(d, n, length), comps);
    std::getline(in, line);  // column header
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != d + 3) throw DomainError("read_csv: bad row");
        const int c = static_cast<int>(vals[0]);
        std::array<int, 2> k{static_cast<int>(vals[1]), d == 2 ? static_cast<int>(vals[2]) : 0};
        f.at(k, c) = cplx(vals[d + 1], vals[d + 2]);
        ++rows;
    }
    if (rows != f.coeffs().size()) throw DomainError("read_csv: row count does not match grid");
    return f;
}

void save(const std::string& path, const SpectralField& field) {
    const bool csv = path.ends_with(".csv");
    std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
    if (!out) throw DomainError("cannot open " + path);
    if (csv) {
        write_csv(out, field);
    } else {
        write_binary(out, field);
    }
}

SpectralField load(const std::string& path) {
    const bool csv = path.ends_with(".csv");
    std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
    if (!in) throw DomainError("cannot open " + path);
    return csv ? read_csv(in) : read_binary(in);
}

}  // namespace wbd::io
