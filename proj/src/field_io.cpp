#include "qma/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qma {

namespace {

constexpr const char* kMagic = "qma-field 1";

void expect_key(std::istream& is, const std::string& key, std::string& rest) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("field read: truncated header");
    if (line.rfind(key, 0) != 0)
        throw std::runtime_error("field read: expected header key '" + key + "', got '" + line + "'");
    rest = line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field(std::ostream& os, const ScalarField& f) {
    const SpectralGrid& g = f.grid();
    os << kMagic << "\n";
    os << "n " << g.n << "\n";
    os << "N " << g.N << "\n";
    os << "active";
    for (int c : g.active) os << " " << c;
    os << "\n";
    os << "count " << f.size() << "\n";
    os << "data\n";
    os.write(reinterpret_cast<const char*>(f.values().data()),
             static_cast<std::streamsize>(f.size() * sizeof(double)));
}

void write_field_file(const std::string& path, const ScalarField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_field(os, f);
}

ScalarField read_field(std::istream& is) {
    std::string rest;
    std::string magic;
    if (!std::getline(is, magic) || magic != kMagic)
        throw std::runtime_error("field read: bad magic line");
    expect_key(is, "n", rest);
    const int n = std::stoi(rest);
    expect_key(is, "N", rest);
    const int N = std::stoi(rest);
    expect_key(is, "active", rest);
    std::vector<int> active;
    {
        std::istringstream ss(rest);
        int c;
        while (ss >> c) active.push_back(c);
    }
    expect_key(is, "count", rest);
    const std::size_t count = std::stoull(rest);
    expect_key(is, "data", rest);

    SpectralGrid grid(n, active, N);
    if (grid.num_points() != count) throw std::runtime_error("field read: count mismatch");
    ScalarField f(grid);
    is.read(reinterpret_cast<char*>(f.values().data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
        throw std::runtime_error("field read: truncated data");
    return f;
}

ScalarField read_field_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return read_field(is);
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
    const SpectralGrid& g = f.grid();
    for (int c : g.active) os << "x" << (c + 1) << ",";
    os << "value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::vector<double> x = g.point(i);
        for (int c : g.active) os << format_double(x[c]) << ",";
        os << format_double(f[i]) << "\n";
    }
}

void write_field_csv_file(const std::string& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_field_csv(os, f);
}

}  // namespace qma
