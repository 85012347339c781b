#include "leray/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "leray/operators.hpp"
#include "leray/transform.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace leray {

namespace {

constexpr char kMagic[4] = {'L', 'R', 'A', 'Y'};

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const VelocityField& u, double time) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_checkpoint: cannot open " + path);
    const Grid& g = u.grid();
    os.write(kMagic, 4);
    put_u32(os, kCheckpointVersion);
    put_u32(os, static_cast<std::uint32_t>(g.dim));
    put_u32(os, static_cast<std::uint32_t>(g.n));
    put_f64(os, g.length);
    put_u32(os, static_cast<std::uint32_t>(u.comp.size()));
    put_f64(os, time);
    for (const SpectralField& f : u.comp)
        os.write(reinterpret_cast<const char*>(f.c.data()),
                 static_cast<std::streamsize>(f.c.size() * sizeof(cplx)));
    if (!os) throw std::runtime_error("write_checkpoint: write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_checkpoint: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_checkpoint: bad magic in " + path);
    const std::uint32_t version = get_u32(is);
    if (version != kCheckpointVersion)
        throw std::runtime_error("read_checkpoint: unsupported version in " + path);
    const int dim = static_cast<int>(get_u32(is));
    const int n = static_cast<int>(get_u32(is));
    const double length = get_f64(is);
    const int ncomp = static_cast<int>(get_u32(is));
    const double time = get_f64(is);
    Grid g(dim, n, length);
    if (ncomp != dim) throw std::runtime_error("read_checkpoint: component count != dim");
    Checkpoint ck;
    ck.time = time;
    ck.field = VelocityField(g);
    for (SpectralField& f : ck.field.comp) {
        is.read(reinterpret_cast<char*>(f.c.data()),
                static_cast<std::streamsize>(f.c.size() * sizeof(cplx)));
        if (!is) throw std::runtime_error("read_checkpoint: truncated payload in " + path);
    }
    char extra;
    if (is.read(&extra, 1)) throw std::runtime_error("read_checkpoint: trailing bytes in " + path);
    ck.field.divergence_free = divergence_certificate(ck.field) <= 1e-10;
    return ck;
}

std::vector<std::string> audit_checkpoint(const std::string& path) {
    std::vector<std::string> problems;
    Checkpoint ck;
    try {
        ck = read_checkpoint(path);
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
        return problems;
    }
    for (std::size_t i = 0; i < ck.field.comp.size(); ++i) {
        for (const cplx& z : ck.field.comp[i].c) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                problems.push_back("component " + std::to_string(i) + ": non-finite coefficient");
                break;
            }
        }
        const double hd = hermitian_defect(ck.field.comp[i]);
        if (hd > 1e-10)
            problems.push_back("component " + std::to_string(i) +
                               ": Hermitian symmetry violated (defect " + std::to_string(hd) + ")");
    }
    return problems;
}

}  // namespace leray
