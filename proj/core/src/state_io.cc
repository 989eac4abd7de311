#include "enverify/state_io.h"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "enverify/errors.h"

namespace enverify {

namespace {

constexpr char kMagic[4] = {'E', 'N', 'V', 'S'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream &out, uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; i++) {
        b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    out.write(b, 4);
}

void put_f64(std::ostream &out, double x) {
    uint64_t v = std::bit_cast<uint64_t>(x);
    char b[8];
    for (int i = 0; i < 8; i++) {
        b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    out.write(b, 8);
}

uint64_t get_bytes(std::istream &in, int count) {
    unsigned char b[8] = {};
    if (!in.read(reinterpret_cast<char *>(b), count)) {
        throw DomainError("state dump truncated");
    }
    uint64_t v = 0;
    for (int i = count - 1; i >= 0; i--) {
        v = (v << 8) | b[i];
    }
    return v;
}

void put_header(std::ostream &out, DumpKind kind, const Layout &layout) {
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<uint32_t>(kind));
    put_u32(out, static_cast<uint32_t>(layout.size()));
    for (const auto &s : layout) {
        put_u32(out, static_cast<uint32_t>(s.dim));
    }
}

}  // namespace

void write_state(std::ostream &out, const StateVector &state) {
    put_header(out, DumpKind::Vector, state.layout());
    for (const auto &a : state.amplitudes()) {
        put_f64(out, a.real());
        put_f64(out, a.imag());
    }
}

void write_density(std::ostream &out, const Layout &layout, const Eigen::MatrixXcd &rho) {
    const auto n = static_cast<Eigen::Index>(layout_size(layout));
    if (rho.rows() != n || rho.cols() != n) {
        throw DomainError("density matrix does not match the layout");
    }
    put_header(out, DumpKind::Density, layout);
    for (Eigen::Index r = 0; r < n; r++) {
        for (Eigen::Index c = 0; c < n; c++) {
            put_f64(out, rho(r, c).real());
            put_f64(out, rho(r, c).imag());
        }
    }
}

StateDump read_state(std::istream &in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw DomainError("not a state dump");
    }
    if (get_bytes(in, 4) != kVersion) {
        throw DomainError("unsupported state dump version");
    }
    StateDump dump;
    uint64_t kind = get_bytes(in, 4);
    if (kind > 1) {
        throw DomainError("unknown state dump kind");
    }
    dump.kind = static_cast<DumpKind>(kind);
    uint64_t count = get_bytes(in, 4);
    size_t n = 1;
    for (uint64_t i = 0; i < count; i++) {
        auto d = static_cast<uint32_t>(get_bytes(in, 4));
        if (d == 0) {
            throw DomainError("zero subsystem dimension in state dump");
        }
        dump.dims.push_back(d);
        n *= d;
        if (n > kMaxDenseAmplitudes) {
            throw ResourceError("state dump exceeds 2^20 amplitudes");
        }
    }
    const size_t entries = dump.kind == DumpKind::Vector ? n : n * n;
    dump.data.reserve(entries);
    for (size_t i = 0; i < entries; i++) {
        double re = std::bit_cast<double>(get_bytes(in, 8));
        double im = std::bit_cast<double>(get_bytes(in, 8));
        dump.data.emplace_back(re, im);
    }
    return dump;
}

}  // namespace enverify
