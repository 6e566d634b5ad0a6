#include "becgs/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace becgs {

namespace {

constexpr char kFieldMagic[8] = {'B', 'E', 'C', 'F', 'L', 'D', '0', '1'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void dump_field(const ComplexField& phi, const ModelParams& params, const std::string& path) {
    require_physical(phi, "dump_field");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("dump_field: cannot open " + path);
    const Grid& g = phi.grid();
    os.write(kFieldMagic, sizeof(kFieldMagic));
    write_raw(os, std::uint32_t{1});
    write_raw(os, g.half_width());
    for (int a = 0; a < 3; ++a) write_raw(os, g.anisotropy()[a]);
    for (int a = 0; a < 3; ++a) write_raw(os, std::int32_t{g.counts()[a]});
    write_raw(os, params.beta);
    write_raw(os, params.lambda);
    write_raw(os, params.omega);
    for (int a = 0; a < 3; ++a) write_raw(os, params.gamma[a]);
    for (int a = 0; a < 3; ++a) write_raw(os, params.dipole[a]);
    os.write(reinterpret_cast<const char*>(phi.data()),
             static_cast<std::streamsize>(phi.size() * sizeof(Complex)));
    if (!os) throw std::runtime_error("dump_field: write failed for " + path);
}

FieldDump load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kFieldMagic, sizeof(magic)) != 0)
        throw std::runtime_error("load_field: bad magic in " + path);
    std::uint32_t version = 0;
    read_raw(is, version);
    if (version != 1) throw std::runtime_error("load_field: unsupported version");

    double L;
    Vec3 xi;
    Vec3i n;
    read_raw(is, L);
    for (int a = 0; a < 3; ++a) read_raw(is, xi[a]);
    for (int a = 0; a < 3; ++a) {
        std::int32_t c;
        read_raw(is, c);
        n[a] = c;
    }
    FieldDump out{ComplexField(Grid::make(L, xi, n)), ModelParams{}};
    read_raw(is, out.params.beta);
    read_raw(is, out.params.lambda);
    read_raw(is, out.params.omega);
    for (int a = 0; a < 3; ++a) read_raw(is, out.params.gamma[a]);
    Vec3 d;
    for (int a = 0; a < 3; ++a) read_raw(is, d[a]);
    out.params.dipole = DipoleOrientation(d);
    is.read(reinterpret_cast<char*>(out.field.data()),
            static_cast<std::streamsize>(out.field.size() * sizeof(Complex)));
    if (!is) throw std::runtime_error("load_field: truncated file " + path);
    return out;
}

SliceSpec parse_slice_spec(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("slice spec must look like z=0, got '" + text + "'");
    std::string axis = text.substr(0, eq);
    axis.erase(0, axis.find_first_not_of(" \t"));
    axis.erase(axis.find_last_not_of(" \t") + 1);
    SliceSpec spec;
    if (axis == "x")
        spec.axis = 0;
    else if (axis == "y")
        spec.axis = 1;
    else if (axis == "z")
        spec.axis = 2;
    else
        throw std::invalid_argument("slice axis must be x, y or z, got '" + axis + "'");
    spec.coordinate = std::stod(text.substr(eq + 1));
    return spec;
}

std::vector<SliceRow> export_slice(const ComplexField& phi, const SliceSpec& spec,
                                   int* plane_index) {
    require_physical(phi, "export_slice");
    const Grid& g = phi.grid();
    if (std::abs(spec.coordinate) > g.extent(spec.axis))
        throw std::invalid_argument("export_slice: plane lies outside the domain");
    // nearest grid plane
    const double h = g.mesh()[spec.axis];
    int idx = static_cast<int>(std::lround((spec.coordinate + g.extent(spec.axis)) / h));
    idx = std::min(std::max(idx, 0), g.counts()[spec.axis] - 1);
    if (plane_index) *plane_index = idx;

    const int a1 = spec.axis == 0 ? 1 : 0;
    const int a2 = spec.axis == 2 ? 1 : 2;
    std::vector<SliceRow> rows;
    rows.reserve(static_cast<std::size_t>(g.counts()[a1]) * g.counts()[a2]);
    Vec3i j{};
    j[spec.axis] = idx;
    for (int i1 = 0; i1 < g.counts()[a1]; ++i1) {
        j[a1] = i1;
        for (int i2 = 0; i2 < g.counts()[a2]; ++i2) {
            j[a2] = i2;
            const double den = std::norm(phi[g.index(j[0], j[1], j[2])]);
            rows.push_back({g.coord(a1, i1), g.coord(a2, i2), den});
        }
    }
    return rows;
}

void write_slice_csv(const ComplexField& phi, const SliceSpec& spec, const std::string& path) {
    int plane_index = 0;
    const auto rows = export_slice(phi, spec, &plane_index);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_slice_csv: cannot open " + path);
    const char* names[3] = {"x", "y", "z"};
    const double actual = phi.grid().coord(spec.axis, plane_index);
    os << "# plane " << names[spec.axis] << " = " << actual << " (index " << plane_index << ")\n";
    const int a1 = spec.axis == 0 ? 1 : 0;
    const int a2 = spec.axis == 2 ? 1 : 2;
    os << names[a1] << "," << names[a2] << ",density\n";
    os.precision(17);
    for (const auto& r : rows) os << r.coord1 << "," << r.coord2 << "," << r.density << "\n";
}

void write_diagnostics_csv(const std::vector<DiagnosticsRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_diagnostics_csv: cannot open " + path);
    os << "guess,level,n,energy,mu,residual,step,wall_s\n";
    os.precision(17);
    for (const auto& r : rows)
        os << r.guess << "," << r.level << "," << r.record.n << "," << r.record.energy << ","
           << r.record.mu << "," << r.record.residual_norm << "," << r.record.step << ","
           << r.record.wall_seconds << "\n";
}

}  // namespace becgs
