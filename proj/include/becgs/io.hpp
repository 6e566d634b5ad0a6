#pragma once

#include <string>
#include <vector>

#include "becgs/model.hpp"
#include "becgs/multigrid.hpp"

namespace becgs {

/// Binary state dump: magic, version, (L, xi, N), model parameters, then
/// interleaved re/im doubles in index order. Bit-exact round trip.
void dump_field(const ComplexField& phi, const ModelParams& params, const std::string& path);

struct FieldDump {
    ComplexField field;
    ModelParams params;
};
FieldDump load_field(const std::string& path);

struct SliceSpec {
    int axis = 2;        // 0=x, 1=y, 2=z
    double coordinate = 0.0;
};

/// Parses plane specs of the form "z=0", "y=1.5".
SliceSpec parse_slice_spec(const std::string& text);

struct SliceRow {
    double coord1;
    double coord2;
    double density;
};

/// Density slice through the nearest grid plane; rows run row-major in the
/// first coordinate. plane_index receives the grid index actually used.
std::vector<SliceRow> export_slice(const ComplexField& phi, const SliceSpec& spec,
                                   int* plane_index = nullptr);

void write_slice_csv(const ComplexField& phi, const SliceSpec& spec, const std::string& path);

struct DiagnosticsRow {
    std::string guess;
    int level;
    IterationRecord record;
};
void write_diagnostics_csv(const std::vector<DiagnosticsRow>& rows, const std::string& path);

}  // namespace becgs
