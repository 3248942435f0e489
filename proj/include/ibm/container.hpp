#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ibm/boundary_ops.hpp"
#include "ibm/inversion.hpp"
#include "ibm/scattering.hpp"
#include "ibm/volume_oracle.hpp"

namespace ibm {

using ojson = nlohmann::ordered_json;

enum class DType { f64, c128 };

// "IBM1" | u32 LE header length | JSON header | little-endian payload (complex as re, im)
struct Container {
    std::string kind;
    std::vector<std::uint64_t> shape;
    DType dtype = DType::f64;
    ojson meta = ojson::object();
    std::vector<double> f64;
    std::vector<cplx> c128;

    std::uint64_t count() const;
};

std::string encode_container(const Container& c);
Container decode_container(const std::string& bytes);
void save_container(const std::string& path, const Container& c);
Container load_container(const std::string& path);

Container to_container(const BoundaryOperator& op);
BoundaryOperator operator_from_container(const Container& c);

Container to_container(const ScatteringDataset& d);
ScatteringDataset dataset_from_container(const Container& c);

// volume-node values plus boundary trace and normal trace (shape [N + 2n])
Container to_container(const FieldSolution& s);
struct StoredField {
    FieldKind kind = FieldKind::classical;
    CVector values, trace, normal_trace;
    CVec2 k, l;
    double energy = 0, alpha = 0, residual = 0, condition = 1;
    int n_r = 0, n_theta = 0, n_boundary = 0;
    double radius = 1;
};
StoredField field_from_container(const Container& c);

Container to_container(const ReconstructedPotential& p);
ReconstructedPotential potential_from_container(const Container& c);

// x, reconstruction[, reference] along the y = 0 row
void write_slice_csv(const std::string& path, const ReconstructedPotential& p,
                     const std::vector<double>* reference = nullptr);

}  // namespace ibm
