#include "ibm/container.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ibm/errors.hpp"

namespace ibm {

namespace {

constexpr char magic[4] = {'I', 'B', 'M', '1'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_le(T v)
{
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        std::reverse(b, b + sizeof(T));
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

void put_double(std::string& out, double d)
{
    d = to_le(d);
    char b[8];
    std::memcpy(b, &d, 8);
    out.append(b, 8);
}

double get_double(const char* p)
{
    double d;
    std::memcpy(&d, p, 8);
    return to_le(d);
}

const char* dtype_name(DType t) { return t == DType::f64 ? "f64" : "c128"; }
std::size_t dtype_size(DType t) { return t == DType::f64 ? 8 : 16; }

ojson domain_meta(double radius) { return ojson{{"type", "disk"}, {"radius", radius}}; }

void expect_kind(const Container& c, const std::string& kind, DType t)
{
    require(c.kind == kind, ErrorKind::config, "container holds '" + c.kind + "', expected '" + kind + "'");
    require(c.dtype == t, ErrorKind::shape_mismatch, "container dtype does not match kind " + kind);
}

template <class T>
T meta_get(const ojson& m, const char* key)
{
    require(m.contains(key), ErrorKind::io, std::string("container meta lacks '") + key + "'");
    try {
        return m.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorKind::io, std::string("container meta field '") + key + "' has the wrong type");
    }
}

ojson cvec_json(CVec2 k) { return ojson::array({k.x.real(), k.x.imag(), k.y.real(), k.y.imag()}); }
CVec2 cvec_from(const ojson& j)
{
    require(j.is_array() && j.size() == 4, ErrorKind::io, "momentum must be [re_x, im_x, re_y, im_y]");
    return {cplx(j[0].get<double>(), j[1].get<double>()), cplx(j[2].get<double>(), j[3].get<double>())};
}

MomentumPath path_from(const std::string& s)
{
    if (s == "classical") return MomentumPath::classical;
    if (s == "faddeev") return MomentumPath::faddeev;
    if (s == "directional") return MomentumPath::directional;
    fail(ErrorKind::io, "unknown path tag '" + s + "'");
}

FieldKind field_kind_from(const std::string& s)
{
    for (FieldKind k : {FieldKind::classical, FieldKind::faddeev, FieldKind::directional, FieldKind::two_momentum,
                        FieldKind::bvp})
        if (to_string(k) == s) return k;
    fail(ErrorKind::io, "unknown field kind '" + s + "'");
}

OperatorKind operator_kind_from(const std::string& s)
{
    for (OperatorKind k : {OperatorKind::impedance_map, OperatorKind::dtn, OperatorKind::ntd, OperatorKind::phi_lambda,
                           OperatorKind::d_alpha_r})
        if (to_string(k) == s) return k;
    fail(ErrorKind::io, "unknown operator kind '" + s + "'");
}

}  // namespace

std::uint64_t Container::count() const
{
    std::uint64_t n = 1;
    for (auto s : shape) n *= s;
    return n;
}

std::string encode_container(const Container& c)
{
    std::uint64_t n = c.count();
    require(c.dtype == DType::f64 ? c.f64.size() == n : c.c128.size() == n, ErrorKind::shape_mismatch,
            "container payload does not match its shape");
    ojson h;
    h["kind"] = c.kind;
    h["shape"] = c.shape;
    h["dtype"] = dtype_name(c.dtype);
    h["order"] = "row-major";
    h["meta"] = c.meta;
    std::string header = h.dump();
    std::string out(magic, 4);
    std::uint32_t len = to_le(static_cast<std::uint32_t>(header.size()));
    char b[4];
    std::memcpy(b, &len, 4);
    out.append(b, 4);
    out += header;
    out.reserve(out.size() + n * dtype_size(c.dtype));
    if (c.dtype == DType::f64)
        for (double d : c.f64) put_double(out, d);
    else
        for (cplx z : c.c128) {
            put_double(out, z.real());
            put_double(out, z.imag());
        }
    return out;
}

Container decode_container(const std::string& bytes)
{
    require(bytes.size() >= 4, ErrorKind::truncated, "file shorter than the magic");
    require(std::memcmp(bytes.data(), magic, 4) == 0, ErrorKind::bad_magic, "not an IBM1 container (bad magic)");
    require(bytes.size() >= 8, ErrorKind::truncated, "header length missing");
    std::uint32_t len;
    std::memcpy(&len, bytes.data() + 4, 4);
    len = to_le(len);
    require(bytes.size() >= 8 + static_cast<std::size_t>(len), ErrorKind::truncated, "header truncated");
    ojson h;
    try {
        h = ojson::parse(bytes.begin() + 8, bytes.begin() + 8 + len);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::io, std::string("container header is not valid JSON: ") + e.what());
    }
    Container c;
    c.kind = meta_get<std::string>(h, "kind");
    c.shape = meta_get<std::vector<std::uint64_t>>(h, "shape");
    std::string dt = meta_get<std::string>(h, "dtype");
    require(dt == "f64" || dt == "c128", ErrorKind::io, "unknown dtype '" + dt + "'");
    c.dtype = dt == "f64" ? DType::f64 : DType::c128;
    require(meta_get<std::string>(h, "order") == "row-major", ErrorKind::io, "only row-major payloads are supported");
    if (h.contains("meta")) c.meta = h["meta"];
    std::uint64_t n = c.count();
    std::size_t need = n * dtype_size(c.dtype), have = bytes.size() - 8 - len;
    require(have >= need, ErrorKind::truncated,
            "payload truncated: " + std::to_string(have) + " of " + std::to_string(need) + " bytes");
    require(have == need, ErrorKind::shape_mismatch, "payload longer than the declared shape");
    const char* p = bytes.data() + 8 + len;
    if (c.dtype == DType::f64) {
        c.f64.resize(n);
        for (std::uint64_t i = 0; i < n; ++i) c.f64[i] = get_double(p + 8 * i);
    } else {
        c.c128.resize(n);
        for (std::uint64_t i = 0; i < n; ++i) c.c128[i] = cplx(get_double(p + 16 * i), get_double(p + 16 * i + 8));
    }
    return c;
}

void save_container(const std::string& path, const Container& c)
{
    std::string bytes = encode_container(c);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorKind::io, "cannot open '" + path + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(f), ErrorKind::io, "write to '" + path + "' failed");
}

Container load_container(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return decode_container(ss.str());
}

Container to_container(const BoundaryOperator& op)
{
    Container c;
    c.kind = "boundary_operator";
    c.dtype = DType::c128;
    int n = op.size();
    c.shape = {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(n)};
    c.meta["operator"] = to_string(op.kind);
    c.meta["alpha"] = op.alpha;
    c.meta["energy"] = op.energy;
    c.meta["delta"] = ojson::array({op.delta.real(), op.delta.imag()});
    c.meta["potential_id"] = op.potential_id;
    c.meta["domain"] = domain_meta(op.grid.radius);
    c.meta["boundary_grid"] = ojson{{"n", n}, {"rule", "trapezoid"}};
    c.c128.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.c128[static_cast<std::size_t>(i) * n + j] = op.kernel(i, j);
    return c;
}

BoundaryOperator operator_from_container(const Container& c)
{
    expect_kind(c, "boundary_operator", DType::c128);
    require(c.shape.size() == 2 && c.shape[0] == c.shape[1], ErrorKind::shape_mismatch, "operator must be square");
    int n = static_cast<int>(c.shape[0]);
    const ojson& m = c.meta;
    double R = meta_get<double>(meta_get<ojson>(m, "domain"), "radius");
    BoundaryOperator op;
    op.grid = build_boundary_grid(Domain{R}, n);
    op.kind = operator_kind_from(meta_get<std::string>(m, "operator"));
    op.alpha = meta_get<double>(m, "alpha");
    op.energy = meta_get<double>(m, "energy");
    auto d = meta_get<std::vector<double>>(m, "delta");
    require(d.size() == 2, ErrorKind::io, "delta must be [re, im]");
    op.delta = cplx(d[0], d[1]);
    op.potential_id = meta_get<std::string>(m, "potential_id");
    op.kernel.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) op.kernel(i, j) = c.c128[static_cast<std::size_t>(i) * n + j];
    return op;
}

// columns: k (4), l (4), p (2), value (2), condition, a_norm
static constexpr int dataset_columns = 14;

Container to_container(const ScatteringDataset& d)
{
    Container c;
    c.kind = "scattering_dataset";
    c.dtype = DType::f64;
    c.shape = {d.entries.size(), static_cast<std::uint64_t>(dataset_columns)};
    c.meta["energy"] = d.energy;
    c.meta["alpha"] = d.alpha;
    c.meta["provenance"] = d.provenance;
    c.meta["columns"] = {"kx_re", "kx_im", "ky_re", "ky_im", "lx_re", "lx_im", "ly_re", "ly_im",
                         "px",    "py",    "value_re", "value_im", "condition", "a_norm"};
    ojson paths = ojson::array(), gammas = ojson::array();
    for (const DatasetEntry& e : d.entries) {
        paths.push_back(to_string(e.pair.path));
        gammas.push_back(ojson::array({e.pair.gamma.x, e.pair.gamma.y}));
        const MomentumPair& q = e.pair;
        for (double x : {q.k.x.real(), q.k.x.imag(), q.k.y.real(), q.k.y.imag(), q.l.x.real(), q.l.x.imag(),
                         q.l.y.real(), q.l.y.imag(), q.p.x, q.p.y, e.value.real(), e.value.imag(), e.condition,
                         e.a_norm})
            c.f64.push_back(x);
    }
    c.meta["paths"] = paths;
    c.meta["gammas"] = gammas;
    return c;
}

ScatteringDataset dataset_from_container(const Container& c)
{
    expect_kind(c, "scattering_dataset", DType::f64);
    require(c.shape.size() == 2 && c.shape[1] == dataset_columns, ErrorKind::shape_mismatch,
            "dataset payload must be N x 14");
    ScatteringDataset d;
    d.energy = meta_get<double>(c.meta, "energy");
    d.alpha = meta_get<double>(c.meta, "alpha");
    d.provenance = meta_get<std::string>(c.meta, "provenance");
    auto paths = meta_get<std::vector<std::string>>(c.meta, "paths");
    auto gammas = meta_get<std::vector<std::vector<double>>>(c.meta, "gammas");
    std::size_t N = c.shape[0];
    require(paths.size() == N && gammas.size() == N, ErrorKind::shape_mismatch, "per-entry tags do not match rows");
    for (std::size_t i = 0; i < N; ++i) {
        const double* r = c.f64.data() + i * dataset_columns;
        DatasetEntry e;
        e.pair.k = {cplx(r[0], r[1]), cplx(r[2], r[3])};
        e.pair.l = {cplx(r[4], r[5]), cplx(r[6], r[7])};
        e.pair.p = {r[8], r[9]};
        e.value = cplx(r[10], r[11]);
        e.condition = r[12];
        e.a_norm = r[13];
        e.pair.path = path_from(paths[i]);
        require(gammas[i].size() == 2, ErrorKind::io, "gamma must be [x, y]");
        e.pair.gamma = {gammas[i][0], gammas[i][1]};
        e.pair.energy = d.energy;
        d.entries.push_back(e);
    }
    return d;
}

Container to_container(const FieldSolution& s)
{
    Container c;
    c.kind = "field";
    c.dtype = DType::c128;
    const VolumeGrid& g = *s.potential.grid;
    std::size_t N = static_cast<std::size_t>(s.values.size()), n = static_cast<std::size_t>(s.trace.size());
    c.shape = {N + 2 * n};
    c.meta["field"] = to_string(s.kind);
    c.meta["alpha"] = s.alpha;
    c.meta["energy"] = s.energy;
    c.meta["k"] = cvec_json(s.k);
    c.meta["l"] = cvec_json(s.l);
    c.meta["residual"] = s.residual;
    c.meta["condition"] = s.condition;
    c.meta["potential_id"] = s.potential.spec.id;
    c.meta["domain"] = domain_meta(g.radius);
    c.meta["volume_grid"] = ojson{{"n_r", g.n_r}, {"n_theta", g.n_theta}, {"nodes", N}, {"descriptor", g.descriptor()}};
    c.meta["boundary_grid"] = ojson{{"n", n}};
    c.meta["layout"] = "volume values, boundary trace, boundary normal derivative";
    for (std::size_t i = 0; i < N; ++i) c.c128.push_back(s.values(i));
    for (std::size_t i = 0; i < n; ++i) c.c128.push_back(s.trace(i));
    for (std::size_t i = 0; i < n; ++i) c.c128.push_back(s.normal_trace(i));
    return c;
}

StoredField field_from_container(const Container& c)
{
    expect_kind(c, "field", DType::c128);
    StoredField f;
    f.kind = field_kind_from(meta_get<std::string>(c.meta, "field"));
    f.alpha = meta_get<double>(c.meta, "alpha");
    f.energy = meta_get<double>(c.meta, "energy");
    f.k = cvec_from(meta_get<ojson>(c.meta, "k"));
    f.l = cvec_from(meta_get<ojson>(c.meta, "l"));
    f.residual = meta_get<double>(c.meta, "residual");
    f.condition = meta_get<double>(c.meta, "condition");
    f.radius = meta_get<double>(meta_get<ojson>(c.meta, "domain"), "radius");
    ojson vg = meta_get<ojson>(c.meta, "volume_grid");
    f.n_r = meta_get<int>(vg, "n_r");
    f.n_theta = meta_get<int>(vg, "n_theta");
    std::size_t N = meta_get<std::size_t>(vg, "nodes");
    f.n_boundary = meta_get<int>(meta_get<ojson>(c.meta, "boundary_grid"), "n");
    std::size_t n = static_cast<std::size_t>(f.n_boundary);
    require(c.shape.size() == 1 && c.shape[0] == N + 2 * n, ErrorKind::shape_mismatch, "field payload size mismatch");
    f.values = Eigen::Map<const CVector>(c.c128.data(), static_cast<Eigen::Index>(N));
    f.trace = Eigen::Map<const CVector>(c.c128.data() + N, static_cast<Eigen::Index>(n));
    f.normal_trace = Eigen::Map<const CVector>(c.c128.data() + N + n, static_cast<Eigen::Index>(n));
    return f;
}

Container to_container(const ReconstructedPotential& p)
{
    Container c;
    c.kind = "potential";
    c.dtype = DType::f64;
    c.shape = {p.values.size()};
    c.meta["p_max"] = p.p_max;
    c.meta["provenance"] = p.provenance;
    c.meta["domain"] = domain_meta(p.grid.radius);
    c.meta["lattice"] = ojson{{"spacing", p.grid.spacing}, {"side", p.grid.side}, {"points", p.grid.points.size()}};
    c.meta["regularization"] = ojson{{"used", p.used},
                                     {"dropped", p.dropped},
                                     {"condition_soft", p.condition_soft},
                                     {"condition_max", p.condition_max},
                                     {"imag_residue", p.imag_residue}};
    c.f64 = p.values;
    return c;
}

ReconstructedPotential potential_from_container(const Container& c)
{
    expect_kind(c, "potential", DType::f64);
    ReconstructedPotential p;
    p.p_max = meta_get<double>(c.meta, "p_max");
    p.provenance = meta_get<std::string>(c.meta, "provenance");
    double R = meta_get<double>(meta_get<ojson>(c.meta, "domain"), "radius");
    ojson lat = meta_get<ojson>(c.meta, "lattice");
    p.grid = lattice_grid(R, meta_get<double>(lat, "spacing"));
    require(p.grid.points.size() == c.f64.size() && c.shape.size() == 1, ErrorKind::shape_mismatch,
            "potential payload does not match its lattice");
    ojson reg = meta_get<ojson>(c.meta, "regularization");
    p.used = meta_get<int>(reg, "used");
    p.dropped = meta_get<int>(reg, "dropped");
    p.condition_soft = meta_get<double>(reg, "condition_soft");
    p.condition_max = meta_get<double>(reg, "condition_max");
    p.imag_residue = meta_get<double>(reg, "imag_residue");
    p.values = c.f64;
    return p;
}

void write_slice_csv(const std::string& path, const ReconstructedPotential& p, const std::vector<double>* reference)
{
    std::ofstream f(path);
    require(static_cast<bool>(f), ErrorKind::io, "cannot open '" + path + "' for writing");
    f << (reference ? "x,reconstruction,reference\n" : "x,reconstruction\n");
    f << std::setprecision(17);
    for (std::size_t i = 0; i < p.grid.points.size(); ++i) {
        if (p.grid.points[i].y != 0.0) continue;
        f << p.grid.points[i].x << ',' << p.values[i];
        if (reference) f << ',' << (*reference)[i];
        f << '\n';
    }
}

}  // namespace ibm
