#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <numbers>

#include "ibm/commands.hpp"
#include "ibm/config.hpp"
#include "ibm/container.hpp"
#include "ibm/errors.hpp"

using namespace ibm;

namespace {

ErrorKind kind_of(const std::string& bytes)
{
    try {
        decode_container(bytes);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::internal;
}

}  // namespace

TEST_CASE("4x4 complex operator round-trips bit-exactly")
{
    BoundaryGrid g = build_boundary_grid(Domain{1}, 4);
    CMatrix K(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) K(i, j) = cplx(std::sin(1.0 + i * 4 + j), std::numbers::pi / (1 + i + 2 * j));
    BoundaryOperator op = BoundaryOperator::from_matrix(K * g.weight(), g, OperatorKind::impedance_map, 0.3, 2.5, "v");
    std::string bytes = encode_container(to_container(op));
    BoundaryOperator back = operator_from_container(decode_container(bytes));
    CHECK(std::memcmp(back.kernel.data(), op.kernel.data(), 16 * sizeof(cplx)) == 0);
    CHECK(back.alpha == 0.3);
    CHECK(back.energy == 2.5);
    CHECK(encode_container(to_container(back)) == bytes);

    auto path = std::filesystem::temp_directory_path() / "ibm_roundtrip.ibm";
    save_container(path.string(), to_container(op));
    CHECK(encode_container(load_container(path.string())) == bytes);
    std::filesystem::remove(path);
}

TEST_CASE("container errors are distinct")
{
    Container c;
    c.kind = "test";
    c.shape = {3};
    c.f64 = {1, 2, 3};
    std::string b = encode_container(c);
    CHECK(b.substr(0, 4) == "IBM1");

    std::string bad = b;
    bad[3] = 'X';
    CHECK(kind_of(bad) == ErrorKind::bad_magic);
    CHECK(kind_of(b.substr(0, b.size() - 8)) == ErrorKind::truncated);
    CHECK(kind_of(b.substr(0, 6)) == ErrorKind::truncated);
    CHECK(kind_of(b + std::string(8, '\0')) == ErrorKind::shape_mismatch);
    CHECK(exit_code(ErrorKind::bad_magic) == 5);
}

TEST_CASE("dataset container keeps every column")
{
    ScatteringDataset d;
    d.energy = 1;
    d.alpha = 0.5;
    d.provenance = "boundary";
    DatasetEntry e;
    e.pair = momentum_pair_complex({2.5, 0.0}, 1);
    e.value = cplx(1e-3, -2e-4);
    e.condition = 3.5;
    e.a_norm = 0.25;
    d.entries = {e};
    ScatteringDataset back = dataset_from_container(decode_container(encode_container(to_container(d))));
    REQUIRE(back.entries.size() == 1);
    CHECK(back.entries[0].value == e.value);
    CHECK(back.entries[0].pair.k.y == e.pair.k.y);
    CHECK(back.entries[0].pair.path == MomentumPath::faddeev);
    CHECK(back.entries[0].condition == 3.5);
}

TEST_CASE("config schema")
{
    ojson j = ojson::parse(R"({"energy": 2.0, "potential": {"kind": "gaussian_mixture",
        "gaussians": [{"amplitude": 1, "sigma": 0.2}]}, "grid": {"n_boundary": 64}})");
    RunConfig c = parse_config(j);
    CHECK(c.energy == 2.0);
    CHECK(c.n_boundary == 64);
    CHECK(c.potential->gaussians.size() == 1);
    RunConfig again = parse_config(to_json(c));
    CHECK(to_json(again) == to_json(c));

    auto kind = [](const char* text) {
        try {
            parse_config(ojson::parse(text));
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::internal;
    };
    CHECK(kind(R"({"energi": 1})") == ErrorKind::config);
    CHECK(kind(R"({"grid": {"n_boundary": 64, "nr": 3}})") == ErrorKind::config);
    CHECK(kind(R"({"potential": {"kind": "square"}})") == ErrorKind::config);
    CHECK(kind(R"({"path": "sideways"})") == ErrorKind::config);
}

TEST_CASE("report JSON keeps key order and leaves out negative runtime")
{
    ReportDoc r;
    r.title = "t";
    CHECK(r.check("a", 1e-7, 1e-6));
    CHECK_FALSE(r.check("b", 2.0, 1.0));
    CHECK(r.check("c", 2.0, 1.0, ">"));
    CHECK_FALSE(r.pass());
    std::string s = r.to_json().dump();
    CHECK(s.find("runtime") == std::string::npos);
    CHECK(s.find("\"verdict\":\"fail\"") != std::string::npos);
    CHECK(s.find("\"name\":\"a\"") < s.find("\"name\":\"b\""));
}

TEST_CASE("unknown validate suite is a config error")
{
    CHECK_THROWS_AS(run_suite("nope"), Error);
    CHECK(suite_names().size() == 6);
}
