#include <catch2/catch_amalgamated.hpp>

#include <bosegas/cli.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace bosegas;
using Catch::Approx;
using nlohmann::json;

namespace {

struct CliResult {
    int status = -1;
    std::string out_text;
    std::string err_text;
    json j;  // parsed stdout when it looks like JSON
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.status = cli_run(args, out, err);
    r.out_text = out.str();
    r.err_text = err.str();
    if (!r.out_text.empty() && r.out_text.front() == '{') r.j = json::parse(r.out_text);
    return r;
}

std::string temp_path(const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "bosegas_cli_tests";
    fs::create_directories(dir);
    return (dir / name).string();
}

std::string write_file(const std::string& name, const std::string& text) {
    const std::string path = temp_path(name);
    std::ofstream out(path);
    out << text;
    return path;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Recompute the payload hash the way seal_output defines it: strip the config
// block and the hash itself, then hash the compact dump.
std::string recomputed_hash(json j) {
    j.erase("config");
    j.erase("content_hash");
    return cli::hash_hex(fnv1a(j.dump()));
}

std::string validate_error_field(const RunConfig& c) {
    try {
        validate_config(c);
    } catch (const ConfigError& e) {
        return e.field;
    }
    return "";
}

// --- tiny JSON-Schema checker covering the subset the shipped schema uses ---

const json* resolve_ref(const json& root, const std::string& ref) {
    if (ref.rfind("#/", 0) != 0) return nullptr;
    const json* node = &root;
    std::istringstream ss(ref.substr(2));
    std::string part;
    while (std::getline(ss, part, '/')) {
        if (!node->is_object() || !node->contains(part)) return nullptr;
        node = &(*node)[part];
    }
    return node;
}

bool type_matches(const json& value, const std::string& t) {
    if (t == "object") return value.is_object();
    if (t == "array") return value.is_array();
    if (t == "string") return value.is_string();
    if (t == "boolean") return value.is_boolean();
    if (t == "integer") return value.is_number_integer();
    if (t == "number") return value.is_number();
    return false;
}

void validate_node(const json& root, const json& schema, const json& value,
                   const std::string& where, std::vector<std::string>& errors) {
    if (schema.contains("$ref")) {
        const json* target = resolve_ref(root, schema["$ref"].get<std::string>());
        if (!target) {
            errors.push_back(where + ": unresolved $ref " + schema["$ref"].get<std::string>());
            return;
        }
        validate_node(root, *target, value, where, errors);
        return;
    }
    if (schema.contains("allOf"))
        for (const auto& sub : schema["allOf"]) validate_node(root, sub, value, where, errors);
    if (schema.contains("oneOf")) {
        int matched = 0;
        for (const auto& sub : schema["oneOf"]) {
            std::vector<std::string> scratch;
            validate_node(root, sub, value, where, scratch);
            if (scratch.empty()) ++matched;
        }
        if (matched != 1)
            errors.push_back(where + ": oneOf matched " + std::to_string(matched) + " branches");
    }
    if (schema.contains("type") && !type_matches(value, schema["type"].get<std::string>()))
        errors.push_back(where + ": expected type " + schema["type"].get<std::string>());
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& option : schema["enum"]) hit = hit || option == value;
        if (!hit) errors.push_back(where + ": value not in enum");
    }
    if (schema.contains("pattern") && value.is_string() &&
        !std::regex_match(value.get<std::string>(), std::regex(schema["pattern"].get<std::string>())))
        errors.push_back(where + ": pattern mismatch");
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    errors.push_back(where + ": missing required key " + key.get<std::string>());
        if (schema.contains("properties"))
            for (const auto& [key, sub] : schema["properties"].items())
                if (value.contains(key)) validate_node(root, sub, value[key], where + "." + key, errors);
    }
    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>())
            errors.push_back(where + ": fewer than minItems entries");
        if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<std::size_t>())
            errors.push_back(where + ": more than maxItems entries");
        if (schema.contains("items")) {
            std::size_t i = 0;
            for (const auto& el : value)
                validate_node(root, schema["items"], el, where + "[" + std::to_string(i++) + "]", errors);
        }
    }
}

std::vector<std::string> schema_errors(const json& schema, const json& value,
                                       const std::string& label) {
    std::vector<std::string> errors;
    validate_node(schema, schema, value, label, errors);
    return errors;
}

}  // namespace

TEST_CASE("config text round-trips", "[cli]") {
    SECTION("parse of serialize returns the same configuration") {
        RunConfig c;
        c.potential_kind = "smooth_bump";
        c.potential_v0 = 3.5;
        c.potential_radius = 0.1;
        c.N = 12.0;
        c.ell = 1.0 / 3.0;
        c.cutoff = 7;
        c.threads = 2;
        c.mode = "integral";
        c.max_m = 16;
        c.fit = true;
        c.rho = 1e-4;
        c.a = 0.3;
        CHECK(parse_config(serialize_config(c)) == c);

        c.potential_kind = "tabulated";
        c.potential_table = "table.txt";
        CHECK(parse_config(serialize_config(c)) == c);
    }

    SECTION("serialize -> parse -> serialize is a fixed point") {
        RunConfig c;
        c.potential_v0 = 0.1;  // not exactly representable; needs shortest round-trip
        c.ell = 0.3;
        c.rho = 1e-4;
        const std::string text = serialize_config(c);
        CHECK(serialize_config(parse_config(text)) == text);
    }

    SECTION("comments, blank lines and spaces are ignored") {
        const RunConfig c = parse_config(
            "# header comment\n"
            "\n"
            "  potential.v0 = 3   # inline comment\n"
            "\tN=12\n"
            "fit = true\r\n");
        CHECK(c.potential_v0 == 3.0);
        CHECK(c.N == 12.0);
        CHECK(c.fit);
        CHECK(c.ell == 0.25);  // untouched default
    }

    SECTION("nested JSON, flat JSON and key=value text agree") {
        const std::string kv = "potential.kind=smooth_bump\npotential.v0=3.5\nN=12\nfit=true\n";
        const std::string nested =
            R"({"potential": {"kind": "smooth_bump", "v0": 3.5}, "N": 12, "fit": true})";
        const std::string flat =
            R"({"potential.kind": "smooth_bump", "potential.v0": 3.5, "N": 12.0, "fit": true})";
        const RunConfig from_kv = parse_config(kv);
        CHECK(parse_config(nested) == from_kv);
        CHECK(parse_config(flat) == from_kv);
        CHECK(from_kv.potential_v0 == 3.5);
    }

    SECTION("empty JSON object keeps every default") {
        CHECK(parse_config(" { } ") == RunConfig{});
    }

    SECTION("shipped example configs load and validate") {
        const RunConfig hard = load_config(std::string(BOSEGAS_SOURCE_DIR) +
                                           "/configs/hard_sphere.conf");
        CHECK(hard.potential_v0 == 50.0);
        CHECK(hard.potential_radius == 0.4);
        CHECK(hard.N == 10.0);
        CHECK(hard.cutoff == 30);
        CHECK_NOTHROW(validate_config(hard));

        const RunConfig soft = load_config(std::string(BOSEGAS_SOURCE_DIR) +
                                           "/configs/soft_sphere.json");
        CHECK(soft.potential_v0 == 2.0);
        CHECK(soft.N == 20.0);
        CHECK(soft.cutoff == 60);
        CHECK_NOTHROW(validate_config(soft));
    }
}

TEST_CASE("config parse errors name the offending field", "[cli]") {
    const auto field_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.field;
        }
        return std::string();
    };

    CHECK(field_of("v0=2\n") == "v0");                       // unknown key
    CHECK(field_of("potential.v0\n") == "line 1");           // no '='
    CHECK(field_of("\n\nN 20\n") == "line 3");               // line number tracks input
    CHECK(field_of("potential.v0=abc\n") == "potential.v0");
    CHECK(field_of("potential.v0=2.5x\n") == "potential.v0");
    CHECK(field_of("cutoff=2.5\n") == "cutoff");
    CHECK(field_of("fit=yes\n") == "fit");
    CHECK(field_of("{bad json") == "json");
    CHECK(field_of(R"({"N": null})") == "N");

    try {
        parse_config("potential.v0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("expected key=value") != std::string::npos);
    }

    try {
        load_config("/nonexistent/bosegas.conf");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field == "config");
    }
}

TEST_CASE("config validation rejects out-of-range fields", "[cli]") {
    CHECK(validate_error_field(RunConfig{}).empty());

    RunConfig c;
    c.potential_kind = "box";
    CHECK(validate_error_field(c) == "potential.kind");

    c = RunConfig{};
    c.potential_v0 = -1.0;
    CHECK(validate_error_field(c) == "potential.v0");

    c = RunConfig{};
    c.potential_radius = 0.0;
    CHECK(validate_error_field(c) == "potential.radius");

    c = RunConfig{};
    c.potential_kind = "tabulated";
    CHECK(validate_error_field(c) == "potential.table");

    c = RunConfig{};
    c.N = 1.0;
    CHECK(validate_error_field(c) == "N");

    c = RunConfig{};
    c.ell = 0.5;
    CHECK(validate_error_field(c) == "ell");
    c.ell = 0.0;
    CHECK(validate_error_field(c) == "ell");

    c = RunConfig{};
    c.cutoff = 0;
    CHECK(validate_error_field(c) == "cutoff");

    c = RunConfig{};
    c.threads = -1;
    CHECK(validate_error_field(c) == "threads");

    c = RunConfig{};
    c.mode = "fast";
    CHECK(validate_error_field(c) == "mode");

    c = RunConfig{};
    c.max_m = 7;
    CHECK(validate_error_field(c) == "max_m");

    c = RunConfig{};
    c.rho = -1e-6;
    CHECK(validate_error_field(c) == "rho");

    c = RunConfig{};
    c.a = -0.1;
    CHECK(validate_error_field(c) == "a");
}

TEST_CASE("thread resolution prefers flag, then environment, then one", "[cli]") {
    ::unsetenv("BOSEGAS_THREADS");
    RunConfig c;
    CHECK(resolve_threads(c) == 1);

    c.threads = 5;
    CHECK(resolve_threads(c) == 5);

    c.threads = 0;
    ::setenv("BOSEGAS_THREADS", "6", 1);
    CHECK(resolve_threads(c) == 6);

    c.threads = 2;  // explicit value wins over the environment
    CHECK(resolve_threads(c) == 2);

    c.threads = 0;
    for (const char* junk : {"junk", "0", "-3", "2x", ""}) {
        ::setenv("BOSEGAS_THREADS", junk, 1);
        CHECK(resolve_threads(c) == 1);
    }
    ::unsetenv("BOSEGAS_THREADS");
}

TEST_CASE("tabulated potential files", "[cli]") {
    SECTION("two-column file with comments") {
        const std::string path = write_file("table_ok.txt",
                                            "# r V(r)\n"
                                            "0.0 1.0\n"
                                            "0.5 0.8\n"
                                            "1.0 0.5  # midpoint\n"
                                            "1.5 0.2\n"
                                            "2.0 0.0\n");
        RunConfig c;
        c.potential_kind = "tabulated";
        c.potential_table = path;
        const RadialPotential V = make_potential(c);
        CHECK_NOTHROW(V.validate());
        CHECK(!V.is_zero());
        CHECK(scattering_length(V) > 0.0);
    }

    SECTION("missing file and short tables are rejected") {
        try {
            load_tabulated_potential("/nonexistent/table.txt");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field == "potential.table");
        }

        const std::string path = write_file("table_short.txt", "0 1\n1 0.5\n2 0\n");
        try {
            load_tabulated_potential(path);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field == "potential.table");
        }
    }
}

TEST_CASE("usage errors and help", "[cli]") {
    const CliResult none = run_cli({});
    CHECK(none.status == 2);
    CHECK(none.j["error"]["code"] == "usage");
    CHECK(!none.err_text.empty());

    const CliResult unknown = run_cli({"fit"});
    CHECK(unknown.status == 2);
    CHECK(unknown.j["error"]["code"] == "usage");

    const CliResult badflag = run_cli({"elambda", "--bogus"});
    CHECK(badflag.status == 2);
    CHECK(badflag.j["error"]["code"] == "usage");

    const CliResult help = run_cli({"--help"});
    CHECK(help.status == 0);
    CHECK(help.out_text.find("scattering") != std::string::npos);
    CHECK(help.out_text.find("lhy") != std::string::npos);
}

TEST_CASE("runtime errors carry an error code and module", "[cli]") {
    SECTION("invalid configuration") {
        const CliResult r = run_cli({"scattering", "--ell", "0.6"});
        CHECK(r.status == 1);
        CHECK(r.j["error"]["code"] == "invalid_config");
        CHECK(r.j["error"]["field"] == "ell");
    }

    SECTION("box too small for the range") {
        const CliResult r = run_cli({"scattering", "--N", "4"});
        CHECK(r.status == 1);
        CHECK(r.j["error"]["code"] == "compute");
        CHECK(r.j["error"]["module"] == "scattering");
    }

    SECTION("shell table limit") {
        const CliResult r = run_cli({"spectrum", "--cutoff", "3000"});
        CHECK(r.status == 1);
        CHECK(r.j["error"]["code"] == "compute");
        CHECK(r.j["error"]["module"] == "bogoliubov");
    }

    SECTION("fit needs a ladder, not a single N") {
        const CliResult r = run_cli({"logterm", "--N", "8", "--fit"});
        CHECK(r.status == 1);
        CHECK(r.j["error"]["code"] == "compute");
        CHECK(r.j["error"]["module"] == "energy");
    }

    SECTION("diluteness bound") {
        const CliResult r = run_cli({"lhy", "--rho", "1", "--a", "1"});
        CHECK(r.status == 1);
        CHECK(r.j["error"]["code"] == "compute");
        CHECK(r.j["error"]["module"] == "energy");
    }
}

TEST_CASE("scattering subcommand", "[cli]") {
    SECTION("summary matches the library and is sealed") {
        const CliResult r = run_cli({"scattering", "--N", "20", "--cutoff", "24"});
        REQUIRE(r.status == 0);
        const json& j = r.j;

        const auto V = RadialPotential::square(2.0, 1.0);
        const auto sol = solve_neumann(V, 20.0, 0.25);
        CHECK(j["a"].get<double>() == Approx(sol.a).epsilon(1e-14));
        CHECK(j["lambda"].get<double>() == Approx(sol.lambda).epsilon(1e-14));
        CHECK(j["R"].get<double>() == 5.0);
        CHECK(j["vf_integral"].get<double>() == Approx(sol.vf_integral).epsilon(1e-14));
        CHECK(j["residual_cutoff"].get<int>() == 24);

        REQUIRE(j["check_residuals"].size() == 3);
        CHECK(j["check_residuals"][0]["p"] == json({1, 0, 0}));
        CHECK(j["check_residuals"][1]["p"] == json({1, 1, 0}));
        CHECK(j["check_residuals"][2]["p"] == json({2, 1, 0}));
        const RadialProfile eta = eta_profile(sol, two_pi * (std::max(6.0 * 20.0, 24.0) + 2.0));
        const double r100 = scattering_residual(sol, {1, 0, 0}, 24, &eta);
        CHECK(j["check_residuals"][0]["residual"].get<double>() == Approx(r100).epsilon(1e-12));
        for (const auto& entry : j["check_residuals"])
            CHECK(entry["residual"].get<double>() < 1e-2);

        CHECK(j["content_hash"].get<std::string>() == recomputed_hash(j));
        CHECK(j["config"]["N"].get<double>() == 20.0);
        CHECK(j["config"]["cutoff"].get<int>() == 24);
        CHECK(j["config"]["threads"].get<int>() == 1);  // resolved default is echoed
        CHECK(!j["config"]["potential"].contains("table"));
    }

    SECTION("zero interaction short-circuits to the free values") {
        const std::string cfg = write_file("zero.json", R"({"potential": {"v0": 0.0}})");
        const CliResult r = run_cli({"scattering", "--config", cfg});
        REQUIRE(r.status == 0);
        CHECK(r.j["a"].get<double>() == 0.0);
        CHECK(r.j["lambda"].get<double>() == 0.0);
        CHECK(r.j["check_residuals"].empty());
        CHECK(r.j.size() == 5);  // a, lambda, check_residuals + seal
        CHECK(r.j["content_hash"].get<std::string>() == recomputed_hash(r.j));
    }

    SECTION("profile dump writes the (r,f,w) table and the eta side file") {
        const std::string path = temp_path("profiles.csv");
        const CliResult r =
            run_cli({"scattering", "--N", "20", "--cutoff", "12", "--dump-profiles", path});
        REQUIRE(r.status == 0);
        CHECK(r.j["profiles"] == path);
        CHECK(r.j["eta_profile"] == temp_path("profiles.eta.csv"));

        const auto lines = read_lines(path);
        REQUIRE(lines.size() > 2);
        CHECK(lines.front() == "r,f,w");
        // the grid ends at R where f = u/r = 1 and w = 0
        std::istringstream last(lines.back());
        std::string r_s, f_s, w_s;
        std::getline(last, r_s, ',');
        std::getline(last, f_s, ',');
        std::getline(last, w_s, ',');
        CHECK(std::stod(r_s) == Approx(5.0).margin(1e-12));
        CHECK(std::stod(f_s) == Approx(1.0).margin(1e-9));
        CHECK(std::stod(w_s) == Approx(0.0).margin(1e-12));

        const auto eta_lines = read_lines(temp_path("profiles.eta.csv"));
        REQUIRE(eta_lines.size() > 2);
        CHECK(eta_lines.front() == "q,eta");
        std::istringstream first(eta_lines[1]);
        std::string q_s;
        std::getline(first, q_s, ',');
        CHECK(std::stod(q_s) == Approx(2.0).margin(1e-12));
    }

    SECTION("--csv is an alias for the profile dump") {
        const std::string path = temp_path("profiles_alias.csv");
        const CliResult r = run_cli({"scattering", "--N", "20", "--cutoff", "12", "--csv", path});
        REQUIRE(r.status == 0);
        CHECK(r.j["profiles"] == path);
    }

    SECTION("eta side-file naming") {
        CHECK(cli::eta_csv_path("out.csv") == "out.eta.csv");
        CHECK(cli::eta_csv_path("noext") == "noext.eta.csv");
        CHECK(cli::eta_csv_path("dir.d/file") == "dir.d/file.eta.csv");
        CHECK(cli::eta_csv_path("a/b.csv") == "a/b.eta.csv");
        CHECK(cli::eta_csv_path("w.x/y.z") == "w.x/y.eta.z");
    }
}

TEST_CASE("spectrum subcommand", "[cli]") {
    const std::string path = temp_path("spectrum.csv");
    const CliResult r = run_cli({"spectrum", "--cutoff", "6", "--csv", path});
    REQUIRE(r.status == 0);
    const json& j = r.j;

    const double a = scattering_length(RadialPotential::square(2.0, 1.0));
    CHECK(j["a"].get<double>() == Approx(a).epsilon(1e-14));
    CHECK(j["cutoff"].get<int>() == 6);

    const ShellTable table = build_shells(6);
    REQUIRE(j["rows"].size() == table.shells.size());
    CHECK(j["rows"][0][0].get<double>() == Approx(two_pi).epsilon(1e-15));
    CHECK(j["rows"][0][1].get<double>() == Approx(dispersion(two_pi, a)).epsilon(1e-13));
    double prev = 0.0;
    for (const auto& row : j["rows"]) {
        REQUIRE(row.size() == 2);
        CHECK(row[0].get<double>() > prev);
        prev = row[0].get<double>();
    }

    CHECK(j["csv"] == path);
    const auto lines = read_lines(path);
    CHECK(lines.size() == table.shells.size() + 1);
    CHECK(lines.front() == "q,epsilon");
    CHECK(j["content_hash"].get<std::string>() == recomputed_hash(j));
}

TEST_CASE("elambda subcommand", "[cli]") {
    const CliResult r = run_cli({"elambda", "--max-m", "64"});
    REQUIRE(r.status == 0);
    const json& j = r.j;

    const TorusConstant el = e_lambda(64);
    CHECK(j["estimate"].get<double>() == el.value);
    CHECK(j["band"].get<double>() == el.band);
    CHECK(j["estimate_at_half"].get<double>() == el.value_at_half);
    CHECK(j["band_at_half"].get<double>() == el.band_at_half);
    CHECK(j["converged"].get<bool>() == el.converged);
    CHECK(j["max_m"].get<int>() == 64);
    CHECK(j["config"]["max_m"].get<int>() == 64);
    CHECK(j["content_hash"].get<std::string>() == recomputed_hash(j));
}

TEST_CASE("constants subcommand", "[cli]") {
    const std::string cfg = std::string(BOSEGAS_SOURCE_DIR) + "/configs/hard_sphere.conf";

    const CliResult r1 = run_cli({"constants", "--config", cfg, "--threads", "1"});
    REQUIRE(r1.status == 0);
    const json& j = r1.j;
    CHECK(j["N"].get<double>() == 10.0);
    CHECK(j["cutoff"].get<int>() == 30);
    CHECK(j["identity"]["lhs"].get<double>() == Approx(25.1451673658).margin(1e-6));
    CHECK(j["identity"]["rhs"].get<double>() == Approx(24.9407904018).margin(1e-6));
    CHECK(j["C_O1"].get<double>() == j["identity"]["lhs"].get<double>());
    CHECK(j["identity"]["diff"].get<double>() ==
          Approx(j["identity"]["lhs"].get<double>() - j["identity"]["rhs"].get<double>())
              .margin(1e-12));
    CHECK(j["C_GN"].get<double>() > 0.0);
    CHECK(j["content_hash"].get<std::string>() == recomputed_hash(j));

    // thread count must not leak into the numeric payload
    const CliResult r4 = run_cli({"constants", "--config", cfg, "--threads", "4"});
    REQUIRE(r4.status == 0);
    CHECK(r4.j["content_hash"] == j["content_hash"]);
    CHECK(r4.j["config"]["threads"].get<int>() == 4);
    CHECK(j["config"]["threads"].get<int>() == 1);
    json payload1 = j, payload4 = r4.j;
    payload1.erase("config");
    payload4.erase("config");
    CHECK(payload1.dump() == payload4.dump());
}

TEST_CASE("logterm subcommand", "[cli]") {
    SECTION("single-N lattice row carries the raw sum") {
        const CliResult r = run_cli({"logterm", "--mode", "lattice", "--N", "8"});
        REQUIRE(r.status == 0);
        const json& j = r.j;
        CHECK(j["mode"] == "lattice");
        CHECK(j["a"].get<double>() == 1.0);
        REQUIRE(j["rows"].size() == 1);
        const json& row = j["rows"][0];
        CHECK(row["N"].get<double>() == 8.0);
        const double expected = -24.0 / std::pow(two_pi, 6);
        CHECK(row["raw_sum"].get<double>() == Approx(expected).margin(1e-18));
        CHECK(row["lattice"].get<double>() ==
              Approx(1024.0 * std::pow(pi, 4) / 8.0 * expected).epsilon(1e-12));
        CHECK(!row.contains("integral"));
        CHECK(!row.contains("raw_abs_diff"));
        CHECK(!j.contains("fit"));
    }

    SECTION("both-mode rows expose the route discrepancy") {
        const CliResult r = run_cli({"logterm", "--N", "8"});
        REQUIRE(r.status == 0);
        const json& row = r.j["rows"][0];
        const double diff =
            std::abs(row["raw_sum"].get<double>() - row["raw_integral"].get<double>());
        CHECK(row["raw_abs_diff"].get<double>() == diff);
        CHECK(row["raw_abs_diff"].get<double>() == Approx(2.93602471e-4).margin(1e-9));
    }

    SECTION("lattice ladder fit against the closed-form constant") {
        const std::string path = temp_path("logterm_lattice.csv");
        const CliResult r = run_cli({"logterm", "--mode", "lattice", "--fit", "--csv", path});
        REQUIRE(r.status == 0);
        const json& j = r.j;
        REQUIRE(j["rows"].size() == 4);
        CHECK(j["rows"][0]["N"].get<double>() == 8.0);
        CHECK(j["rows"][3]["N"].get<double>() == 64.0);
        CHECK(j["fit"]["c"].get<double>() == Approx(-357.891728).margin(1e-3));
        CHECK(j["fit"]["d"].get<double>() == Approx(726.720371).margin(1e-3));
        CHECK(j["fit"]["max_residual"].get<double>() == Approx(33.702034).margin(1e-3));
        CHECK(j["fit"]["reference"].get<double>() == third_order_constant);
        const double c = j["fit"]["c"].get<double>();
        CHECK(j["fit"]["relative_deviation"].get<double>() ==
              Approx(std::abs(c - third_order_constant) / std::abs(third_order_constant))
                  .margin(1e-15));

        const auto lines = read_lines(path);
        REQUIRE(lines.size() == 5);
        CHECK(lines.front() == "N,lattice");
    }

    SECTION("integral ladder fit runs the large-N rung") {
        const CliResult r = run_cli({"logterm", "--mode", "integral", "--fit"});
        REQUIRE(r.status == 0);
        const json& j = r.j;
        REQUIRE(j["rows"].size() == 5);
        CHECK(j["rows"][0]["N"].get<double>() == 128.0);
        CHECK(j["rows"][4]["N"].get<double>() == 2048.0);
        CHECK(!j["rows"][0].contains("lattice"));
        CHECK(j["fit"]["c"].get<double>() == Approx(-484.440319).margin(1e-3));
        CHECK(j["fit"]["max_residual"].get<double>() == Approx(4.763).margin(1e-2));
    }

    SECTION("csv header tracks the enabled routes") {
        const std::string path = temp_path("logterm_both.csv");
        const CliResult r = run_cli({"logterm", "--N", "8", "--csv", path});
        REQUIRE(r.status == 0);
        const auto lines = read_lines(path);
        REQUIRE(lines.size() == 2);
        CHECK(lines.front() == "N,lattice,integral");
    }

    SECTION("payload hash is thread-invariant") {
        const CliResult r1 = run_cli({"logterm", "--mode", "lattice", "--N", "16", "--threads", "1"});
        const CliResult r4 = run_cli({"logterm", "--mode", "lattice", "--N", "16", "--threads", "4"});
        REQUIRE(r1.status == 0);
        REQUIRE(r4.status == 0);
        CHECK(r1.j["content_hash"] == r4.j["content_hash"]);
    }
}

TEST_CASE("energy subcommand", "[cli]") {
    const CliResult r = run_cli({"energy"});
    REQUIRE(r.status == 0);
    const json& j = r.j;

    CHECK(j["term1"].get<double>() == Approx(56.92202766).margin(1e-6));
    CHECK(j["term2"].get<double>() == Approx(0.59160087).margin(1e-6));
    CHECK(j["term3"].get<double>() == Approx(0.52345931).margin(1e-6));
    CHECK(j["term4"].get<double>() == Approx(-0.23901741).margin(1e-6));
    CHECK(j["total"].get<double>() == Approx(57.79807044).margin(1e-6));
    CHECK(j["total"].get<double>() == j["term1"].get<double>() + j["term2"].get<double>() +
                                          j["term3"].get<double>() + j["term4"].get<double>());

    const double a = scattering_length(RadialPotential::square(2.0, 1.0));
    CHECK(j["term1"].get<double>() == Approx(4.0 * pi * a * 19.0).margin(1e-6));
    CHECK(j["a"].get<double>() == Approx(a).epsilon(1e-14));
    CHECK(j["N"].get<double>() == 20.0);

    const json& meta = j["metadata"];
    CHECK(meta["cutoff"].get<int>() == 60);
    CHECK(meta["e_lambda_M"].get<int>() == 240);
    CHECK(meta["e_lambda_value"].get<double>() == Approx(10.41).margin(0.1));
    CHECK(meta["e_lambda_band"].get<double>() > 0.0);
    CHECK(meta["remainder_order"] == "O((log N)^(1/2)/N)");
    CHECK(j["content_hash"].get<std::string>() == recomputed_hash(j));
}

TEST_CASE("lhy subcommand", "[cli]") {
    const CliResult r = run_cli({"lhy"});
    REQUIRE(r.status == 0);
    const json& j = r.j;
    CHECK(j["rho"].get<double>() == 1e-4);
    CHECK(j["a"].get<double>() == 1.0);
    CHECK(j["energy_per_particle"].get<double>() == lhy_energy(1e-4, 1.0));
    CHECK(j["log_term_consistency"].get<double>() <= 1e-12);
    CHECK(j["content_hash"].get<std::string>() == recomputed_hash(j));
}

TEST_CASE("output redirection and environment threads", "[cli]") {
    SECTION("--out writes the summary to a file, stdout stays empty") {
        const std::string path = temp_path("elambda.json");
        const CliResult r = run_cli({"elambda", "--max-m", "16", "--out", path});
        REQUIRE(r.status == 0);
        CHECK(r.out_text.empty());
        std::ifstream in(path);
        REQUIRE(in.good());
        const json from_file = json::parse(in);

        const CliResult direct = run_cli({"elambda", "--max-m", "16"});
        CHECK(from_file == direct.j);
    }

    SECTION("BOSEGAS_THREADS is honored and echoed") {
        ::setenv("BOSEGAS_THREADS", "3", 1);
        const CliResult env_run = run_cli({"elambda", "--max-m", "16"});
        REQUIRE(env_run.status == 0);
        CHECK(env_run.j["config"]["threads"].get<int>() == 3);

        const CliResult flag_run = run_cli({"elambda", "--max-m", "16", "--threads", "2"});
        REQUIRE(flag_run.status == 0);
        CHECK(flag_run.j["config"]["threads"].get<int>() == 2);
        ::unsetenv("BOSEGAS_THREADS");

        // same numbers either way
        CHECK(env_run.j["content_hash"] == flag_run.j["content_hash"]);
    }
}

TEST_CASE("every summary validates against the shipped schema", "[cli]") {
    std::ifstream in(std::string(BOSEGAS_SOURCE_DIR) + "/schema/run_output.schema.json");
    REQUIRE(in.good());
    const json schema = json::parse(in);

    const std::string zero_cfg = write_file("zero_schema.json", R"({"potential": {"v0": 0.0}})");
    const std::string hard_cfg = std::string(BOSEGAS_SOURCE_DIR) + "/configs/hard_sphere.conf";

    const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
        {"scattering", {"scattering", "--N", "20", "--cutoff", "12"}},
        {"scattering-free", {"scattering", "--config", zero_cfg}},
        {"spectrum", {"spectrum", "--cutoff", "4"}},
        {"elambda", {"elambda", "--max-m", "16"}},
        {"constants", {"constants", "--config", hard_cfg, "--cutoff", "12"}},
        {"logterm", {"logterm", "--N", "8"}},
        {"logterm-fit", {"logterm", "--mode", "integral", "--fit"}},
        {"energy", {"energy", "--N", "20", "--cutoff", "12", "--max-m", "16"}},
        {"lhy", {"lhy"}},
        {"error-usage", {}},
        {"error-config", {"scattering", "--ell", "0.9"}},
        {"error-compute", {"lhy", "--rho", "1", "--a", "1"}},
    };

    for (const auto& [label, args] : runs) {
        const CliResult r = run_cli(args);
        REQUIRE(!r.j.is_null());
        const bool expect_error = label.rfind("error-", 0) == 0;
        CHECK(r.j.contains("error") == expect_error);
        const auto errors = schema_errors(schema, r.j, label);
        for (const auto& e : errors) INFO(e);
        CHECK(errors.empty());
    }
}
