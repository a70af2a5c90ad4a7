#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnalg/cli.hpp"

using namespace dnalg::cli;

namespace {

const std::string models = DNALG_MODELS_DIR;

CliResult run(std::vector<std::string> args) { return run_cli(args); }

std::string slurp(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

void check_shape(const Json& r)
{
	std::vector<std::string> keys;
	for (const auto& [k, v] : r.items())
		keys.push_back(k);
	REQUIRE(keys.size() >= 6);
	CHECK(keys[0] == "command");
	CHECK(keys[1] == "input-digest");
	CHECK(keys[2] == "config");
	CHECK(keys.back() == "version");
	CHECK(r.contains("verdicts"));
	CHECK(r.contains("witnesses"));
	CHECK(r.contains("search-bounds"));
	CHECK(r["version"] == kVersion);
}

}  // namespace

TEST_CASE("fnv1a digests")
{
	CHECK(fnv1a_hex("") == "cbf29ce484222325");
	CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
	CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("check-dn on the 3-sphere at p = 3")
{
	const auto pass = run({"check-dn", models + "/s3_p3.pres", "--n", "1"});
	CHECK(pass.exit_code == exit_pass);
	check_shape(pass.report);

	const auto fail = run({"check-dn", models + "/s3_p3.pres", "--n", "3"});
	CHECK(fail.exit_code == exit_fail);
	check_shape(fail.report);
	CHECK(fail.report["config"]["n"] == 3);
	CHECK(fail.report["verdicts"][0]["passed"] == false);
	const auto& w = fail.report["witnesses"];
	REQUIRE(w.size() == 1);
	CHECK(w[0]["degree"] == 8);
	CHECK(w[0]["pairs"][0]["theta"] == "P^1");
	CHECK(w[0]["pairs"][0]["alpha"] == "y");
	CHECK(fail.report["search-bounds"]["max-support"] == 2);
	CHECK(fail.report["input-digest"] == fnv1a_hex(slurp(models + "/s3_p3.pres")));
}

TEST_CASE("max-dn")
{
	const auto r = run({"max-dn", models + "/s3_p5.pres"});
	CHECK(r.exit_code == exit_pass);
	CHECK(r.report["max-dn"] == 2);
	CHECK(r.report["monotone"] == true);
	CHECK(r.report["config"]["presentation-notes"][0] == "P^2 y = y^5 filled in");
}

TEST_CASE("thmc and steenrod")
{
	const auto t = run({"thmc", "--p", "5", "--dims", "3"});
	CHECK(t.exit_code == exit_pass);
	CHECK(t.report["bound"] == 2);
	CHECK(t.report["max-half-degree"] == 2);
	check_shape(t.report);

	const auto s = run({"steenrod", "--eval", "P^1 P^1", "--p", "3"});
	CHECK(s.exit_code == exit_pass);
	CHECK(s.report["normal-form"] == "2*P^2");
	CHECK(s.report["degree"] == 8);

	const auto z = run({"steenrod", "--eval", "P^1 P^2", "--p", "3"});
	CHECK(z.report["normal-form"] == "0");

	CHECK(run({"steenrod", "--eval", "P^1", "--p", "4"}).exit_code == exit_input_error);
	CHECK(run({"steenrod", "--eval", "P^", "--p", "3"}).exit_code == exit_input_error);
}

TEST_CASE("other subcommands")
{
	CHECK(run({"validate", models + "/s3_p3.pres"}).exit_code == exit_pass);
	CHECK(run({"normalize", models + "/s3_p3.pres"}).exit_code == exit_pass);
	CHECK(run({"check-propA", models + "/s3_p3.pres", "--n", "1"}).exit_code == exit_pass);
	const auto pa = run({"check-propA", models + "/s3_p3.pres", "--n", "3"});
	CHECK(pa.exit_code == exit_fail);
	REQUIRE(pa.report["witnesses"].size() == 1);
	CHECK(pa.report["witnesses"][0]["power"] == 2);
	CHECK(run({"check-thmA", models + "/s3_p3.pres"}).exit_code == exit_fail);
	CHECK(run({"check-thmA", models + "/s3_p5.pres"}).exit_code == exit_fail);

	const auto red = run({"reduce", models + "/frobenius_p3.pres"});
	CHECK(red.exit_code == exit_pass);
	CHECK(red.report["ideal-generators"].empty());
	CHECK(red.report["kept"] == Json::array({"y"}));
	CHECK(red.report["reduced"].get<std::string>().find("generator z1 halfdeg 1") != std::string::npos);

	const auto d = run({"derive", "--p", "3", "--halfdegs", "2"});
	CHECK(d.exit_code == exit_pass);
	CHECK(d.report["solutions"].size() == 2);
	CHECK(d.report["search-bounds"]["free-unknowns"] == 1);

	const auto none = run({"derive", "--p", "3", "--halfdegs", "2,4"});
	CHECK(none.exit_code == exit_fail);
	CHECK(none.report["solutions"].empty());

	const auto g = run({"gamma", "--n", "3", "--census"});
	CHECK(g.exit_code == exit_pass);
	CHECK(g.report["facet-count"] == 12);
	CHECK(g.report["census"]["vertices"] == 12);
}

TEST_CASE("input errors")
{
	const auto missing = run({"validate", models + "/does_not_exist.pres"});
	CHECK(missing.exit_code == exit_input_error);
	check_shape(missing.report);
	CHECK(missing.report.contains("error"));

	const auto unknown = run({"frobnicate"});
	CHECK(unknown.exit_code == exit_input_error);
	CHECK(unknown.report.contains("error"));

	CHECK(run({"check-dn", models + "/s3_p3.pres"}).exit_code == exit_input_error);
	CHECK(run({"gamma", "--n", "9"}).exit_code == exit_input_error);
	CHECK(run({"thmc", "--p", "5", "--dims", "3,x"}).exit_code == exit_input_error);
	CHECK(run({"validate", models + "/s3_p3.pres", "--format", "xml"}).exit_code == exit_input_error);
}

TEST_CASE("reports are deterministic and honour output flags")
{
	const std::vector<std::string> args{"check-dn", models + "/s3_p3.pres", "--n", "2", "--seed", "7"};
	const auto a = run(args);
	const auto b = run(args);
	CHECK(a.output == b.output);
	CHECK(a.report["config"]["seed"] == 7);
	CHECK(Json::parse(a.output) == a.report);

	const auto path = (std::filesystem::temp_directory_path() / "dnalg_cli_report.json").string();
	std::vector<std::string> quiet = args;
	quiet.insert(quiet.end(), {"--out", path, "--quiet"});
	const auto q = run(quiet);
	CHECK(q.output.empty());
	CHECK(q.exit_code == a.exit_code);
	CHECK(slurp(path) == a.output);
	std::filesystem::remove(path);

	std::vector<std::string> text = args;
	text.insert(text.end(), {"--format", "text"});
	const auto t = run(text);
	CHECK(t.report == a.report);
	CHECK(t.output.rfind("command: check-dn\n", 0) == 0);
	CHECK(t.output.find("version: 0.1.0") != std::string::npos);

	CHECK(run({"--version"}).output == "0.1.0\n");
}

TEST_CASE("text rendering")
{
	Json j = {{"a", 1}, {"b", Json::array({1, 2})}, {"c", {{"d", "x\ny"}}}};
	std::string out;
	render_text(j, out);
	CHECK(out.find("a: 1\n") == 0);
	CHECK(out.find("b: [1, 2]") != std::string::npos);
	CHECK(out.find("    x\n    y") != std::string::npos);
}
