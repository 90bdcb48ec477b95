#include <doctest.h>

#include <sstream>

#include "adjustmcmc/io.hpp"
#include "fixtures.hpp"
#include "printers.hpp"

using namespace adjustmcmc;

TEST_CASE("graph json round trips") {
    Dag g = fixtures::TenNode::dag();
    std::vector<std::string> names = default_names(10);
    names[0] = "T";
    std::vector<std::string> back;
    CHECK(dag_from_json(json::parse(dag_to_json(g, names).dump()), &back) == g);
    CHECK(back == names);

    Skeleton s = skeleton_of(g);
    CHECK(skeleton_from_json(skeleton_to_json(s)) == s);
    CHECK(skeleton_to_json(s).contains("undirected"));

    Sem sem = fixtures::Triangle::sem(0.1, -0.25, 0.75);
    Sem sb = sem_from_json(json::parse(sem_to_json(sem).dump()));
    CHECK(sb.dag == sem.dag);
    CHECK(sb.coeff == sem.coeff);
    CHECK(sb.noise_var == sem.noise_var);
}

TEST_CASE("malformed graph json") {
    CHECK_THROWS_AS(dag_from_json(json::parse(R"({"n":2,"edges":[[0,1],[1,0]]})")), FormatError);
    CHECK_THROWS_AS(dag_from_json(json::parse(R"({"n":2,"edges":[[0,5]]})")), FormatError);
    CHECK_THROWS_AS(dag_from_json(json::parse(R"({"edges":[]})")), FormatError);
    CHECK_THROWS_AS(skeleton_from_json(json::parse(R"({"n":2,"undirected":[[0]]})")), FormatError);
}

TEST_CASE("threshold keys") {
    CHECK(format_threshold(1.0) == "1.0");
    CHECK(format_threshold(0.8) == "0.8");
    CHECK(format_threshold(0.0) == "0.0");
    CHECK(format_threshold(0.25) == "0.25");
}

TEST_CASE("run result schema") {
    Tally t;
    t.tested_count[NodeSet{1, 2}] = 3;
    t.valid_count[NodeSet{1, 2}] = 2;
    t.tested_count[NodeSet{}] = 1;
    auto lists = threshold_lists(t, {1.0, 0.0});
    json j = run_result_to_json(t, lists);
    REQUIRE(j["tally"].size() == 2);
    CHECK(j["tally"][1]["set"] == json::array({1, 2}));
    CHECK(j["tally"][1]["valid"] == 2);
    CHECK(j["tally"][1]["tested"] == 3);
    CHECK(j["tally"][0]["valid"] == 0);
    CHECK(j["lists"]["1.0"] == json::array({json::array({1, 2})}));
    CHECK(j["lists"]["0.0"].size() == 1);
}

TEST_CASE("csv round trip") {
    Dataset d;
    d.values.resize(3, 2);
    d.values << 0.1, -2.5e-7, 1.0 / 3.0, 12345.678, -0.0, 3;
    d.names = {"a", "b"};
    std::stringstream ss;
    write_csv(ss, d);
    Dataset back = read_csv(ss);
    CHECK(back.names == d.names);
    CHECK(back.values == d.values);
}

TEST_CASE("csv parsing") {
    std::stringstream ok("\"Raf\", Mek\r\n1,2\n3, 4.5\n\n");
    Dataset d = read_csv(ok);
    CHECK(d.names == std::vector<std::string>{"Raf", "Mek"});
    CHECK(d.rows() == 2);
    CHECK(d.values(1, 1) == 4.5);

    std::stringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), FormatError);
    std::stringstream text("a,b\n1,x\n");
    CHECK_THROWS_AS(read_csv(text), FormatError);
    std::stringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), FormatError);
    CHECK_THROWS(read_csv_file("/nonexistent/file.csv"));
}
