#include <filesystem>

#include "config.hpp"
#include "doctest.h"
#include "mtb/csv.hpp"
#include "mtb/errors.hpp"
#include "mtb/svg.hpp"

using namespace mtb;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

} // namespace

TEST_CASE("csv numbers and tables")
{
    CHECK(csv_number(0.75) == "0.75");
    CHECK(csv_number(1.0) == "1");
    CHECK(csv_number(0.05 / 39.0) == "0.001282051282");

    const CsvTable t{{"method", "a", "b"}, {{"edit", "1", ""}, {"path", "", "2"}}};
    const std::string text = t.to_string();
    CHECK(text == "method,a,b\nedit,1,\npath,,2\n");
    const auto back = CsvTable::parse(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.column("b") == 2);
    CHECK_THROWS_AS(back.column("c"), std::invalid_argument);
    CHECK_THROWS_AS(CsvTable::parse("a,b\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(CsvTable::parse(""), std::invalid_argument);
}

TEST_CASE("text files are written atomically and read back")
{
    const auto path = (std::filesystem::temp_directory_path() / "mtb_test_text.csv").string();
    write_text_file(path, "x,y\n1,2\n");
    CHECK(read_text_file(path) == "x,y\n1,2\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_text_file(path), IoError);
}

TEST_CASE("svg charts are deterministic and contain one element per datum")
{
    const std::vector<BoxStats> boxes{{"1%", "edit", 0.9, 0.85, 0.95, 0.8, 1.0},
                                      {"1%", "path", 0.95, 0.9, 1.0, 0.85, 1.0},
                                      {"5%", "edit", 0.7, 0.6, 0.8, 0.5, 0.9},
                                      {"5%", "path", 0.8, 0.7, 0.9, 0.6, 1.0}};
    const auto box = svg_box_plot(boxes, "scores");
    CHECK(box == svg_box_plot(boxes, "scores"));
    CHECK(box.rfind("<svg", 0) == 0);
    CHECK(box.find("</svg>") != std::string::npos);
    CHECK(count_of(box, "class=\"box\"") == 4);

    const std::vector<std::string> labels{"edit", "path"};
    const auto heat = svg_heat_map(labels, {{100.0, 40.0}, {std::nullopt, 100.0}}, "similarity");
    CHECK(count_of(heat, "class=\"cell\"") == 3);
    CHECK(count_of(heat, "class=\"missing\"") == 1);

    const auto bars = svg_stacked_bars({{"edit", {3.0, 2.0}}, {"path", {4.0, 0.0}}}, {"leaf", "saddle"}, "pairs");
    CHECK(count_of(bars, "class=\"bar\"") == 4);

    const auto hist = svg_histogram({{2, 3}, {5, 1}}, "lengths");
    CHECK(count_of(hist, "class=\"bin\"") == 2);
}

TEST_CASE("config text parsing")
{
    using namespace mtb::cli;
    const auto entries = parse_config_text("# experiment\nsteps = 12\n\ntaus = 0.01, 0.05 # two\nmethods=edit,path\n");
    ExperimentConfig c;
    apply_config(c, entries);
    CHECK(c.steps == 12);
    CHECK(c.taus == std::vector<double>{0.01, 0.05});
    CHECK(c.methods == std::vector<Method>{Method::ConstrainedEdit, Method::PathMapping});
    CHECK_NOTHROW(c.validate());

    CHECK_THROWS_AS(parse_config_text("steps 12\n"), UsageError);
    CHECK_THROWS_AS(apply_config(c, {{"colour", "blue"}}), UsageError);
    CHECK_THROWS_AS(apply_config(c, {{"steps", "twelve"}}), UsageError);
    CHECK_THROWS_AS(apply_config(c, {{"methods", "fastest"}}), UsageError);
    CHECK_THROWS_AS(apply_config(c, {{"seed", "-3"}}), UsageError);

    ExperimentConfig bad;
    bad.simplify = 1.5;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = {};
    bad.taus = {0.0};
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = {};
    bad.methods.clear();
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = {};
    bad.steps = 1;
    CHECK_THROWS_AS(bad.validate(), UsageError);
}
