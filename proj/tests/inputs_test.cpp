#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "smellhunter/inputs/parse.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace smellhunter;
using namespace smellhunter::inputs;

namespace {

bool has_kind(const InputErrors& errors, InputErrorKind kind) {
    for (const auto& e : errors)
        if (e.kind == kind) return true;
    return false;
}

}  // namespace

TEST(MetricTableParse, SingleRowExample) {
    auto t = parse_metric_table("entity_id,wmc,atfd,tcc\nOrderManager,50,6,0.2");
    ASSERT_TRUE(t);
    EXPECT_EQ(t->columns, (std::vector<std::string>{"wmc", "atfd", "tcc"}));
    ASSERT_EQ(t->rows.size(), 1u);
    EXPECT_EQ(t->rows[0].entity_id, "OrderManager");
    EXPECT_EQ(t->rows[0].values, (std::vector<double>{50, 6, 0.2}));
    EXPECT_EQ(t->column_index("tcc"), 2u);
    EXPECT_EQ(t->row_values(0).at("atfd"), 6);
}

TEST(MetricTableParse, HeaderOnlyIsAnEmptyTable) {
    auto t = parse_metric_table("entity_id,wmc\n");
    ASSERT_TRUE(t);
    EXPECT_TRUE(t->rows.empty());
    EXPECT_EQ(t->columns.size(), 1u);
}

TEST(MetricTableParse, NonNumericCellIsPositioned) {
    auto t = parse_metric_table("entity_id,wmc\nA,abc");
    ASSERT_FALSE(t);
    ASSERT_EQ(t.error().size(), 1u);
    const auto& e = t.error()[0];
    EXPECT_EQ(e.kind, InputErrorKind::non_numeric);
    EXPECT_EQ(e.row, 2u);
    EXPECT_EQ(e.field, "wmc");
    EXPECT_EQ(e.line, 2u);
    EXPECT_EQ(e.column, 3u);
}

TEST(MetricTableParse, Rfc4180Features) {
    auto t = parse_metric_table("\xEF\xBB\xBF" "entity_id,loc\r\n\"Order,Manager\",1\r\n\"say \"\"hi\"\"\", 2.5 \r\n\r\n\"multi\nline\",-3\r\n");
    ASSERT_TRUE(t) << t.error()[0].describe();
    ASSERT_EQ(t->rows.size(), 3u);
    EXPECT_EQ(t->rows[0].entity_id, "Order,Manager");
    EXPECT_EQ(t->rows[1].entity_id, "say \"hi\"");
    EXPECT_EQ(t->rows[1].values[0], 2.5);
    EXPECT_EQ(t->rows[2].entity_id, "multi\nline");
}

TEST(MetricTableParse, StructuralErrors) {
    struct Case {
        const char* text;
        InputErrorKind kind;
    };
    const Case cases[] = {
        {"", InputErrorKind::missing_header},
        {"id,wmc\nA,1", InputErrorKind::missing_entity_id},
        {"entity_id,wmc,wmc\nA,1,2", InputErrorKind::duplicate_column},
        {"entity_id,1wmc\nA,1", InputErrorKind::invalid_identifier},
        {"entity_id,wmc\nA,1,2", InputErrorKind::ragged_row},
        {"entity_id,wmc\nA", InputErrorKind::ragged_row},
        {"entity_id,wmc\n,1", InputErrorKind::empty_entity_id},
        {"entity_id,wmc\nA,1\nA,2", InputErrorKind::duplicate_entity},
        {"entity_id,wmc\nA,nan", InputErrorKind::non_finite},
        {"entity_id,wmc\nA,1e999", InputErrorKind::non_finite},
        {"entity_id,wmc\nA,", InputErrorKind::non_numeric},
        {"entity_id,wmc\n\"A,1", InputErrorKind::malformed},
        {"entity_id,wmc\nA\"x\",1", InputErrorKind::malformed},
    };
    for (const auto& c : cases) {
        auto t = parse_metric_table(c.text);
        ASSERT_FALSE(t) << c.text;
        EXPECT_TRUE(has_kind(t.error(), c.kind)) << c.text << " -> " << t.error()[0].describe();
        for (const auto& e : t.error()) EXPECT_TRUE(e.positioned()) << c.text;
    }
}

TEST(MetricTableParse, AccumulatesIndependentDefects) {
    auto t = parse_metric_table("entity_id,wmc,atfd\nA,x,1\nB,2\nA,3,4\nC,4,inf\n");
    ASSERT_FALSE(t);
    EXPECT_GE(t.error().size(), 4u);
    EXPECT_TRUE(has_kind(t.error(), InputErrorKind::non_numeric));
    EXPECT_TRUE(has_kind(t.error(), InputErrorKind::ragged_row));
    EXPECT_TRUE(has_kind(t.error(), InputErrorKind::duplicate_entity));
}

TEST(Thresholds, Examples) {
    auto t = parse_thresholds(fixtures::kGodClassThresholds);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->entries.size(), 3u);
    EXPECT_EQ(t->entries.at("ONE_THIRD"), 0.33);
    EXPECT_EQ(t->entries.at("WMC_VERY_HIGH"), 47);

    auto empty = parse_thresholds("{}");
    ASSERT_TRUE(empty);
    EXPECT_TRUE(empty->entries.empty());

    auto bad = parse_thresholds(R"({"FEW": "five"})");
    ASSERT_FALSE(bad);
    ASSERT_EQ(bad.error().size(), 1u);
    EXPECT_EQ(bad.error()[0].field, "FEW");
    EXPECT_EQ(bad.error()[0].kind, InputErrorKind::non_numeric);
}

TEST(Thresholds, Errors) {
    auto malformed = parse_thresholds("{\n  \"FEW\": 5,\n  oops\n}");
    ASSERT_FALSE(malformed);
    EXPECT_EQ(malformed.error()[0].kind, InputErrorKind::malformed);
    EXPECT_EQ(malformed.error()[0].line, 3u);

    auto dup = parse_thresholds(R"({"FEW": 5, "FEW": 6})");
    ASSERT_FALSE(dup);
    EXPECT_TRUE(has_kind(dup.error(), InputErrorKind::duplicate_key));

    auto ident = parse_thresholds(R"({"not-ident": 5, "9x": 1, "ok": 2})");
    ASSERT_FALSE(ident);
    EXPECT_EQ(ident.error().size(), 2u);

    EXPECT_FALSE(parse_thresholds("[1, 2]"));
    EXPECT_FALSE(parse_thresholds(R"({"A": {"B": 1}})"));
    EXPECT_FALSE(parse_thresholds(R"({"A": true})"));
    EXPECT_FALSE(parse_thresholds(R"({"A": 1e999})"));
}

TEST(Metadata, FullAndMinimal) {
    auto m = parse_metadata(fixtures::kMetadata);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->user_id, "dev-7");
    EXPECT_EQ(m->org_id, "acme");
    EXPECT_EQ(m->project_id, "shop");
    EXPECT_EQ(m->language, "java");
    ASSERT_TRUE(m->location);
    EXPECT_EQ(m->location->latitude, -23.55);
    EXPECT_EQ(m->location->longitude, -46.63);

    auto minimal = parse_metadata(R"({"user_id":"u","org_id":"o","project_id":"p","file_path":"","language":""})");
    ASSERT_TRUE(minimal);
    EXPECT_FALSE(minimal->location);
}

TEST(Metadata, Errors) {
    const std::string base = R"("user_id":"u","org_id":"o","project_id":"p","file_path":"f","language":"c")";
    struct Case {
        std::string text;
        InputErrorKind kind;
        const char* field;
    };
    const Case cases[] = {
        {"{" + base + R"(,"latitude":95,"longitude":0})", InputErrorKind::out_of_range, "latitude"},
        {"{" + base + R"(,"latitude":0,"longitude":-180.5})", InputErrorKind::out_of_range, "longitude"},
        {"{" + base + R"(,"latitude":10})", InputErrorKind::unpaired_coordinate, "latitude"},
        {"{" + base + R"(,"longitude":10})", InputErrorKind::unpaired_coordinate, "longitude"},
        {"{" + base + R"(,"latitude":"north","longitude":1})", InputErrorKind::wrong_type, "latitude"},
        {"{" + base + R"(,"colour":"red"})", InputErrorKind::unknown_key, "colour"},
        {R"({"org_id":"o","project_id":"p","file_path":"f","language":"c"})", InputErrorKind::missing_key, "user_id"},
        {R"({"user_id":"","org_id":"o","project_id":"p","file_path":"f","language":"c"})", InputErrorKind::empty_value,
         "user_id"},
        {R"({"user_id":7,"org_id":"o","project_id":"p","file_path":"f","language":"c"})", InputErrorKind::wrong_type,
         "user_id"},
    };
    for (const auto& c : cases) {
        auto m = parse_metadata(c.text);
        ASSERT_FALSE(m) << c.text;
        bool found = false;
        for (const auto& e : m.error()) found |= e.kind == c.kind && e.field == c.field;
        EXPECT_TRUE(found) << c.text << " -> " << m.error()[0].describe();
    }
}

TEST(Metadata, AccumulatesIndependentDefects) {
    auto m = parse_metadata(R"({"user_id":"","org_id":"","latitude":100,"longitude":200,"extra":1})");
    ASSERT_FALSE(m);
    // two empty values, three missing keys, two bad coordinates, one unknown key
    EXPECT_GE(m.error().size(), 8u);
}

TEST(Emit, RoundTrips) {
    auto t = parse_metric_table("entity_id,wmc,tcc\n\"a,b\",1,0.1\nq\"uote,2,0.30000000000000004\n");
    ASSERT_FALSE(t);  // a quote inside an unquoted field is malformed

    MetricTable table{{"wmc", "tcc"}, {{"a,b", {1, 0.1}}, {"say \"x\"", {-2.5, 0.1 + 0.2}}, {"line\nbreak", {1e-9, 5e20}}}};
    auto back = parse_metric_table(emit_metric_table(table));
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, table);

    ThresholdConfig cfg{{{"A", 0.33}, {"B", -1e-12}, {"C", 47}}};
    EXPECT_EQ(parse_thresholds(emit_thresholds(cfg)).value(), cfg);

    auto meta = parse_metadata(fixtures::kMetadata).value();
    EXPECT_EQ(parse_metadata(emit_metadata(meta)).value(), meta);
    meta.location.reset();
    EXPECT_EQ(parse_metadata(emit_metadata(meta)).value(), meta);
}

TEST(Emit, RandomTablesRoundTrip) {
    testgen::Rng rng(5);
    const std::string alphabet = "abcXYZ09_ ,\"\n-.";
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        MetricTable t;
        const int cols = std::uniform_int_distribution<int>(0, 5)(rng);
        for (int c = 0; c < cols; ++c) t.columns.push_back("m" + std::to_string(c));
        const int rows = std::uniform_int_distribution<int>(0, 10)(rng);
        for (int r = 0; r < rows; ++r) {
            MetricRow row;
            const int len = std::uniform_int_distribution<int>(1, 8)(rng);
            for (int k = 0; k < len; ++k) row.entity_id += testgen::pick(rng, std::vector<char>(alphabet.begin(), alphabet.end()));
            row.entity_id += "#" + std::to_string(r);
            for (int c = 0; c < cols; ++c) row.values.push_back(val(rng));
            t.rows.push_back(row);
        }
        auto back = parse_metric_table(emit_metric_table(t));
        ASSERT_TRUE(back) << emit_metric_table(t);
        EXPECT_EQ(*back, t);
    }
}

TEST(Totality, ArbitraryBytesNeverCrashAndAlwaysExplain) {
    testgen::Rng rng(77);
    const std::string seeds[] = {fixtures::kGodClassMetrics, fixtures::kGodClassThresholds, fixtures::kMetadata};
    const std::string noise = "\",{}[]:\n\r\\ 0123456789.-+eEaZ_\x00\xff\xc3";
    for (int i = 0; i < 3000; ++i) {
        std::string text = seeds[i % 3];
        const int edits = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int k = 0; k < edits; ++k) {
            if (text.empty()) text.push_back('x');
            std::size_t pos = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
            char c = noise[std::uniform_int_distribution<std::size_t>(0, noise.size() - 1)(rng)];
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
                case 0: text[pos] = c; break;
                case 1: text.insert(text.begin() + static_cast<long>(pos), c); break;
                default: text.erase(pos, 1);
            }
        }
        auto check = [&](const auto& result) {
            if (!result) {
                ASSERT_FALSE(result.error().empty()) << text;
                for (const auto& e : result.error()) EXPECT_TRUE(e.positioned()) << text << " " << e.describe();
            }
        };
        check(parse_metric_table(text));
        check(parse_thresholds(text));
        check(parse_metadata(text));
    }
}

TEST(Checks, ValuesBuiltInMemory) {
    MetricTable t{{"wmc", "bad-name"}, {{"", {1, 2}}, {"A", {std::nan(""), 1}}, {"A", {1}}}};
    auto errors = check_metric_table(t);
    EXPECT_TRUE(has_kind(errors, InputErrorKind::invalid_identifier));
    EXPECT_TRUE(has_kind(errors, InputErrorKind::empty_entity_id));
    EXPECT_TRUE(has_kind(errors, InputErrorKind::non_finite));
    EXPECT_TRUE(has_kind(errors, InputErrorKind::duplicate_entity));
    EXPECT_TRUE(has_kind(errors, InputErrorKind::ragged_row));

    EXPECT_FALSE(check_thresholds(ThresholdConfig{{{"X", INFINITY}}}).empty());
    EXPECT_TRUE(check_thresholds(ThresholdConfig{{{"X", 1}}}).empty());

    ContextMetadata meta{"u", "", "p", "f", "java", GeoPoint{91, 0}};
    auto merrs = check_metadata(meta);
    EXPECT_TRUE(has_kind(merrs, InputErrorKind::empty_value));
    EXPECT_TRUE(has_kind(merrs, InputErrorKind::out_of_range));
}
