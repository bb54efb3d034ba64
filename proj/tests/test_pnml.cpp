#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "petri/fixtures.hpp"
#include "petri/pnml.hpp"

using namespace petri;

namespace {

PnmlErrorCode error_of(const std::string& text) {
    try {
        parse_pnml(text);
    } catch (const PnmlError& e) {
        return e.code();
    }
    ADD_FAILURE() << "document parsed without error";
    return PnmlErrorCode::Unreadable;
}

std::string wrap(const std::string& body) {
    return "<?xml version=\"1.0\"?>\n<pnml><net id=\"n\" type=\"urn:any\"><page id=\"pg\">" + body +
           "</page></net></pnml>";
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(ParsePnml, MinimalNet) {
    const auto net = parse_pnml(wrap(R"(<place id="p"><initialMarking><text>1</text></initialMarking></place>
        <transition id="t"/><place id="q"/>
        <arc id="a1" source="p" target="t"/><arc id="a2" source="t" target="q"/>)"));
    EXPECT_EQ(net.place_count(), 2u);
    EXPECT_EQ(net.transition_count(), 1u);
    EXPECT_EQ(net.arc_count(), 2u);
    EXPECT_EQ(net.initial_marking().bit_string(), "10");
    EXPECT_NO_THROW(validate_workflow(net));
}

TEST(ParsePnml, NamesBecomeLabels) {
    const auto net = parse_pnml(wrap(R"(<place id="p"><name><text>Bark</text></name></place>)"));
    EXPECT_EQ(net.place(PlaceIndex{0}).label, std::optional<std::string>("Bark"));
}

TEST(ParsePnml, ExplicitZeroMarking) {
    const auto net = parse_pnml(wrap(R"(<place id="p"><initialMarking><text>0</text></initialMarking></place>)"));
    EXPECT_EQ(net.initial_marking().token_count(), 0u);
}

TEST(ParsePnml, Rejections) {
    EXPECT_EQ(error_of(wrap(R"(<place id="p"/><transition id="t"/>
        <arc id="a" source="p" target="t"><inscription><text>2</text></inscription></arc>)")),
              PnmlErrorCode::UnsupportedFeature);
    EXPECT_EQ(error_of(wrap(R"(<place id="p"><initialMarking><text>3</text></initialMarking></place>)")),
              PnmlErrorCode::UnsupportedFeature);
    EXPECT_EQ(error_of("<pnml><net id=\"a\"/><net id=\"b\"/></pnml>"), PnmlErrorCode::UnsupportedFeature);
    EXPECT_EQ(error_of(R"(<pnml><net id="n"><page id="a"><place id="p"/></page>
        <page id="b"><transition id="t"/><arc id="x" source="p" target="t"/></page></net></pnml>)"),
              PnmlErrorCode::UnsupportedFeature);
    EXPECT_EQ(error_of(wrap(R"(<place id="p"/><place id="p"/>)")), PnmlErrorCode::DuplicateId);
    EXPECT_EQ(error_of(wrap(R"(<place id="p"/><arc id="a" source="p" target="ghost"/>)")),
              PnmlErrorCode::DanglingArc);
    EXPECT_EQ(error_of("<pnml><net id=\"n\">"), PnmlErrorCode::MalformedDocument);
    EXPECT_EQ(error_of("<other/>"), PnmlErrorCode::MalformedDocument);
    EXPECT_EQ(error_of(wrap(R"(<place id="p"/><place id="q"/><arc id="a" source="p" target="q"/>)")),
              PnmlErrorCode::MalformedDocument);
}

TEST(ParsePnml, SyntaxErrorsCarryLine) {
    try {
        parse_pnml("<pnml>\n<net id=\"n\">\n<place id=\"p\">\n</net></pnml>");
        FAIL();
    } catch (const PnmlError& e) {
        EXPECT_EQ(e.location().rfind("line ", 0), 0u) << e.location();
    }
}

TEST(ParsePnml, AcceptsAnyNetType) {
    const auto doc = parse_pnml_document(wrap(R"(<place id="p"/>)"));
    EXPECT_EQ(doc.net_type_uri, "urn:any");
    EXPECT_EQ(doc.net_id, "n");
}

TEST(WritePnml, Figure1Shape) {
    const auto text = write_pnml(figure1_net().net, "figure1");
    EXPECT_EQ(count(text, "<place "), 6u);
    EXPECT_EQ(count(text, "<transition "), 4u);
    EXPECT_EQ(count(text, "<arc "), 10u);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text.find("<name>"), std::string::npos);  // figure 1 nodes carry no labels
}

TEST(WritePnml, Deterministic) {
    for (const auto& f : all_fixtures()) {
        EXPECT_EQ(write_pnml(f.net.net, f.name), write_pnml(f.net.net, f.name));
    }
}

TEST(RoundTrip, Fixtures) {
    for (const auto& f : all_fixtures()) {
        const auto text = write_pnml(f.net.net, f.name);
        const auto back = parse_pnml_document(text);
        EXPECT_TRUE(isomorphic(back.net, f.net.net)) << f.name;
        EXPECT_EQ(back.net, f.net.net) << f.name;
        EXPECT_EQ(write_pnml(back), text) << f.name;
    }
}

TEST(RoundTrip, CondensationCensusPreserved) {
    const auto c = census(parse_pnml(write_pnml(condensation_net().net)));
    EXPECT_EQ(c.places, 13u);
    EXPECT_EQ(c.transitions, 14u);
    EXPECT_EQ(c.arcs, 30u);
}

TEST(RoundTrip, GeneratedNets) {
    petri::testing::NetGenerator gen(3);
    for (int n = 0; n < 100; ++n) {
        const auto net = gen.perturbed(12, n % 4).build().net;
        const auto text = write_pnml(net);
        const auto back = parse_pnml(text);
        EXPECT_TRUE(isomorphic(back, net));
        EXPECT_EQ(write_pnml(back), text);
    }
}

TEST(RoundTrip, ToolExtrasPreserved) {
    const auto doc = parse_pnml_document(wrap(R"(
        <toolspecific tool="editor" version="2"><layer>3</layer></toolspecific>
        <place id="p"><graphics><position x="10" y="20"/></graphics></place>
        <transition id="t"><toolspecific tool="editor" version="2"><color>red &amp; blue</color></toolspecific></transition>
        <arc id="a" source="p" target="t"><graphics><offset x="1" y="1"/></graphics></arc>)"));
    const auto text = write_pnml(doc);
    EXPECT_NE(text.find(R"(<position x="10" y="20"/>)"), std::string::npos);
    EXPECT_NE(text.find("<color>red &amp; blue</color>"), std::string::npos);
    EXPECT_NE(text.find("<layer>3</layer>"), std::string::npos);
    EXPECT_NE(text.find(R"(<offset x="1" y="1"/>)"), std::string::npos);
    EXPECT_EQ(write_pnml(parse_pnml_document(text)), text);
}

TEST(ShippedFixtures, MatchCanonicalBytes) {
    for (const auto& f : all_fixtures()) {
        std::ifstream in(std::string(PETRI_FIXTURE_DIR) + "/" + f.name + ".pnml", std::ios::binary);
        ASSERT_TRUE(in) << f.name;
        std::stringstream buffer;
        buffer << in.rdbuf();
        EXPECT_EQ(buffer.str(), write_pnml(f.net.net, f.name)) << f.name;
    }
}
