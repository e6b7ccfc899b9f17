#include <gtest/gtest.h>

#include <ontoguard/ingest.hpp>
#include <ontoguard/query.hpp>

#include "oracles.hpp"

using namespace ontoguard;

namespace {

const OntologySchema& schema() {
  static const OntologySchema s = load_bundled_schema();
  return s;
}

const char* kQuality[] = {"Defocus_Blur_None", "Gaussian_Blur_None", "Haze_Blur_None", "Motion_Blur_None",
                          "Contrast_High",     "Illumination_Day_High", "Occlusion_None", "Resolution=480"};

std::string image_rows(const std::string& id, const std::vector<std::string>& domain_rows,
                       std::vector<std::string> quality = {std::begin(kQuality), std::end(kQuality)}) {
  std::string out;
  for (const auto& d : domain_rows) out += id + ",640,480,domain," + d + "\n";
  for (const auto& q : quality) out += id + ",640,480,quality," + q + ",,,,\n";
  return out;
}

std::string csv(const std::string& body) { return std::string(kAnnotationHeader) + "\n" + body; }

std::string error_of(const std::string& text) {
  try {
    parse_annotations(text, schema());
  } catch (const AnnotationError& e) {
    return e.what();
  }
  return "";
}

bool has(const Graph& g, const std::string& s, const std::string& p, const Term& o) {
  return g.contains(Triple(Term::iri(s), Term::iri(p), o));
}

}  // namespace

TEST(Ingest, MinimalRecordBuildsExpectedTriples) {
  auto recs = parse_annotations(csv(image_rows("img001", {"Police_Car,10,20,200,120"})), schema());
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].rows.size(), 9u);
  Graph g = build_kg(recs, schema());
  const std::string img = vocab::kImage.data() + std::string("img001");
  const Term part = Term::iri(vocab::has_part());
  EXPECT_TRUE(has(g, img, vocab::rdf_type(), Term::iri(vocab::domain("Image"))));
  EXPECT_TRUE(has(g, img, vocab::domain("width"), Term::integer(640)));
  EXPECT_TRUE(has(g, img, vocab::has_part(), Term::iri(vocab::domain("Police_Car"))));
  EXPECT_TRUE(has(g, img, vocab::has_part(), Term::iri(vocab::domain("Police_Vehicle"))));
  EXPECT_TRUE(has(g, img, vocab::has_part(), Term::iri(vocab::domain("Safety_Rescue_Vehicle"))));
  EXPECT_TRUE(has(g, img, vocab::has_part(), Term::iri(vocab::quality("Resolution_High"))));
  EXPECT_TRUE(has(g, img + "__box1", vocab::domain("depicts"), Term::iri(vocab::domain("Police_Car"))));
  EXPECT_TRUE(has(g, img + "__box1", vocab::domain("w"), Term::integer(200)));
  // Police_Car with its 3 ancestors, plus 8 quality bins.
  EXPECT_EQ(g.count({Term::iri(img), part, std::nullopt}), 12u);
}

TEST(Ingest, TwoBoxesOfOneClassGiveOneImageLabel) {
  auto recs = parse_annotations(
      csv(image_rows("a", {"Tow_Truck,0,0,10,10", "Tow_Truck,20,20,10,10"})), schema());
  Graph g = build_kg(recs, schema());
  const Term tow = Term::iri(vocab::domain("Tow_Truck"));
  EXPECT_EQ(g.count({std::nullopt, Term::iri(vocab::has_part()), tow}), 1u);
  EXPECT_EQ(g.count({std::nullopt, Term::iri(vocab::domain("depicts")), tow}), 2u);
}

TEST(Ingest, OutOfRangeMeasurementIsRecorded) {
  std::vector<std::string> q(std::begin(kQuality), std::end(kQuality));
  q[0] = "Defocus_Blur=30";
  q[6] = "Occlusion=0.95";
  Graph g = build_kg(parse_annotations(csv(image_rows("x", {"Ambulance,1,1,5,5"}, q)), schema()), schema());
  const std::string img = std::string(vocab::kImage) + "x";
  EXPECT_TRUE(has(g, img, vocab::quality("outOfRange"), Term::iri(vocab::quality("Defocus_Blur"))));
  EXPECT_TRUE(has(g, img, vocab::quality("outOfRange"), Term::iri(vocab::quality("Occlusion"))));
}

TEST(Ingest, MeasurementsAreBinnedHalfOpen) {
  std::vector<std::string> q(std::begin(kQuality), std::end(kQuality));
  q[0] = "Defocus_Blur=15";
  q[5] = "Illumination=1000";
  q[7] = "Resolution=64";
  Graph g = build_kg(parse_annotations(csv(image_rows("x", {"Ambulance,1,1,5,5"}, q)), schema()), schema());
  const std::string img = std::string(vocab::kImage) + "x";
  EXPECT_TRUE(has(g, img, vocab::has_part(), Term::iri(vocab::quality("Defocus_Blur_High"))));
  EXPECT_TRUE(has(g, img, vocab::has_part(), Term::iri(vocab::quality("Illumination_Day_Low"))));
  EXPECT_TRUE(has(g, img, vocab::has_part(), Term::iri(vocab::quality("Resolution_Medium"))));
}

TEST(Ingest, RejectsUnknownDomainClass) {
  EXPECT_NE(error_of(csv(image_rows("a", {"Submarine,0,0,1,1"}))).find("line 2: unknown domain class 'Submarine'"),
            std::string::npos);
}

TEST(Ingest, RejectsMissingAndDuplicateCharacteristics) {
  std::vector<std::string> q(std::begin(kQuality), std::end(kQuality));
  q.pop_back();
  EXPECT_NE(error_of(csv(image_rows("a", {"Tow_Truck,0,0,1,1"}, q))).find("missing its Resolution"), std::string::npos);
  q.push_back("Resolution_Low");
  q.push_back("Resolution=100");
  EXPECT_NE(error_of(csv(image_rows("a", {"Tow_Truck,0,0,1,1"}, q))).find("duplicate Resolution"), std::string::npos);
}

TEST(Ingest, RejectsMalformedRows) {
  EXPECT_NE(error_of("id,w,h\n").find("bad header"), std::string::npos);
  EXPECT_NE(error_of(csv(image_rows("a", {"Tow_Truck,600,0,100,10"}))).find("outside image"), std::string::npos);
  EXPECT_NE(error_of(csv(image_rows("a", {"Tow_Truck,0,0,1"}))).find("expected 9 fields"), std::string::npos);
  EXPECT_NE(error_of(csv("a,0,480,domain,Tow_Truck,0,0,1,1\n")).find("width and height"), std::string::npos);
  EXPECT_NE(error_of(csv(image_rows("a", {"Tow_Truck,0,0,1,1"}) + "a,640,481,domain,Tow_Truck,0,0,1,1\n"))
                .find("inconsistent dimensions"),
            std::string::npos);
  EXPECT_NE(error_of(csv(image_rows("a", {}))).find("no domain label"), std::string::npos);
  EXPECT_NE(error_of(csv("a,640,480,quality,Occlusion_None,1,,,\n")).find("leave x,y,w,h empty"), std::string::npos);
  EXPECT_NE(error_of(csv("a,640,480,quality,Sharpness=3,,,,\n")).find("unknown quality characteristic"),
            std::string::npos);
  EXPECT_NE(error_of(csv("a,640,480,label,Tow_Truck,0,0,1,1\n")).find("kind must be"), std::string::npos);
}

TEST(Ingest, HeaderOnlyFileGivesEmptyGraph) {
  auto recs = parse_annotations(csv(""), schema());
  EXPECT_TRUE(recs.empty());
  EXPECT_EQ(build_kg(recs, schema()).size(), 0u);
}

TEST(Ingest, ImageIdsArePercentEncoded) {
  EXPECT_EQ(image_iri("a b/c"), std::string(vocab::kImage) + "a%20b%2Fc");
  EXPECT_EQ(image_iri("ok_1-2"), std::string(vocab::kImage) + "ok_1-2");
}

TEST(Ingest, CountsArePreservedAndWriterRoundTrips) {
  std::string body;
  const char* classes[] = {"Tow_Truck", "Police_Car", "Ambulance", "Police_SUV"};
  for (int i = 0; i < 40; ++i)
    body += image_rows("im" + std::to_string(i), {std::string(classes[i % 4]) + ",0,0,5,5",
                                                  std::string(classes[(i / 4) % 4]) + ",5,5,5,5"});
  auto recs = parse_annotations(csv(body), schema());
  Graph g = build_kg(recs, schema());
  const std::vector<Triple> all = g.match({});
  for (const char* c : classes) {
    std::set<std::string> want;
    for (const auto& r : recs)
      for (const auto& row : r.rows)
        if (row.kind == LabelKind::Domain && row.value == c) want.insert(r.image_id);
    auto got = oracle::scan(all, std::nullopt, Term::iri(vocab::has_part()), Term::iri(vocab::domain(c)));
    EXPECT_EQ(got.size(), want.size()) << c;
  }
  auto again = parse_annotations(write_annotations(recs), schema());
  EXPECT_TRUE(same_triples(build_kg(again, schema()), g));
  EXPECT_EQ(write_annotations(again), write_annotations(recs));
}
