#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace ainf;
using support::Q;

namespace {

const Q one = Q::from_int(1);

const char* dual_numbers = R"({
  "field": {"kind": "rational"},
  "spaces": {"D": {"dims": {"0": 2}}},
  "complexes": {"D": {"space": "D", "differential": {"degree": -1, "blocks": {}}}},
  "structures": {
    "dual": {
      "complex": "D",
      "truncation": 4,
      "products": {"2": {"degree": 0, "blocks": {"0,0": [[[0, 0], 0, "1"], [[0, 1], 1, "1"], [[1, 0], 1, "1"]]}}}
    }
  }
})";

/// Instance, full transfer and a certificate between two lifts, all in one
/// bundle.
template <Field K>
Bundle<K> rich_bundle(std::uint64_t seed, const Profile& p, const FieldSpec& field) {
  const K unit = field.template unit<K>();
  const Instance<K> inst = generate_instance<K>(seed, p, unit);
  Bundle<K> b;
  b.field = field;
  b.metadata.truncation = p.truncation;
  b.metadata.seed = seed;
  NamedEquivalence e;
  e.source = b.add_complex("A", inst.structure.complex());
  e.target = b.add_complex("B", inst.target);
  b.add_structure("mu", inst.structure);
  e.f = b.add_map("f", inst.data.f);
  e.g = b.add_map("g", inst.data.g);
  e.h = b.add_map("h", inst.data.h);
  if (inst.data.k) e.k = b.add_map("k", *inst.data.k);
  b.equivalences.emplace("equivalence", e);

  const TransferResult<K> t = full_transfer(inst.structure, inst.target, inst.data);
  NamedTransfer nt;
  nt.structure = b.add_structure("transfer.nu", t.nu, true);
  nt.F = b.add_morphism("transfer.F", t.F);
  nt.G = b.add_morphism("transfer.G", t.G);
  nt.H = b.add_homotopy("transfer.H", t.H);
  b.transfers.emplace("transfer", nt);

  const LiftResult<K> l1 = opfibration_lift(inst.structure, inst.target, inst.data.f, {seed});
  const LiftResult<K> l2 = opfibration_lift(inst.structure, inst.target, inst.data.f, {seed + 1});
  using Side = typename GivenIsotopy<K>::Side;
  const SquareCertificate<K> c =
      connect_lifts(l1.F, l2.F, GivenIsotopy<K>{Side::source, identity(inst.structure)});
  NamedCertificate nc;
  nc.left = b.add_morphism("square.left", c.left);
  nc.right = b.add_morphism("square.right", c.right);
  nc.S = b.add_morphism("square.S", c.S);
  nc.T = b.add_morphism("square.T", c.T);
  nc.eta = b.add_homotopy("square.eta", c.eta);
  b.certificates.emplace("square", nc);
  return b;
}

std::string error_path(const std::string& text) {
  try {
    parse_text<Q>(text);
  } catch (const InputError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Format, DualNumbersParseAndVerify) {
  const Bundle<Q> b = parse_text<Q>(dual_numbers);
  const AInfAlgebra<Q>& a = b.structures.at("dual").value;
  EXPECT_EQ(a.truncation(), 4);
  EXPECT_EQ(a.mu(2).nnz(), 3u);
  EXPECT_TRUE(verify(a).passed);
}

TEST(Format, EmitParseEmitIsByteExact) {
  const std::vector<std::string> profiles{"flavor=b,algebra=exterior,cones=1,N=4,cone_degrees=0",
                                          "flavor=c,algebra=dual,cones=2,N=4,cone_degrees=1;-1",
                                          "flavor=a,algebra=triangular,cones=0,N=3"};
  std::uint64_t seed = 1;
  for (const auto& p : profiles) {
    const Bundle<Q> b = rich_bundle<Q>(seed++, Profile::parse(p), FieldSpec{});
    const std::string text = emit_text(b);
    const Bundle<Q> back = parse_text<Q>(text);
    EXPECT_EQ(emit_text(back), text) << p;
    EXPECT_EQ(back.structures.at("mu").value, b.structures.at("mu").value);
    EXPECT_EQ(back.morphisms.at("transfer.F").value, b.morphisms.at("transfer.F").value);
    EXPECT_TRUE(verify_certificate(certificate(back, back.certificates.at("square"))).passed);
    const NamedEquivalence& e = back.equivalences.at("equivalence");
    EXPECT_TRUE(check_equivalence_data(back.complexes.at(e.source).value, back.complexes.at(e.target).value,
                                       equivalence_data(back, e))
                    .passed);
  }
}

TEST(Format, PrimeFieldRoundTrip) {
  const FieldSpec field{7};
  Profile p = Profile::parse("flavor=c,algebra=dual,cones=1,N=4,cone_degrees=0,field=F7");
  const Bundle<ModP> b = rich_bundle<ModP>(3, p, field);
  const std::string text = emit_text(b);
  const nlohmann::json j = parse_json_text(text);
  EXPECT_EQ(peek_field(j).prime, 7u);
  const Bundle<ModP> back = parse_bundle<ModP>(j);
  EXPECT_EQ(emit_text(back), text);
  EXPECT_TRUE(verify_certificate(certificate(back, back.certificates.at("square"))).passed);
  // Scalars are written as canonical residues.
  EXPECT_EQ(text.find("\"-"), std::string::npos);
}

TEST(Format, EmptyObjectIsAValidFile) {
  const Bundle<Q> b = parse_text<Q>("{}");
  EXPECT_TRUE(b.spaces.empty());
  EXPECT_TRUE(b.structures.empty());
  EXPECT_EQ(b.metadata.truncation, 4);
  EXPECT_EQ(parse_text<Q>(emit_text(b)).metadata.tool_version, b.metadata.tool_version);
}

TEST(Format, ErrorsNameTheOffendingField) {
  EXPECT_EQ(error_path(R"({"complexes": {"C": {"space": "X", "differential": {"degree": -1, "blocks": {}}}}})"),
            "complexes.C.space");
  EXPECT_EQ(error_path("{\"spaces\": {\"V\": {\"dims\": {\"0\": 0}}}}"), "spaces.V.dims.0");
  EXPECT_EQ(error_path("{\"bogus\": 1}"), "");
  EXPECT_EQ(error_path("{\"format\": \"other\"}"), "format");
  EXPECT_EQ(error_path("{\"field\": {\"kind\": \"prime\", \"modulus\": 6}}"), "field.modulus");
  EXPECT_EQ(error_path("[1, 2"), "");
  std::string bad = dual_numbers;
  bad.replace(bad.find("\"degree\": 0"), 11, "\"degree\": 1");
  EXPECT_EQ(error_path(bad), "structures.dual.products.2");
  bad = dual_numbers;
  bad.replace(bad.find("[[1, 0], 1, \"1\"]"), 16, "[[1, 0], 2, \"1\"]");
  EXPECT_EQ(error_path(bad), "structures.dual.products.2.blocks[\"0,0\"][2]");
  bad = dual_numbers;
  bad.replace(bad.find("[[1, 0], 1, \"1\"]"), 16, "[[0, 1], 1, \"2\"]");
  EXPECT_EQ(error_path(bad), "structures.dual.products.2.blocks[\"0,0\"][2]");
}

TEST(Format, RationalScalarsAreCanonical) {
  std::string text = dual_numbers;
  text.replace(text.find("[[0, 1], 1, \"1\"]"), 16, "[[0, 1], 1, \"6/4\"]");
  const Bundle<Q> b = parse_text<Q>(text);
  EXPECT_NE(emit_text(b).find("\"3/2\""), std::string::npos);
  text.replace(text.find("\"6/4\""), 5, "\"1/0\"");
  EXPECT_THROW(parse_text<Q>(text), InputError);
}

TEST(Format, DocumentedExamplesAreCanonicalAndVerify) {
  for (const char* name : {"dual_numbers.json", "interval_cup.json", "transfer_result.json"}) {
    std::ifstream f(std::string(AINF_DOCS_DIR) + "/format/" + name, std::ios::binary);
    ASSERT_TRUE(f) << name;
    std::stringstream ss;
    ss << f.rdbuf();
    const Bundle<Q> b = parse_text<Q>(ss.str());
    EXPECT_EQ(emit_text(b), ss.str()) << name;
    for (const auto& [n, s] : b.structures) EXPECT_TRUE(verify(s.value).passed) << name << " " << n;
    for (const auto& [n, m] : b.morphisms) EXPECT_TRUE(verify(m.value).passed) << name << " " << n;
    for (const auto& [n, h] : b.homotopies) EXPECT_TRUE(verify(h.value).passed) << name << " " << n;
    for (const auto& [n, e] : b.equivalences)
      EXPECT_TRUE(check_equivalence_data(b.complexes.at(e.source).value, b.complexes.at(e.target).value,
                                         equivalence_data(b, e))
                      .passed)
          << name << " " << n;
  }
}
