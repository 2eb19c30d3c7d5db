#pragma once

// Command-line front end. run() is the whole program; the executable only
// forwards argv. Exit codes: 0 success, 1 verification failure, 2 input
// error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ainf/format.hpp"

namespace ainf::cli {

enum ExitCode { ok = 0, verification_failed = 1, input_error = 2 };

struct Options {
  std::string command;
  std::string in, out, object, structure, fwd, bwd, htpy, htpy_b, morphism, map, dir, left, right, given, first,
      second, isotopy, profile, name;
  std::optional<int> arity_max;
  std::optional<std::uint64_t> seed;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("", "cannot write '" + o.out + "'");
  f << text;
}

template <Field K>
class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  int run(Bundle<K> b) {
    b_ = std::move(b);
    const std::string& c = o_.command;
    if (c == "verify") return verify_cmd();
    if (c == "transfer") return transfer_cmd();
    if (c == "extend") return extend_cmd();
    if (c == "lift") return lift_cmd();
    if (c == "connect") return connect_cmd();
    if (c == "compose") return compose_cmd();
    throw InputError("", "unknown command '" + c + "'");
  }

 private:
  const MultiMap<K>& map(const std::string& flag, const std::string& name) const {
    auto it = b_.maps.find(name);
    if (it == b_.maps.end()) throw InputError(flag, "undefined map '" + name + "'");
    return it->second;
  }
  const AInfAlgebra<K>& structure(const std::string& flag, const std::string& name) const {
    auto it = b_.structures.find(name);
    if (it == b_.structures.end()) throw InputError(flag, "undefined structure '" + name + "'");
    return it->second.value;
  }
  const AInfMorphism<K>& morphism(const std::string& flag, const std::string& name) const {
    auto it = b_.morphisms.find(name);
    if (it == b_.morphisms.end()) throw InputError(flag, "undefined morphism '" + name + "'");
    return it->second.value;
  }
  /// A structure name stands for its identity morphism.
  AInfMorphism<K> isotopy(const std::string& flag, const std::string& name) const {
    if (auto it = b_.structures.find(name); it != b_.structures.end()) return identity(it->second.value);
    return morphism(flag, name);
  }
  /// The complex whose space is s.
  const ChainComplex<K>& complex_over(const std::string& flag, const GradedSpace& s) const {
    for (const auto& [n, c] : b_.complexes)
      if (c.value.space() == s) return c.value;
    throw InputError(flag, "no complex over space '" + s.name() + "'");
  }
  std::string prefix(const char* fallback) const { return o_.name.empty() ? fallback : o_.name; }

  int report(const CheckReport& r, const std::string& what) {
    if (r.passed) {
      out_ << "OK " << what << "\n";
      return ok;
    }
    out_ << "FAIL " << what << ": " << r.summary() << "\n";
    return verification_failed;
  }

  int emit() {
    write_output(o_, emit_text(b_), out_);
    return ok;
  }

  int verify_cmd() {
    const std::string& n = o_.object;
    auto limit = [&](int trunc) {
      const int a = o_.arity_max.value_or(trunc);
      if (a < 1 || a > trunc) throw InputError("--arity-max", "must be in 1.." + std::to_string(trunc));
      return a;
    };
    if (auto it = b_.structures.find(n); it != b_.structures.end()) {
      const auto& x = it->second.value;
      const int a = limit(x.truncation());
      return report(verify(x, a), "structure " + n + " up to arity " + std::to_string(a));
    }
    if (auto it = b_.morphisms.find(n); it != b_.morphisms.end()) {
      const auto& x = it->second.value;
      const int a = limit(x.truncation());
      return report(verify(x, a), "morphism " + n + " up to arity " + std::to_string(a));
    }
    if (auto it = b_.homotopies.find(n); it != b_.homotopies.end()) {
      const auto& x = it->second.value;
      const int a = limit(x.truncation());
      return report(verify(x, a), "homotopy " + n + " up to arity " + std::to_string(a));
    }
    if (auto it = b_.equivalences.find(n); it != b_.equivalences.end()) {
      const auto& e = it->second;
      const auto& a = b_.complexes.at(e.source).value;
      const auto& t = b_.complexes.at(e.target).value;
      CheckReport r = check_equivalence_data(a, t, equivalence_data(b_, e));
      return report(r, "equivalence " + n);
    }
    if (auto it = b_.certificates.find(n); it != b_.certificates.end())
      return report(verify_certificate(certificate(b_, it->second)), "certificate " + n);
    if (auto it = b_.transfers.find(n); it != b_.transfers.end()) {
      const auto& t = it->second;
      CheckReport r = verify(b_.structures.at(t.structure).value);
      const auto& F = b_.morphisms.at(t.F).value;
      const auto& G = b_.morphisms.at(t.G).value;
      const auto& H = b_.homotopies.at(t.H).value;
      r.merge(verify(F));
      r.merge(verify(G));
      r.merge(verify(H));
      if (!(H.from() == compose(G, F)) || !(H.to() == identity(F.source()))) {
        Violation v;
        v.equation = "transfer_homotopy_ends";
        r.violations.push_back(v);
        r.passed = false;
      }
      return report(r, "transfer " + n);
    }
    throw InputError("--object", "undefined object '" + n + "'");
  }

  int transfer_cmd() {
    const AInfAlgebra<K>& mu = structure("--structure", o_.structure);
    HomotopyEquivalenceData<K> d{map("--fwd", o_.fwd), map("--bwd", o_.bwd), map("--htpy", o_.htpy), std::nullopt};
    if (!o_.htpy_b.empty()) d.k = map("--htpy-b", o_.htpy_b);
    if (!(d.f.source() == mu.space())) throw InputError("--fwd", "map does not start at the structure's space");
    const ChainComplex<K>& target = complex_over("--fwd", d.f.target());
    const std::string p = prefix("transfer");
    if (!d.k) {
      TransferStructureResult<K> r = transfer_structure(mu, target, d);
      b_.add_structure(p + ".nu", r.nu);
      b_.add_morphism(p + ".G", r.G);
      return emit();
    }
    TransferResult<K> r = full_transfer(mu, target, d);
    NamedTransfer t;
    t.structure = b_.add_structure(p + ".nu", r.nu);
    t.F = b_.add_morphism(p + ".F", r.F);
    t.G = b_.add_morphism(p + ".G", r.G);
    t.H = b_.add_homotopy(p + ".H", r.H);
    if (b_.transfers.count(p)) throw InputError("--name", "transfer '" + p + "' already exists");
    b_.transfers.emplace(p, t);
    return emit();
  }

  int extend_cmd() {
    const AInfMorphism<K>& phi = morphism("--morphism", o_.morphism);
    const MultiMap<K>& g = map("--map", o_.map);
    const MultiMap<K>& h = map("--htpy", o_.htpy);
    std::map<int, MultiMap<K>> higher;
    if (o_.seed) {
      Rng rng(*o_.seed);
      higher = random_higher_homotopy(rng, phi.source().space(), phi.target().space(), phi.truncation(),
                                      b_.field.template unit<K>());
    }
    ExtensionResult<K> r = extend_homotopic_map(phi, g, h, higher);
    const std::string p = prefix("extend");
    b_.add_morphism(p + ".psi", r.psi);
    b_.add_homotopy(p + ".eta", r.eta);
    return emit();
  }

  int lift_cmd() {
    const AInfAlgebra<K>& x = structure("--structure", o_.structure);
    const MultiMap<K>& f = map("--map", o_.map);
    LiftOptions opt;
    opt.seed = o_.seed;
    LiftResult<K> r;
    if (o_.dir == "op") {
      if (!(f.source() == x.space())) throw InputError("--map", "map does not start at the structure's space");
      r = opfibration_lift(x, complex_over("--map", f.target()), f, opt);
    } else if (o_.dir == "fib") {
      if (!(f.target() == x.space())) throw InputError("--map", "map does not end at the structure's space");
      r = fibration_lift(x, complex_over("--map", f.source()), f, opt);
    } else {
      throw InputError("--dir", "expected op or fib");
    }
    const std::string p = prefix("lift");
    b_.add_structure(p + ".structure", r.structure);
    b_.add_morphism(p + ".F", r.F);
    return emit();
  }

  int connect_cmd() {
    const AInfMorphism<K>& l = morphism("--left", o_.left);
    const AInfMorphism<K>& r = morphism("--right", o_.right);
    const AInfMorphism<K> s = isotopy("--given-isotopy", o_.given);
    std::optional<MultiMap<K>> c;
    if (!o_.htpy.empty()) c = map("--htpy", o_.htpy);
    GivenIsotopy<K> given{GivenIsotopy<K>::Side::source, s};
    if (s.source() == l.source() && s.target() == r.source()) {
      given.side = GivenIsotopy<K>::Side::source;
    } else if (s.source() == l.target() && s.target() == r.target()) {
      given.side = GivenIsotopy<K>::Side::target;
    } else {
      throw InputError("--given-isotopy", "isotopy does not connect the sources or the targets of the two morphisms");
    }
    SquareCertificate<K> cert = connect_lifts(l, r, given, c);
    const std::string p = prefix("square");
    NamedCertificate nc;
    nc.left = o_.left;
    nc.right = o_.right;
    nc.S = b_.add_morphism(p + ".S", cert.S);
    nc.T = b_.add_morphism(p + ".T", cert.T);
    nc.eta = b_.add_homotopy(p + ".eta", cert.eta);
    if (b_.certificates.count(p)) throw InputError("--name", "certificate '" + p + "' already exists");
    b_.certificates.emplace(p, nc);
    return emit();
  }

  int compose_cmd() {
    const AInfMorphism<K>& f = morphism("--first", o_.first);
    const AInfMorphism<K>& y = morphism("--second", o_.second);
    const AInfMorphism<K> s = isotopy("--isotopy", o_.isotopy);
    if (!(s.source() == f.target()) || !(s.target() == y.source()))
      throw InputError("--isotopy", "isotopy does not connect the two morphisms");
    AInfMorphism<K> r = compose_arrows(f, y, s);
    b_.add_morphism(prefix("composite"), r);
    return emit();
  }

  const Options& o_;
  std::ostream& out_;
  Bundle<K> b_;
};

template <Field K>
int generate(const Options& o, const Profile& profile, const FieldSpec& field, std::ostream& out) {
  const std::uint64_t seed = o.seed.value_or(0);
  const Instance<K> inst = generate_instance<K>(seed, profile, field.template unit<K>());
  Bundle<K> b;
  b.field = field;
  b.metadata.truncation = profile.truncation;
  b.metadata.seed = seed;
  const std::string a = b.add_complex("A", inst.structure.complex());
  const std::string t = b.add_complex("B", inst.target);
  b.add_structure("mu", inst.structure);
  NamedEquivalence e;
  e.source = a;
  e.target = t;
  e.f = b.add_map("f", inst.data.f);
  e.g = b.add_map("g", inst.data.g);
  e.h = b.add_map("h", inst.data.h);
  if (inst.data.k) e.k = b.add_map("k", *inst.data.k);
  b.equivalences.emplace("equivalence", e);
  write_output(o, emit_text(b), out);
  return ok;
}

/// Runs one command; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact computations with A-infinity algebras", "ainf"};
  app.require_subcommand(1);
  app.set_help_flag("-h,--help");

  auto in_out = [&](CLI::App* s, bool needs_in) {
    if (needs_in) s->add_option("--in", o.in, "Input instance file")->required();
    s->add_option("--out", o.out, "Output file (stdout when absent)");
    s->add_option("--name", o.name, "Name (or prefix) for the produced objects");
  };
  CLI::App* verify_s = app.add_subcommand("verify", "Run the identity checkers on a named object");
  in_out(verify_s, true);
  verify_s->add_option("--object", o.object, "Object name")->required();
  verify_s->add_option("--arity-max", o.arity_max, "Highest arity to check");

  CLI::App* transfer_s = app.add_subcommand("transfer", "Transfer a structure along a chain homotopy equivalence");
  in_out(transfer_s, true);
  transfer_s->add_option("--structure", o.structure)->required();
  transfer_s->add_option("--fwd", o.fwd, "f : A -> B")->required();
  transfer_s->add_option("--bwd", o.bwd, "g : B -> A")->required();
  transfer_s->add_option("--htpy", o.htpy, "h on A with gf - 1 = dh + hd")->required();
  transfer_s->add_option("--htpy-b", o.htpy_b, "k on B with fg - 1 = dk + kd");

  CLI::App* extend_s = app.add_subcommand("extend", "Extend a homotopic chain map to a morphism");
  in_out(extend_s, true);
  extend_s->add_option("--morphism", o.morphism)->required();
  extend_s->add_option("--map", o.map, "g with g = f + dh + hd")->required();
  extend_s->add_option("--htpy", o.htpy, "h")->required();
  extend_s->add_option("--seed", o.seed, "Randomize the higher homotopy components");

  CLI::App* lift_s = app.add_subcommand("lift", "Lift a chain homotopy equivalence");
  in_out(lift_s, true);
  lift_s->add_option("--dir", o.dir, "op or fib")->required()->check(CLI::IsMember({"op", "fib"}));
  lift_s->add_option("--structure", o.structure)->required();
  lift_s->add_option("--map", o.map, "f : A -> B")->required();
  lift_s->add_option("--seed", o.seed, "Perturb the witnesses and free choices");

  CLI::App* connect_s = app.add_subcommand("connect", "Certify that two lifts agree up to isotopy and homotopy");
  in_out(connect_s, true);
  connect_s->add_option("--left", o.left)->required();
  connect_s->add_option("--right", o.right)->required();
  connect_s->add_option("--given-isotopy", o.given, "Isotopy morphism, or a structure for its identity")->required();
  connect_s->add_option("--htpy", o.htpy, "Chain homotopy between the linear parts");

  CLI::App* compose_s = app.add_subcommand("compose", "Compose two arrows through an isotopy");
  in_out(compose_s, true);
  compose_s->add_option("--first", o.first)->required();
  compose_s->add_option("--second", o.second)->required();
  compose_s->add_option("--isotopy", o.isotopy, "Isotopy morphism, or a structure for its identity")->required();

  CLI::App* gen_s = app.add_subcommand("gen", "Generate a seeded instance");
  in_out(gen_s, false);
  gen_s->add_option("--seed", o.seed)->required();
  gen_s->add_option("--profile", o.profile, "e.g. flavor=c,algebra=dual,cones=2,N=4,field=Q")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    if (o.command == "gen") {
      const bool has_field = o.profile.find("field=") != std::string::npos;
      Profile p = Profile::parse(o.profile);
      FieldSpec field{p.prime};
      if (!has_field) {
        field = FieldSpec::from_environment();
        p.prime = field.prime;
      }
      if (field.rational()) return generate<Rational>(o, p, field, out);
      return generate<ModP>(o, p, field, out);
    }
    const nlohmann::json j = parse_json_text(read_file(o.in));
    const FieldSpec field = peek_field(j);
    if (field.rational()) return Runner<Rational>(o, out).run(parse_bundle<Rational>(j));
    return Runner<ModP>(o, out).run(parse_bundle<ModP>(j));
  } catch (const VerificationFailure& e) {
    out << "FAIL " << e.what() << "\n";
    return verification_failed;
  } catch (const std::exception& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  }
}

}  // namespace ainf::cli
