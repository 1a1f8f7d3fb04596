// Copyright 2026 The ffinfra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ffinfra/curve_file.hpp"
#include "ffinfra/selftest.hpp"
#include "ffinfra/units.hpp"

namespace {

using namespace ffinfra;
using nlohmann::ordered_json;

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kSyntax = 2,
  kSemantic = 3,
  kUnsupported = 4,
  kMemoryCap = 5,
  kBadArgument = 6,
  kSelftestFailed = 7,
  kIo = 8,
  kInternal = 9,
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string curve;
  int threads = 0;
  long long mem_cap = -1;
  long long seed = -1;
  std::uint64_t bound = 100000;
  bool json = false;
  bool progress = false;
  std::string checkpoint;
  std::string ideal = "unit";
  std::string t;
  std::vector<std::string> operands;
  int samples = 100;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<int> ParseIntList(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("expected a comma-separated integer list: " + s);
    out.push_back(v);
  }
  return out;
}

std::string JoinInts(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// The loaded curve with every layer built on top of it.
struct Session {
  CurveFile file;
  std::unique_ptr<FunctionField> K;
  std::unique_ptr<IdealOps> I;
  std::unique_ptr<Boxes> B;
  std::unique_ptr<Infrastructure> X;
  std::uint64_t seed = 0;
  int threads = 1;
  std::uint64_t mem_cap = 0;

  explicit Session(const Options& o) {
    if (o.curve.empty()) throw std::invalid_argument("--curve is required");
    file = ParseCurve(ReadFile(o.curve));
    K = BuildField(file);
    I = std::make_unique<IdealOps>(*K);
    B = std::make_unique<Boxes>(*I);
    X = std::make_unique<Infrastructure>(*B);
    seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : file.seed;
    threads = o.threads > 0 ? o.threads : file.threads;
    mem_cap = o.mem_cap >= 0 ? static_cast<std::uint64_t>(o.mem_cap) : file.mem_cap;
  }

  std::string PlaceSummary() const {
    std::map<int, int> by_degree;
    for (auto& P : K->places()) ++by_degree[P.degree];
    std::string s;
    for (auto& [deg, count] : by_degree) s += (s.empty() ? "" : " ") + std::to_string(count) + "×deg" + std::to_string(deg);
    return s;
  }

  std::string DigestHex() const {
    ByteWriter w;
    w.U64(K->digest());
    return ToHex(w.Take());
  }

  ordered_json Header() const {
    ordered_json j;
    j["name"] = file.name;
    j["q"] = K->k().q();
    j["digest"] = DigestHex();
    j["seed"] = seed;
    return j;
  }

  // "unit", "prime:c:r" or the hex canonical bytes of an ideal.
  FracIdeal IdealArg(const std::string& s) const {
    if (s == "unit") return I->Unit();
    if (s.rfind("prime:", 0) == 0) {
      std::string rest = s.substr(6);
      std::replace(rest.begin(), rest.end(), ':', ',');
      auto parts = ParseIntList(rest);
      if (parts.size() != 2) throw std::invalid_argument("expected prime:c:r");
      auto P = I->DegreeOnePrime(K->k().FromInt(parts[0]), K->k().FromInt(parts[1]));
      if (!P) throw std::invalid_argument("no degree-one prime at " + s);
      return *P;
    }
    return I->FromCanonicalBytes(FromHex(s));
  }

  FRep FRepArg(const std::string& s) const {
    if (s == "identity") return X->Identity();
    return X->Parse(s);
  }
};

void Emit(const Options& o, const ordered_json& j, const std::string& text) {
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int CmdInfo(const Options& o) {
  Session s(o);
  const auto& K = *s.K;
  std::ostringstream os;
  os << "d=" << K.degree() << " g=" << K.genus() << " n=" << K.unit_rank() << " places: " << s.PlaceSummary() << "\n";
  ordered_json j = s.Header();
  j["d"] = K.degree();
  j["g"] = K.genus();
  j["n"] = K.unit_rank();
  std::vector<int> degs;
  for (auto& P : K.places()) degs.push_back(P.degree);
  j["place_degrees"] = degs;
  j["basis_source"] = SourceOf(s.file) == BasisSource::kSupplied ? "supplied"
                      : SourceOf(s.file) == BasisSource::kKummer ? "kummer"
                                                                 : "round2";
  Emit(o, j, os.str());
  return kOk;
}

int CmdPlaces(const Options& o) {
  Session s(o);
  const auto& K = *s.K;
  std::ostringstream os;
  ordered_json j = s.Header();
  j["places"] = ordered_json::array();
  for (auto& P : K.places()) {
    const bool dist = P.index == static_cast<int>(K.places().size());
    os << "place " << P.index << " degree " << P.degree << " ramification " << P.ram_index
       << (dist ? " distinguished" : "") << "\n";
    j["places"].push_back({{"index", P.index}, {"degree", P.degree}, {"ramification", P.ram_index}, {"distinguished", dist}});
  }
  Emit(o, j, os.str());
  return kOk;
}

int CmdReduce(const Options& o) {
  Session s(o);
  const FracIdeal a = s.IdealArg(o.ideal);
  std::vector<int> t = o.t.empty() ? std::vector<int>(s.K->unit_rank(), 0) : ParseIntList(o.t);
  Reduction r = s.X->Reduce(a, t);
  const std::string ser = s.X->Serialize(r.A);
  ordered_json j = s.Header();
  j["frep"] = ser;
  j["delta"] = r.delta;
  Emit(o, j, ser + "\ndelta=" + JoinInts(r.delta) + "\n");
  return kOk;
}

int CmdAdd(const Options& o) {
  Session s(o);
  if (o.operands.size() != 2) throw std::invalid_argument("add takes two f-representations");
  FRep C = s.X->Add(s.FRepArg(o.operands[0]), s.FRepArg(o.operands[1]));
  const std::string ser = s.X->Serialize(C);
  ordered_json j = s.Header();
  j["frep"] = ser;
  Emit(o, j, ser + "\n");
  return kOk;
}

ordered_json LatticeJson(const UnitLattice& L) { return ordered_json(L.basis); }

std::string LatticeText(const UnitLattice& L) {
  std::ostringstream os;
  for (auto& row : L.basis) {
    os << "  [";
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << row[k];
    os << "]\n";
  }
  return os.str();
}

int CmdRegulator(const Options& o) {
  Session s(o);
  FRepGroup G(*s.X);
  BsgsOptions opt;
  opt.threads = s.threads;
  opt.mem_cap_bytes = s.mem_cap;
  opt.checkpoint_path = o.checkpoint;
  const auto start = std::chrono::steady_clock::now();
  if (o.progress)
    opt.progress = [start, json = o.json, seed = s.seed](const BsgsProgress& p) {
      const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (json) {
        ordered_json j{{"seed", seed},       {"generator", p.generator}, {"ops", p.ops}, {"table", p.table},
                       {"baby", p.baby},     {"order", p.order},         {"seconds", sec}};
        std::cerr << j.dump() << "\n";
      } else {
        std::cerr << "seed " << seed << " generator " << p.generator << " ops " << p.ops << " table " << p.table
                  << " baby " << p.baby << " order " << p.order << " t=" << sec << "s\n";
      }
    };
  UnitLattice L = BsgsLattice(G, opt, s.K->digest());
  const std::uint64_t R = Regulator(L, *s.K);
  ordered_json j = s.Header();
  j["lattice"] = LatticeJson(L);
  j["det"] = L.det;
  j["regulator"] = R;
  j["group_ops"] = L.ops;
  j["threads"] = s.threads;
  std::ostringstream os;
  os << "lattice (Hermite normal form):\n" << LatticeText(L) << "det=" << L.det << "\nR=" << R << "\n";
  Emit(o, j, os.str());
  return kOk;
}

int CmdEnumerate(const Options& o) {
  Session s(o);
  FRepGroup G(*s.X);
  UnitLattice L = BruteForceLattice(G, o.bound);
  ordered_json j = s.Header();
  j["count"] = L.det;
  j["lattice"] = LatticeJson(L);
  j["regulator"] = Regulator(L, *s.K);
  std::ostringstream os;
  os << "|fRep(O_K)|=" << L.det << "\nlattice (Hermite normal form):\n" << LatticeText(L) << "R=" << Regulator(L, *s.K)
     << "\n";
  Emit(o, j, os.str());
  return kOk;
}

int CmdSelftest(const Options& o) {
  Session s(o);
  std::vector<SuiteResult> results;
  {
    SuiteResult g{"genus"};
    bool ok = true;
    try {
      s.B->GenusByRiemannRoch();
    } catch (const CurveError&) {
      ok = false;
    }
    g.Expect(ok, "dim L(m p) disagrees with the genus");
    results.push_back(g);
  }
  results.push_back(RiemannRochSuite(*s.B, o.samples, s.seed));
  results.push_back(GroupLawSuite(*s.X, o.samples, s.seed + 1));
  bool all = true;
  std::ostringstream os;
  ordered_json j = s.Header();
  j["suites"] = ordered_json::array();
  for (auto& r : results) {
    all = all && r.ok();
    os << (r.ok() ? "PASS " : "FAIL ") << r.name << " checks=" << r.checked << " failures=" << r.failures;
    if (!r.ok()) os << " first: " << r.first_failure;
    os << "\n";
    j["suites"].push_back(
        {{"name", r.name}, {"passed", r.ok()}, {"checks", r.checked}, {"failures", r.failures}, {"first_failure", r.first_failure}});
  }
  j["passed"] = all;
  Emit(o, j, os.str());
  return all ? kOk : kSelftestFailed;
}

// Prints the curve file with the normalized equation and computed bases.
int CmdBasis(const Options& o) {
  if (o.curve.empty()) throw std::invalid_argument("--curve is required");
  CurveFile cf = ParseCurve(ReadFile(o.curve));
  FieldInput in = BuildFieldInput(cf);
  FunctionField K(in);
  const Fq& F = K.k();
  const PolyRing& R = K.R();
  std::ostringstream os;
  if (!cf.name.empty()) os << "name = " << cf.name << "\n";
  os << "p = " << cf.base.p << "\n";
  if (cf.base.e > 1) {
    Fq Fp = Fq::Prime(cf.base.p);
    PolyRing Rp(Fp);
    os << "modulus = " << Rp.ToString(Poly(std::vector<Elem>(cf.base.modulus.begin(), cf.base.modulus.end())), "a") << "\n";
  }
  if (!cf.y_scale.IsOne()) os << "# y below is (" << R.ToString(cf.y_scale) << ") times the y of the input equation\n";
  os << "curve = " << FormatBiPoly(F, in.equation) << "\n";
  auto rows = [&](const BasisRows& B, const char* den_key, const char* key) {
    os << den_key << " = " << R.ToString(B.den) << "\n";
    for (int i = 0; i < B.num.rows; ++i) {
      std::vector<Poly> row(B.num.cols);
      for (int j = 0; j < B.num.cols; ++j) row[j] = B.num.at(i, j);
      os << key << " = " << FormatBiPoly(F, row) << "\n";
    }
  };
  rows(in.finite, "omega_den", "omega");
  rows(in.infinite, "omega_inf_den", "omega_inf");
  os << "genus_hint = " << K.genus() << "\n";
  if (cf.distinguished) os << "distinguished = " << cf.distinguished << "\n";
  if (cf.seed) os << "seed = " << cf.seed << "\n";
  std::cout << os.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ffinfra: infrastructure, unit lattices and regulators of global function fields"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--curve", o.curve, "curve description file")->required();
    sub->add_option("--seed", o.seed, "RNG seed (overrides the curve file)");
    sub->add_flag("--json", o.json, "machine-readable output");
  };
  auto* info = app.add_subcommand("info", "degree, genus, unit rank and infinite place degrees");
  common(info);
  auto* places = app.add_subcommand("places", "infinite places in the order used for t-vectors");
  common(places);
  auto* reduce = app.add_subcommand("reduce", "reduce (ideal, t) to an f-representation");
  common(reduce);
  reduce->add_option("--ideal", o.ideal, "unit, prime:c:r or hex canonical bytes");
  reduce->add_option("--t", o.t, "comma-separated t_1..t_n (default all zero)");
  auto* add = app.add_subcommand("add", "group law on f-representations");
  common(add);
  add->add_option("operands", o.operands, "two f-representations or 'identity'")->expected(2);
  auto* reg = app.add_subcommand("regulator", "unit lattice and regulator by baby-step giant-step");
  common(reg);
  reg->add_option("--threads", o.threads, "worker threads for giant steps");
  reg->add_option("--mem-cap", o.mem_cap, "hash table memory cap in bytes (0 = unlimited)");
  reg->add_option("--checkpoint", o.checkpoint, "checkpoint file for resuming");
  reg->add_flag("--progress", o.progress, "progress lines on stderr");
  auto* en = app.add_subcommand("enumerate", "|fRep(O_K)| by breadth-first enumeration");
  common(en);
  en->add_option("--bound", o.bound, "maximum number of elements to enumerate");
  auto* st = app.add_subcommand("selftest", "Riemann-Roch and group-law property suites on the curve");
  common(st);
  st->add_option("--samples", o.samples, "random samples per suite")->check(CLI::PositiveNumber);
  auto* basis = app.add_subcommand("basis", "print the curve file with normalized equation and integral bases");
  basis->add_option("--curve", o.curve, "curve description file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*info) return CmdInfo(o);
    if (*places) return CmdPlaces(o);
    if (*reduce) return CmdReduce(o);
    if (*add) return CmdAdd(o);
    if (*reg) return CmdRegulator(o);
    if (*en) return CmdEnumerate(o);
    if (*st) return CmdSelftest(o);
    if (*basis) return CmdBasis(o);
  } catch (const CurveSyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kSyntax;
  } catch (const CurveSemanticError& e) {
    std::cerr << "semantic error: " << e.what() << "\n";
    return kSemantic;
  } catch (const FieldError& e) {
    std::cerr << "semantic error: " << e.what() << "\n";
    return kSemantic;
  } catch (const CurveError& e) {
    std::cerr << "semantic error: " << e.what() << "\n";
    return kSemantic;
  } catch (const UnsupportedConfiguration& e) {
    std::cerr << "unsupported configuration: " << e.what() << "\n";
    return kUnsupported;
  } catch (const MemoryCapExceeded& e) {
    std::cerr << "memory cap exceeded: " << e.what() << "\n";
    return kMemoryCap;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kBadArgument;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
