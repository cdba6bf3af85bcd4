#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sheafcoh/cli.hpp"
#include "sheafcoh/cohom.hpp"
#include "sheafcoh/errors.hpp"
#include "sheafcoh/exactlin.hpp"

namespace sheafcoh::cli {

namespace {

constexpr std::size_t kMaxElementsBound = 8;

struct WhichName {
  Which which;
  const char* name;
};
constexpr WhichName kWhichNames[] = {
    {Which::kTheorem1, "theorem1"},     {Which::kLes, "les"},
    {Which::kUct, "uct"},               {Which::kCorollary2, "corollary2"},
    {Which::kCorollary2Split, "corollary2split"}, {Which::kCorollary3, "corollary3"},
    {Which::kProjection, "projection"}, {Which::kAll, "all"},
};

bool wants(Which requested, Which check) { return requested == Which::kAll || requested == check; }

std::string describe(const Instance& inst) {
  std::string s = inst.name.empty() ? "instance" : inst.name;
  s += " |X|=" + std::to_string(inst.poset.size());
  if (inst.coefficients) s += " A=" + abgroup::format_factors(inst.coefficients->invariant_factors());
  return s;
}

}  // namespace

Which parse_which(const std::string& s) {
  for (const auto& w : kWhichNames)
    if (s == w.name) return w.which;
  throw InputError("unknown check \"" + s + "\"");
}

const char* to_string(Which w) {
  for (const auto& n : kWhichNames)
    if (n.which == w) return n.name;
  return "?";
}

uct::DegreeTable cohomology_table(const Instance& inst) {
  const int h = inst.poset.height();
  if (h < 0) return {};
  return uct::cohomology_table(cohom::nerve_complex(inst.sheaf).complex, 0, h);
}

uct::VerificationReport verify_instance(const Instance& inst, const VerifyRequest& req) {
  const Which w = req.which;
  const bool needs_coefficients = w != Which::kProjection && !(w == Which::kTheorem1 && inst.perfect_complex);
  if (needs_coefficients && !inst.coefficients)
    throw InputError(std::string("check ") + to_string(w) + " needs a coefficients block");
  if (w == Which::kProjection && !inst.map) throw InputError("check projection needs a map block");

  uct::VerificationReport rep;
  rep.instance = describe(inst);
  uct::Options opt;
  opt.rmax = req.rmax;
  opt.wrong_oracle = req.wrong_oracle;

  if (wants(w, Which::kTheorem1)) {
    if (inst.coefficients) rep.append(uct::verify_theorem1(inst.sheaf, *inst.coefficients));
    if (inst.perfect_complex) {
      auto r = uct::verify_theorem1(inst.sheaf, *inst.perfect_complex);
      r.tables.clear();
      rep.append(r);
    }
  }
  const bool needs_context = w == Which::kAll || w == Which::kCorollary2 || w == Which::kCorollary2Split ||
                             w == Which::kCorollary3 || w == Which::kLes || w == Which::kUct;
  if (needs_context) {
    uct::UctContext ctx = uct::make_context(inst.sheaf, *inst.coefficients, opt);
    if (wants(w, Which::kLes)) rep.append(uct::verify_les(ctx.les));
    if (wants(w, Which::kUct)) rep.append(uct::verify_uct(ctx.ses));
    const int rmax = req.rmax.value_or(std::max(inst.poset.height(), 0));
    for (int r = opt.rmin; r <= rmax; ++r) {
      if (wants(w, Which::kCorollary2)) rep.append(uct::corollary2(ctx, r, opt));
      if (wants(w, Which::kCorollary2Split)) rep.append(uct::corollary2_split(ctx, r));
      if (wants(w, Which::kCorollary3)) rep.append(uct::corollary3(ctx, r));
    }
  }
  if (wants(w, Which::kProjection)) {
    if (inst.map) {
      chains::FreeComplex c = inst.perfect_complex ? *inst.perfect_complex
                              : inst.coefficients  ? site::resolution_complex(abgroup::free_resolution(*inst.coefficients))
                                                   : chains::FreeComplex::unit();
      rep.append(uct::projection_check(*inst.map, inst.sheaf, c));
    } else {
      rep.skip("projection", std::nullopt, "no map block");
    }
  }
  rep.tables["H(X,F)"] = cohomology_table(inst);
  if (!rep.counterexample.is_null()) rep.counterexample["instance"] = serialize_instance(inst);
  return rep;
}

// ---------------------------------------------------------------- random

Instance RandomInstance::build(const std::string& name) const {
  Instance inst;
  inst.name = name;
  inst.poset = poset;
  inst.sheaf = site::build_sheaf(poset, recipe);
  std::vector<Integer> orders;
  for (int o : coefficient_orders) orders.emplace_back(o);
  inst.coefficients = abgroup::FpAbGroup::from_invariant_factors(orders);
  inst.perfect_complex = perfect_complex;
  inst.map = site::MonotoneMap{poset, target, assignment};
  return inst;
}

RandomInstance random_instance(std::uint64_t seed, const RandomParams& params) {
  std::mt19937_64 rng(seed);
  RandomInstance ri;
  const std::size_t n = 1 + site::draw(rng, params.max_elements);
  ri.poset = site::random_poset(rng, n, 0.45);
  ri.recipe = site::random_recipe(ri.poset, rng, params.sheaf);
  static constexpr int kCoefficientOrders[] = {0, 2, 3, 4, 6};
  const std::size_t factors = site::draw(rng, 4) == 0 ? 2 : 1;
  for (std::size_t i = 0; i < factors; ++i) ri.coefficient_orders.push_back(kCoefficientOrders[site::draw(rng, 5)]);
  ri.perfect_complex = uct::random_perfect_complex(rng, 2, 2);
  const std::size_t m = 1 + site::draw(rng, params.max_elements);
  ri.target = site::random_poset(rng, m, 0.45);
  ri.assignment = site::random_monotone_map(rng, ri.poset, ri.target).assignment;
  return ri;
}

namespace {

// Drops element e from the source poset, remapping the recipe.
std::optional<RandomInstance> drop_element(const RandomInstance& ri, std::size_t e) {
  if (ri.poset.size() <= 1) return std::nullopt;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ri.poset.size(); ++i)
    if (i != e) keep.push_back(i);
  RandomInstance out = ri;
  out.poset = ri.poset.subposet(keep);
  out.recipe.blocks.clear();
  out.recipe.quotient_coeffs.clear();
  for (auto b : ri.recipe.blocks) {
    if (b.kind != site::SheafRecipe::Kind::kConstant && b.element == e) continue;
    if (b.element > e) --b.element;
    out.recipe.blocks.push_back(b);
  }
  out.assignment.clear();
  for (std::size_t i : keep) out.assignment.push_back(ri.assignment[i]);
  return out;
}

}  // namespace

RandomInstance minimize(const RandomInstance& failing, const std::function<bool(const Instance&)>& still_fails) {
  RandomInstance cur = failing;
  auto fails = [&](const RandomInstance& cand) {
    try {
      return still_fails(cand.build("minimized"));
    } catch (const std::exception&) {
      return false;
    }
  };
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t e = 0; e < cur.poset.size() && !progress; ++e) {
      auto cand = drop_element(cur, e);
      if (cand && fails(*cand)) {
        cur = *cand;
        progress = true;
      }
    }
    if (!progress && !cur.recipe.quotient_coeffs.empty()) {
      RandomInstance cand = cur;
      cand.recipe.quotient_coeffs.clear();
      if (fails(cand)) {
        cur = cand;
        progress = true;
      }
    }
    for (std::size_t i = 0; i < cur.recipe.blocks.size() && !progress; ++i) {
      RandomInstance cand = cur;
      cand.recipe.blocks.erase(cand.recipe.blocks.begin() + static_cast<long>(i));
      cand.recipe.quotient_coeffs.clear();
      if (fails(cand)) {
        cur = cand;
        progress = true;
      }
    }
    if (!progress && cur.coefficient_orders.size() > 1) {
      RandomInstance cand = cur;
      cand.coefficient_orders.pop_back();
      if (fails(cand)) {
        cur = cand;
        progress = true;
      }
    }
    if (!progress && cur.perfect_complex.ranks != std::vector<std::size_t>{1}) {
      RandomInstance cand = cur;
      cand.perfect_complex = chains::FreeComplex::unit();
      if (fails(cand)) {
        cur = cand;
        progress = true;
      }
    }
  }
  return cur;
}

RandomOutcome run_random(const RandomRequest& req) {
  if (req.max_elements == 0 || req.max_elements > kMaxElementsBound)
    throw InputError("--max-elements must be between 1 and " + std::to_string(kMaxElementsBound));
  RandomOutcome out;
  Json instances = Json::array();
  std::size_t n_pass = 0, n_fail = 0, n_skip = 0;
  RandomParams params;
  params.max_elements = req.max_elements;
  VerifyRequest vreq{req.which, req.rmax, req.wrong_oracle};
  std::mt19937_64 seeds(req.seed);
  for (std::size_t i = 0; i < req.count; ++i) {
    const std::uint64_t s = seeds();
    RandomInstance ri = random_instance(s, params);
    const std::string name = "random seed=" + std::to_string(req.seed) + " index=" + std::to_string(i);
    Instance inst = ri.build(name);
    uct::VerificationReport rep = verify_instance(inst, vreq);
    Json e = Json::object();
    e["index"] = i;
    e["instance_seed"] = s;
    e["elements"] = inst.poset.size();
    e["status"] = rep.passed() ? "pass" : "fail";
    std::size_t passes = 0, skips = 0;
    Json failed = Json::array();
    for (const auto& c : rep.checks) {
      if (c.status == uct::Status::kPass) ++passes;
      else if (c.status == uct::Status::kSkip) ++skips;
      else failed.push_back(c.name + (c.degree ? " r=" + std::to_string(*c.degree) : std::string()));
    }
    e["checks_passed"] = passes;
    e["checks_skipped"] = skips;
    e["failed"] = failed;
    e["tables"] = rep.to_json()["tables"];
    n_skip += skips;
    if (rep.passed()) {
      ++n_pass;
    } else {
      ++n_fail;
      out.passed = false;
      RandomInstance small = minimize(ri, [&](const Instance& cand) { return !verify_instance(cand, vreq).passed(); });
      Instance minimized = small.build(name + " minimized");
      Json dumpj = Json::object();
      dumpj["source"] = name;
      dumpj["instance"] = serialize_instance(minimized);
      dumpj["report"] = verify_instance(minimized, vreq).to_json();
      e["counterexample"] = rep.counterexample;
      out.failing.emplace_back(i, std::move(dumpj));
    }
    instances.push_back(std::move(e));
  }
  Json rep = Json::object();
  rep["command"] = "random";
  rep["seed"] = req.seed;
  rep["count"] = req.count;
  rep["max_elements"] = req.max_elements;
  rep["which"] = to_string(req.which);
  rep["status"] = out.passed ? "pass" : "fail";
  Json summary = Json::object();
  summary["pass"] = n_pass;
  summary["fail"] = n_fail;
  summary["skipped_checks"] = n_skip;
  rep["summary"] = std::move(summary);
  rep["instances"] = std::move(instances);
  out.report = std::move(rep);
  return out;
}

// ---------------------------------------------------------------- front end

namespace {

Json table_json(const uct::DegreeTable& t) {
  Json j = Json::object();
  for (const auto& [deg, fs] : t) {
    Json arr = Json::array();
    for (const auto& f : fs) arr.push_back(f.fits_int64() ? Json(f.to_int64()) : Json(f.to_string()));
    j[std::to_string(deg)] = std::move(arr);
  }
  return j;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw InputError("cannot write " + out_path);
  f << text;
}

std::string failing_path(const std::string& out_path, std::uint64_t seed, std::size_t index) {
  std::string base = out_path.empty() ? "random-seed" + std::to_string(seed) : out_path;
  return base + ".failing-" + std::to_string(index) + ".json";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sheaf cohomology on finite posets and universal coefficient checks"};
  app.require_subcommand(1);
  std::string format = "text";
  std::string out_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", out_path, "write the report to this file");
  };

  std::string input;
  auto* coh = app.add_subcommand("cohomology", "H^r(X,F) table of an instance");
  coh->add_option("--input", input, "instance file")->required();
  add_common(coh);

  std::string which = "all";
  std::optional<int> rmax;
  bool inject = false;
  auto* ver = app.add_subcommand("verify", "run the universal coefficient checks on an instance");
  ver->add_option("--input", input, "instance file")->required();
  ver->add_option("--which", which, "theorem1|les|uct|corollary2|corollary2split|corollary3|projection|all");
  ver->add_option("--rmax", rmax, "largest degree r for the corollaries");
  ver->add_flag("--inject-fault", inject, "test mode: use a deliberately wrong oracle");
  add_common(ver);

  std::uint64_t seed = 1;
  std::size_t count = 10, max_elements = 5;
  auto* rnd = app.add_subcommand("random", "seeded random instances");
  rnd->add_option("--seed", seed, "seed");
  rnd->add_option("--count", count, "number of instances");
  rnd->add_option("--max-elements", max_elements, "poset size bound (at most 8)");
  rnd->add_option("--which", which, "checks to run");
  rnd->add_option("--rmax", rmax, "largest degree r for the corollaries");
  rnd->add_flag("--inject-fault", inject, "test mode: use a deliberately wrong oracle");
  add_common(rnd);

  std::string matrix;
  auto* snf = app.add_subcommand("snf", "Smith diagonal of an integer matrix");
  snf->add_option("--matrix", matrix, "row-major nested array, e.g. [[2,4],[6,8]]")->required();
  add_common(snf);
  auto* hnf = app.add_subcommand("hnf", "row-style Hermite form of an integer matrix");
  hnf->add_option("--matrix", matrix, "row-major nested array")->required();
  add_common(hnf);

  std::string fixture_name;
  long long stalk = 0;
  std::optional<long long> coefficients;
  auto* fix = app.add_subcommand("fixture", "write a built-in fixture instance");
  fix->add_option("--name", fixture_name, "PC4, SS6 or point")->required();
  fix->add_option("--stalk", stalk, "order of the constant stalk (0 = Z)");
  fix->add_option("--coefficients", coefficients, "order of the cyclic coefficient group (0 = Z)");
  fix->add_option("--out", out_path, "write the instance to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const bool json = format == "json";
  try {
    if (*coh) {
      Instance inst = load_instance(input);
      uct::DegreeTable t = cohomology_table(inst);
      if (json) {
        Json j = Json::object();
        j["command"] = "cohomology";
        j["instance"] = describe(inst);
        j["cohomology"] = table_json(t);
        emit(dump(j), out_path, out);
      } else {
        std::string s;
        for (const auto& [deg, fs] : t) s += "H^" + std::to_string(deg) + " = " + abgroup::format_factors(fs) + "\n";
        emit(s, out_path, out);
      }
      return 0;
    }
    if (*ver) {
      Instance inst = load_instance(input);
      VerifyRequest req{parse_which(which), rmax, inject};
      uct::VerificationReport rep = verify_instance(inst, req);
      emit(json ? dump(rep.to_json()) : rep.to_text(), out_path, out);
      return rep.passed() ? 0 : 1;
    }
    if (*rnd) {
      RandomRequest req{seed, count, max_elements, parse_which(which), rmax, inject};
      RandomOutcome res = run_random(req);
      if (json) {
        emit(dump(res.report), out_path, out);
      } else {
        std::string s = "random seed=" + std::to_string(seed) + " count=" + std::to_string(count) + " which=" + which + "\n";
        for (const auto& e : res.report["instances"])
          s += "  #" + std::to_string(e["index"].get<std::size_t>()) + " " + e["status"].get<std::string>() +
               " |X|=" + std::to_string(e["elements"].get<std::size_t>()) + "\n";
        s += "pass " + std::to_string(res.report["summary"]["pass"].get<std::size_t>()) + ", fail " +
             std::to_string(res.report["summary"]["fail"].get<std::size_t>()) + "\n";
        emit(s, out_path, out);
      }
      for (const auto& [index, dumpj] : res.failing) {
        std::string path = failing_path(out_path, seed, index);
        std::ofstream f(path);
        f << dump(dumpj);
        err << "failing instance written to " << path << '\n';
      }
      return res.passed ? 0 : 1;
    }
    if (*snf || *hnf) {
      Json mj;
      try {
        mj = Json::parse(matrix);
      } catch (const nlohmann::json::parse_error&) {
        throw InputError("matrix literal is not a nested array");
      }
      if (!mj.is_array()) throw InputError("matrix literal is not a nested array");
      std::size_t rows = mj.size(), cols = rows == 0 ? 0 : (mj[0].is_array() ? mj[0].size() : 0);
      IntMatrix m = parse_matrix(mj, rows, cols, "matrix");
      if (*hnf) {
        auto hf = exactlin::hermite_normal_form(m);
        if (json) {
          Json j = Json::object();
          j["command"] = "hnf";
          j["H"] = serialize_matrix(hf.H);
          j["U"] = serialize_matrix(hf.U);
          emit(dump(j), out_path, out);
        } else {
          emit("H = " + serialize_matrix(hf.H).dump() + "\nU = " + serialize_matrix(hf.U).dump() + "\n", out_path, out);
        }
        return 0;
      }
      auto diag = exactlin::smith_diagonal(m);
      if (json) {
        Json j = Json::object();
        j["command"] = "snf";
        Json d = Json::array();
        for (const auto& v : diag) d.push_back(v.fits_int64() ? Json(v.to_int64()) : Json(v.to_string()));
        j["diagonal"] = std::move(d);
        emit(dump(j), out_path, out);
      } else {
        std::string s = "(";
        for (std::size_t i = 0; i < diag.size(); ++i) s += (i ? ", " : "") + diag[i].to_string();
        emit(s + ")\n", out_path, out);
      }
      return 0;
    }
    if (*fix) {
      Instance inst = fixture(fixture_name, stalk, coefficients);
      emit(dump(serialize_instance(inst)), out_path, out);
      return 0;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const ContractViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sheafcoh::cli
