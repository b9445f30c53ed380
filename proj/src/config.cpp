#include "gapstab/config.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>

#include "toml.hpp"

namespace gapstab {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::config, msg); }

void check_keys(const toml::table& t, const std::string& where, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto&& [k, v] : t) {
    (void)v;
    if (!ok.count(std::string(k.str()))) fail("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

double get_double(const toml::node_view<const toml::node>& n, const std::string& what, double fallback) {
  if (!n) return fallback;
  if (auto v = n.value<double>()) return *v;
  fail(what + " must be a number");
}

std::int64_t get_int(const toml::node_view<const toml::node>& n, const std::string& what, std::int64_t fallback) {
  if (!n) return fallback;
  if (!n.is_integer()) fail(what + " must be an integer");
  return *n.value<std::int64_t>();
}

std::uint64_t get_seed(const toml::node_view<const toml::node>& n, const std::string& what, std::uint64_t fallback) {
  const std::int64_t v = get_int(n, what, static_cast<std::int64_t>(fallback));
  if (v < 0) fail(what + " must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

const toml::table* get_table(const toml::table& t, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) fail(std::string(key) + " must be a table");
  return n->as_table();
}

const toml::array* get_array(const toml::node_view<const toml::node>& n, const std::string& what) {
  if (!n) return nullptr;
  if (!n.is_array()) fail(what + " must be an array");
  return n.as_array();
}

std::vector<int> int_list(const toml::array& a, const std::string& what) {
  std::vector<int> out;
  for (auto&& e : a) {
    if (!e.is_integer()) fail(what + " must hold integers");
    out.push_back(static_cast<int>(*e.value<std::int64_t>()));
  }
  return out;
}

std::size_t site_of(const std::string& label) {
  std::string digits = label;
  if (!digits.empty() && digits[0] == 'x') digits = digits.substr(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    fail("bad site label '" + label + "' (expected x<i> or <i>)");
  return static_cast<std::size_t>(std::stoull(digits));
}

toml::array to_array(const std::vector<int>& v) {
  toml::array a;
  for (int x : v) a.push_back(x);
  return a;
}

}  // namespace

FactorKind factor_kind(const std::string& name) {
  if (name == "create") return FactorKind::create;
  if (name == "annihilate") return FactorKind::annihilate;
  if (name == "majorana_c") return FactorKind::majorana_c;
  if (name == "majorana_d") return FactorKind::majorana_d;
  fail("unknown factor kind '" + name + "'");
}

const char* to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::create: return "create";
    case FactorKind::annihilate: return "annihilate";
    case FactorKind::majorana_c: return "majorana_c";
    case FactorKind::majorana_d: return "majorana_d";
  }
  return "?";
}

Lattice RunConfig::lattice() const { return build_lattice(dims, periodic); }

HoppingSpec RunConfig::hopping() const {
  HoppingSpec h;
  for (const auto& b : bonds) h.bonds.push_back({b.offset, cd(b.re, b.im)});
  for (const auto& e : entries) h.entries.push_back({e.i, e.j, cd(e.re, e.im)});
  return h;
}

InteractionSet RunConfig::interaction() const {
  const std::size_t n = lattice().size();
  std::vector<MonomialTerm> monomials;
  for (const auto& t : terms) {
    MonomialTerm m;
    m.coefficient = cd(t.re, t.im);
    for (const auto& [label, kind] : t.factors) {
      const std::size_t site = site_of(label);
      if (site >= n) throw Error(Errc::site_out_of_range, "interaction factor on site " + label + " outside the lattice");
      m.factors.push_back({site, factor_kind(kind)});
    }
    monomials.push_back(std::move(m));
  }
  return make_interaction(n, monomials);
}

double RunConfig::tol(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return (it == tolerances.end() ? fallback : it->second) * tol_scale;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at " << e.source().begin;
    fail(os.str());
  }
  check_keys(root, "top level",
             {"seed", "dims", "periodic", "fermi_energy", "max_doubled_sites", "truncation", "tol_scale", "suites",
              "out_dir", "hopping", "disorder", "interaction", "flow", "gap_curve", "localize", "lr", "tolerances"});
  RunConfig c;
  const toml::table& r = root;
  c.seed = get_seed(r["seed"], "seed", c.seed);
  if (auto a = get_array(r["dims"], "dims")) c.dims = int_list(*a, "dims");
  if (auto a = get_array(r["periodic"], "periodic")) {
    c.periodic.clear();
    for (auto&& e : *a) {
      if (!e.is_boolean()) fail("periodic must hold booleans");
      c.periodic.push_back(*e.value<bool>());
    }
  } else {
    c.periodic.assign(c.dims.size(), false);
  }
  c.fermi_energy = get_double(r["fermi_energy"], "fermi_energy", c.fermi_energy);
  c.max_doubled_sites = static_cast<std::size_t>(get_int(r["max_doubled_sites"], "max_doubled_sites",
                                                         static_cast<std::int64_t>(c.max_doubled_sites)));
  c.truncation = get_double(r["truncation"], "truncation", c.truncation);
  c.tol_scale = get_double(r["tol_scale"], "tol_scale", c.tol_scale);
  if (c.tol_scale <= 0.0) fail("tol_scale must be positive");
  if (auto a = get_array(r["suites"], "suites")) {
    c.suites.clear();
    for (auto&& e : *a) {
      if (!e.is_string()) fail("suites must hold strings");
      c.suites.push_back(*e.value<std::string>());
    }
  }
  if (auto v = r["out_dir"].value<std::string>()) c.out_dir = *v;

  if (auto h = get_table(r, "hopping")) {
    check_keys(*h, "[hopping]", {"bonds", "entries"});
    if (auto a = get_array((*h)["bonds"], "hopping.bonds"))
      for (auto&& e : *a) {
        if (!e.is_table()) fail("hopping.bonds entries must be tables");
        const toml::table& b = *e.as_table();
        check_keys(b, "hopping bond", {"offset", "re", "im"});
        BondConfig bc;
        auto off = get_array(b["offset"], "bond offset");
        if (!off) fail("bond needs an offset");
        bc.offset = int_list(*off, "bond offset");
        bc.re = get_double(b["re"], "bond re", 0.0);
        bc.im = get_double(b["im"], "bond im", 0.0);
        c.bonds.push_back(bc);
      }
    if (auto a = get_array((*h)["entries"], "hopping.entries"))
      for (auto&& e : *a) {
        if (!e.is_table()) fail("hopping.entries must be tables");
        const toml::table& b = *e.as_table();
        check_keys(b, "hopping entry", {"i", "j", "re", "im"});
        EntryConfig ec;
        const std::int64_t i = get_int(b["i"], "entry i", -1), j = get_int(b["j"], "entry j", -1);
        if (i < 0 || j < 0) fail("hopping entry needs nonnegative i and j");
        ec.i = static_cast<std::size_t>(i);
        ec.j = static_cast<std::size_t>(j);
        ec.re = get_double(b["re"], "entry re", 0.0);
        ec.im = get_double(b["im"], "entry im", 0.0);
        c.entries.push_back(ec);
      }
  }
  if (auto d = get_table(r, "disorder")) {
    check_keys(*d, "[disorder]", {"width", "seed"});
    c.disorder_width = get_double((*d)["width"], "disorder.width", 0.0);
    c.disorder_seed = get_seed((*d)["seed"], "disorder.seed", 0);
  }
  if (auto in = get_table(r, "interaction")) {
    check_keys(*in, "[interaction]", {"k_h", "term"});
    c.k_h = get_double((*in)["k_h"], "interaction.k_h", c.k_h);
    if (auto a = get_array((*in)["term"], "interaction.term"))
      for (auto&& e : *a) {
        if (!e.is_table()) fail("interaction.term entries must be tables");
        const toml::table& t = *e.as_table();
        check_keys(t, "interaction term", {"coeff", "coeff_im", "factors"});
        TermConfig tc;
        tc.re = get_double(t["coeff"], "term coeff", 1.0);
        tc.im = get_double(t["coeff_im"], "term coeff_im", 0.0);
        auto f = get_array(t["factors"], "term factors");
        if (!f) fail("interaction term needs factors");
        for (auto&& pair : *f) {
          const toml::array* p = pair.as_array();
          if (!p || p->size() != 2 || !(*p)[0].is_string() || !(*p)[1].is_string())
            fail("factors must be [\"site\", \"kind\"] pairs");
          const std::string site = *(*p)[0].value<std::string>(), kind = *(*p)[1].value<std::string>();
          site_of(site);
          factor_kind(kind);
          tc.factors.emplace_back(site, kind);
        }
        c.terms.push_back(std::move(tc));
      }
  }
  if (auto f = get_table(r, "flow")) {
    check_keys(*f, "[flow]", {"s_max", "steps", "gamma_factor", "rk4_substeps", "window"});
    c.flow.s_max = get_double((*f)["s_max"], "flow.s_max", c.flow.s_max);
    c.flow.steps = static_cast<int>(get_int((*f)["steps"], "flow.steps", c.flow.steps));
    c.flow.gamma_factor = get_double((*f)["gamma_factor"], "flow.gamma_factor", c.flow.gamma_factor);
    c.flow.rk4_substeps = static_cast<int>(get_int((*f)["rk4_substeps"], "flow.rk4_substeps", c.flow.rk4_substeps));
    c.flow.window = static_cast<int>(get_int((*f)["window"], "flow.window", c.flow.window));
    if (c.flow.steps < 1 || c.flow.rk4_substeps < 1 || c.flow.window < 1) fail("flow counts must be positive");
    if (c.flow.gamma_factor <= 0.0 || c.flow.gamma_factor >= 1.0) fail("flow.gamma_factor must lie in (0, 1)");
  }
  if (auto g = get_table(r, "gap_curve")) {
    check_keys(*g, "[gap_curve]", {"s_max", "points"});
    c.gap_curve.s_max = get_double((*g)["s_max"], "gap_curve.s_max", c.gap_curve.s_max);
    c.gap_curve.points = static_cast<int>(get_int((*g)["points"], "gap_curve.points", c.gap_curve.points));
    if (c.gap_curve.points < 2) fail("gap_curve.points must be at least 2");
  }
  if (auto l = get_table(r, "localize")) {
    check_keys(*l, "[localize]", {"n_max"});
    c.localize.n_max = static_cast<int>(get_int((*l)["n_max"], "localize.n_max", c.localize.n_max));
    if (c.localize.n_max < 0) fail("localize.n_max must be nonnegative");
  }
  if (auto l = get_table(r, "lr")) {
    check_keys(*l, "[lr]", {"t_max", "points", "theta"});
    c.lr.t_max = get_double((*l)["t_max"], "lr.t_max", c.lr.t_max);
    c.lr.points = static_cast<int>(get_int((*l)["points"], "lr.points", c.lr.points));
    c.lr.theta = get_double((*l)["theta"], "lr.theta", c.lr.theta);
    if (c.lr.points < 2) fail("lr.points must be at least 2");
  }
  if (auto t = get_table(r, "tolerances"))
    for (auto&& [k, v] : *t) {
      auto d = v.value<double>();
      if (!d) fail("tolerance " + std::string(k.str()) + " must be a number");
      c.tolerances[std::string(k.str())] = *d;
    }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string to_toml(const RunConfig& c) {
  toml::table root;
  root.insert("seed", static_cast<std::int64_t>(c.seed));
  root.insert("dims", to_array(c.dims));
  toml::array per;
  for (bool p : c.periodic) per.push_back(p);
  root.insert("periodic", per);
  root.insert("fermi_energy", c.fermi_energy);
  root.insert("max_doubled_sites", static_cast<std::int64_t>(c.max_doubled_sites));
  root.insert("truncation", c.truncation);
  root.insert("tol_scale", c.tol_scale);
  toml::array suites;
  for (const auto& s : c.suites) suites.push_back(s);
  root.insert("suites", suites);
  root.insert("out_dir", c.out_dir);

  toml::table hop;
  toml::array bonds, entries;
  for (const auto& b : c.bonds) bonds.push_back(toml::table{{"offset", to_array(b.offset)}, {"re", b.re}, {"im", b.im}});
  for (const auto& e : c.entries)
    entries.push_back(toml::table{{"i", static_cast<std::int64_t>(e.i)},
                                  {"j", static_cast<std::int64_t>(e.j)},
                                  {"re", e.re},
                                  {"im", e.im}});
  hop.insert("bonds", bonds);
  hop.insert("entries", entries);
  root.insert("hopping", hop);
  root.insert("disorder", toml::table{{"width", c.disorder_width}, {"seed", static_cast<std::int64_t>(c.disorder_seed)}});

  toml::table inter;
  inter.insert("k_h", c.k_h);
  toml::array terms;
  for (const auto& t : c.terms) {
    toml::array f;
    for (const auto& [site, kind] : t.factors) f.push_back(toml::array{site, kind});
    terms.push_back(toml::table{{"coeff", t.re}, {"coeff_im", t.im}, {"factors", f}});
  }
  inter.insert("term", terms);
  root.insert("interaction", inter);
  root.insert("flow", toml::table{{"s_max", c.flow.s_max},
                                  {"steps", c.flow.steps},
                                  {"gamma_factor", c.flow.gamma_factor},
                                  {"rk4_substeps", c.flow.rk4_substeps},
                                  {"window", c.flow.window}});
  root.insert("gap_curve", toml::table{{"s_max", c.gap_curve.s_max}, {"points", c.gap_curve.points}});
  root.insert("localize", toml::table{{"n_max", c.localize.n_max}});
  root.insert("lr", toml::table{{"t_max", c.lr.t_max}, {"points", c.lr.points}, {"theta", c.lr.theta}});
  toml::table tols;
  for (const auto& [k, v] : c.tolerances) tols.insert(k, v);
  root.insert("tolerances", tols);
  std::ostringstream os;
  os << root << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& c) {
  const std::string text = to_toml(c);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr))
    throw Error(Errc::numerical, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace gapstab
