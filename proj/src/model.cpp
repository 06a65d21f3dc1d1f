#include "ldpkit/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ldpkit/errors.hpp"

namespace ldpkit {

using nlohmann::json;

namespace {

double ipow(double base, int e) {
  if (e == 0) return 1.0;  // 0^0 = 1
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

double evaluate_rate(const RateLaw& law, const Vec& z) {
  if (law.kind == RateKind::constant) return law.k;
  if (law.order.size() != z.size())
    throw validation_error("evaluate_rate: order length != state dimension");
  double r = law.k;
  for (size_t i = 0; i < z.size(); ++i) {
    const int o = law.order[i];
    if (o == 0) continue;
    if (z[i] < 0.0)
      throw std::domain_error("mass_action rate: negative concentration with positive order");
    r *= ipow(z[i], o);
  }
  return r;
}

Vec rate_gradient(const RateLaw& law, const Vec& z) {
  Vec g(z.size(), 0.0);
  if (law.kind == RateKind::constant) return g;
  if (law.order.size() != z.size())
    throw validation_error("rate_gradient: order length != state dimension");
  for (size_t i = 0; i < z.size(); ++i) {
    const int oi = law.order[i];
    if (oi == 0) continue;
    if (z[i] < 0.0)
      throw std::domain_error("mass_action gradient: negative concentration with positive order");
    double term = law.k * oi * ipow(z[i], oi - 1);
    for (size_t j = 0; j < z.size(); ++j) {
      if (j == i) continue;
      const int oj = law.order[j];
      if (oj == 0) continue;
      if (z[j] < 0.0)
        throw std::domain_error(
            "mass_action gradient: negative concentration with positive order");
      term *= ipow(z[j], oj);
    }
    g[i] = term;
  }
  return g;
}

bool DriftDiffusion::has_drift() const {
  for (double v : A0)
    if (v != 0.0) return true;
  for (double v : A1.data())
    if (v != 0.0) return true;
  return false;
}

bool DriftDiffusion::has_diffusion() const {
  for (double v : D.data())
    if (v != 0.0) return true;
  return false;
}

Vec evaluate_drift(const DriftDiffusion& dd, const Vec& z) {
  if (static_cast<int>(z.size()) != static_cast<int>(dd.A0.size()))
    throw validation_error("evaluate_drift: dimension mismatch");
  Vec out = dd.A0;
  for (int i = 0; i < dd.A1.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < dd.A1.cols(); ++j) s += dd.A1(i, j) * z[j];
    out[i] += s;
  }
  return out;
}

ValidationReport validate_spec(const GeneratorSpec& spec) {
  ValidationReport rep;
  const int n = spec.dimension;
  if (n < 1) rep.violations.push_back("dimension must be >= 1");

  const auto& dd = spec.drift_diffusion;
  if (static_cast<int>(dd.A0.size()) != n) rep.violations.push_back("drift A0 length != dimension");
  if (dd.A1.rows() != n || dd.A1.cols() != n)
    rep.violations.push_back("drift A1 is not dimension x dimension");
  if (dd.D.rows() != n || dd.D.cols() != n)
    rep.violations.push_back("diffusion D is not dimension x dimension");

  if (dd.D.rows() == n && dd.D.cols() == n) {
    if (max_asymmetry(dd.D) > 1e-12) {
      rep.violations.push_back("diffusion D is not symmetric (tolerance 1e-12)");
    } else if (n >= 1) {
      const Vec eig = symmetric_eigenvalues(dd.D);
      if (!eig.empty() && eig.front() < -1e-10) {
        std::ostringstream os;
        os << "diffusion D has negative eigenvalue " << eig.front();
        rep.violations.push_back(os.str());
      }
    }
  }

  for (size_t c = 0; c < spec.channels.size(); ++c) {
    const auto& ch = spec.channels[c];
    const std::string tag = "channel " + std::to_string(c) + ": ";
    if (static_cast<int>(ch.nu.size()) != n) {
      rep.violations.push_back(tag + "nu length != dimension");
      continue;
    }
    bool all_zero = true;
    for (int v : ch.nu)
      if (v != 0) all_zero = false;
    if (all_zero) rep.violations.push_back(tag + "nu is all-zero");
    for (const RateLaw* law : {&ch.forward, &ch.backward}) {
      if (law->k < 0.0) rep.violations.push_back(tag + "rate constant < 0");
      if (law->kind == RateKind::mass_action) {
        if (static_cast<int>(law->order.size()) != n)
          rep.violations.push_back(tag + "mass_action order length != dimension");
        for (int o : law->order)
          if (o < 0) rep.violations.push_back(tag + "mass_action order entry < 0");
      }
    }
  }
  return rep;
}

void require_valid(const GeneratorSpec& spec) {
  const ValidationReport rep = validate_spec(spec);
  if (rep.ok()) return;
  std::string msg = "invalid generator spec '" + spec.label + "':";
  for (const auto& v : rep.violations) msg += "\n  - " + v;
  throw validation_error(msg);
}

GeneratorSpec make_ou_spec(double a, double d) {
  GeneratorSpec spec;
  spec.dimension = 1;
  spec.label = "ou";
  spec.drift_diffusion.A0 = {0.0};
  spec.drift_diffusion.A1 = Matrix(1, 1, -a);
  spec.drift_diffusion.D = Matrix(1, 1, d);
  return spec;
}

GeneratorSpec make_birth_death_spec(double k_plus, double k_minus) {
  GeneratorSpec spec;
  spec.dimension = 1;
  spec.label = "birth-death";
  spec.drift_diffusion.A0 = {0.0};
  spec.drift_diffusion.A1 = Matrix(1, 1, 0.0);
  spec.drift_diffusion.D = Matrix(1, 1, 0.0);
  JumpChannelPair ch;
  ch.nu = {1};
  ch.forward = RateLaw::constant(k_plus);
  ch.backward = RateLaw::mass_action(k_minus, {1});
  spec.channels.push_back(ch);
  return spec;
}

GeneratorSpec make_hybrid_spec(double a, double d, double k_plus, double k_minus,
                               double center) {
  GeneratorSpec spec = make_birth_death_spec(k_plus, k_minus);
  spec.label = "hybrid-ou-birth-death";
  spec.drift_diffusion.A0 = {a * center};
  spec.drift_diffusion.A1 = Matrix(1, 1, -a);
  spec.drift_diffusion.D = Matrix(1, 1, d);
  return spec;
}

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw validation_error("unknown key '" + it.key() + "' in " + ctx);
  }
}

Vec parse_vec(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw validation_error(ctx + " must be an array");
  Vec v;
  for (const auto& x : j) {
    if (!x.is_number()) throw validation_error(ctx + " entries must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

Matrix parse_matrix(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) throw validation_error(ctx + " must be a non-empty 2-D array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw validation_error(ctx + " rows have inconsistent lengths");
    for (int k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

RateLaw parse_rate_law(const json& j, int n, const std::string& ctx) {
  require_keys(j, {"kind", "k", "order"}, ctx);
  if (!j.contains("kind")) throw validation_error(ctx + ": missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  RateLaw law;
  law.k = j.value("k", 0.0);
  if (kind == "constant") {
    law.kind = RateKind::constant;
    if (j.contains("order")) throw validation_error(ctx + ": constant law takes no 'order'");
  } else if (kind == "mass_action") {
    law.kind = RateKind::mass_action;
    if (!j.contains("order")) throw validation_error(ctx + ": mass_action law needs 'order'");
    for (const auto& o : j.at("order")) law.order.push_back(o.get<int>());
    if (static_cast<int>(law.order.size()) != n)
      throw validation_error(ctx + ": order length != dimension");
  } else {
    throw validation_error(ctx + ": unknown rate kind '" + kind + "'");
  }
  return law;
}

json rate_law_to_json(const RateLaw& law) {
  json j;
  j["kind"] = law.kind == RateKind::constant ? "constant" : "mass_action";
  j["k"] = law.k;
  if (law.kind == RateKind::mass_action) j["order"] = law.order;
  return j;
}

}  // namespace

GeneratorSpec parse_spec_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("model config: ") + e.what());
  }
  require_keys(j, {"dimension", "label", "drift", "diffusion", "channels"}, "model config");
  if (!j.contains("dimension")) throw validation_error("model config: missing 'dimension'");

  GeneratorSpec spec;
  spec.dimension = j.at("dimension").get<int>();
  const int n = spec.dimension;
  if (n < 1) throw validation_error("model config: dimension must be >= 1");
  spec.label = j.value("label", std::string{});

  spec.drift_diffusion.A0 = Vec(n, 0.0);
  spec.drift_diffusion.A1 = Matrix(n, n, 0.0);
  spec.drift_diffusion.D = Matrix(n, n, 0.0);

  if (j.contains("drift")) {
    const json& d = j.at("drift");
    require_keys(d, {"A0", "A1"}, "drift");
    if (d.contains("A0")) {
      Vec a0 = parse_vec(d.at("A0"), "drift.A0");
      if (static_cast<int>(a0.size()) != n)
        throw validation_error("drift.A0 length != dimension");
      spec.drift_diffusion.A0 = std::move(a0);
    }
    if (d.contains("A1")) {
      Matrix a1 = parse_matrix(d.at("A1"), "drift.A1");
      if (a1.rows() != n || a1.cols() != n)
        throw validation_error("drift.A1 must be dimension x dimension");
      spec.drift_diffusion.A1 = std::move(a1);
    }
  }
  if (j.contains("diffusion")) {
    Matrix d = parse_matrix(j.at("diffusion"), "diffusion");
    if (d.rows() != n || d.cols() != n)
      throw validation_error("diffusion must be dimension x dimension");
    spec.drift_diffusion.D = std::move(d);
  }
  if (j.contains("channels")) {
    for (size_t c = 0; c < j.at("channels").size(); ++c) {
      const json& jc = j.at("channels")[c];
      const std::string ctx = "channel " + std::to_string(c);
      require_keys(jc, {"nu", "forward", "backward"}, ctx);
      JumpChannelPair ch;
      if (!jc.contains("nu") || !jc.contains("forward") || !jc.contains("backward"))
        throw validation_error(ctx + ": needs 'nu', 'forward' and 'backward'");
      for (const auto& v : jc.at("nu")) ch.nu.push_back(v.get<int>());
      if (static_cast<int>(ch.nu.size()) != n)
        throw validation_error(ctx + ": nu length != dimension");
      ch.forward = parse_rate_law(jc.at("forward"), n, ctx + ".forward");
      ch.backward = parse_rate_law(jc.at("backward"), n, ctx + ".backward");
      spec.channels.push_back(std::move(ch));
    }
  }

  require_valid(spec);
  return spec;
}

GeneratorSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open model config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_json(ss.str());
}

std::string spec_to_json(const GeneratorSpec& spec) {
  const int n = spec.dimension;
  json j;
  j["dimension"] = n;
  j["label"] = spec.label;
  json a1 = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int k = 0; k < n; ++k) row.push_back(spec.drift_diffusion.A1(i, k));
    a1.push_back(row);
  }
  j["drift"] = {{"A0", spec.drift_diffusion.A0}, {"A1", a1}};
  json dmat = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int k = 0; k < n; ++k) row.push_back(spec.drift_diffusion.D(i, k));
    dmat.push_back(row);
  }
  j["diffusion"] = dmat;
  json chans = json::array();
  for (const auto& ch : spec.channels) {
    json jc;
    jc["nu"] = ch.nu;
    jc["forward"] = rate_law_to_json(ch.forward);
    jc["backward"] = rate_law_to_json(ch.backward);
    chans.push_back(jc);
  }
  j["channels"] = chans;
  return j.dump(2);
}

void save_spec(const GeneratorSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write model config: " + path);
  out << spec_to_json(spec) << "\n";
}

}  // namespace ldpkit
