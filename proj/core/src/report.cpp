#include "ucplab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ucplab/geometry.hpp"

namespace ucplab {

namespace {

// A ln value of -inf encodes "the linear quantity is zero or negative";
// finite sentinels are unusable because legitimate logarithms here exceed
// 1e10 digits in both directions.
bool ln_is_ninf(const xreal& x) { return x == -std::numeric_limits<xreal>::infinity(); }
bool ln_is_pinf(const xreal& x) { return x == std::numeric_limits<xreal>::infinity(); }

// log10 slot: double when it fits, decimal string otherwise.
json log10_slot(const xreal& log10Value) {
  if (ln_is_ninf(log10Value)) return "-inf";
  if (ln_is_pinf(log10Value)) return "inf";
  if (abs(log10Value) < xreal(1e308)) return to_double(log10Value);
  return xreal_to_string(log10Value);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string fmt_ln_as_log10(const xreal& lnValue) {
  if (ln_is_ninf(lnValue)) return "-inf";
  if (ln_is_pinf(lnValue)) return "inf";
  const xreal l10 = ln_to_log10(lnValue);
  if (abs(l10) < xreal(1e308)) return fmt_double(to_double(l10));
  return xreal_to_string(l10);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_report: cannot open " + path.string());
  out << text;
}

}  // namespace

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json log_value_from_ln(const xreal& lnValue) {
  json j;
  if (ln_is_ninf(lnValue)) {
    j["linear"] = 0.0;
    j["log10"] = nullptr;
    return j;
  }
  if (lnValue > xreal(709) || lnValue < xreal(-745))
    j["linear"] = nullptr;
  else
    j["linear"] = to_double(exp(lnValue));
  j["log10"] = log10_slot(ln_to_log10(lnValue));
  return j;
}

json log_value_linear(double v) {
  json j;
  j["linear"] = v;
  if (v > 0)
    j["log10"] = std::log10(v);
  else
    j["log10"] = nullptr;
  return j;
}

json report_json(const ExperimentReport& rep) {
  json root;
  root["schema"] = "ucplab-report-v1";
  root["experiment"] = rep.name;

  json summary = json::object();
  for (const auto& [k, v] : rep.summary) summary[k] = v;
  root["summary"] = summary;

  json cases = json::array();
  for (const auto& c : rep.cases) {
    json jc;
    jc["id"] = c.id;
    jc["pass"] = c.pass;
    jc["vacuous"] = c.vacuous;
    jc["bound_tag"] = c.boundTag;
    jc["direction"] = c.geq ? ">=" : "<=";
    jc["observed"] = c.observed;
    jc["observed_log10"] = ln_is_ninf(c.lnObserved)
                               ? json(nullptr)
                               : json(log10_slot(ln_to_log10(c.lnObserved)));
    jc["bound_log10"] =
        ln_is_ninf(c.lnBound) ? json(nullptr) : json(log10_slot(ln_to_log10(c.lnBound)));
    jc["margin_log10"] = log10_slot(c.marginLog10);
    if (std::isfinite(c.datX)) jc["x"] = c.datX;
    if (!c.note.empty()) jc["note"] = c.note;
    if (!c.inputs.empty()) {
      json ji = json::object();
      for (const auto& [k, v] : c.inputs) ji[k] = v;
      jc["inputs"] = ji;
    }
    cases.push_back(std::move(jc));
  }
  root["cases"] = cases;

  json counts;
  counts["cases"] = rep.cases.size();
  counts["failures"] = rep.failures();
  long long vac = 0;
  for (const auto& c : rep.cases)
    if (c.vacuous) ++vac;
  counts["vacuous"] = vac;
  root["counts"] = counts;
  return root;
}

void write_report(const ExperimentReport& rep, const std::string& outDir) {
  const std::filesystem::path dir(outDir);
  std::filesystem::create_directories(dir);

  write_text(dir / "report.json", report_json(rep).dump(2) + "\n");

  std::string csv =
      "id,pass,vacuous,observed,observed_log10,bound_log10,bound_tag,margin_log10,x,note,inputs\n";
  for (const auto& c : rep.cases) {
    std::string inputs;
    for (const auto& [k, v] : c.inputs) {
      if (!inputs.empty()) inputs += ';';
      inputs += k + "=" + fmt_double(v);
    }
    csv += csv_escape(c.id);
    csv += c.pass ? ",1," : ",0,";
    csv += c.vacuous ? "1," : "0,";
    csv += fmt_double(c.observed) + ",";
    csv += fmt_ln_as_log10(c.lnObserved) + ",";
    csv += fmt_ln_as_log10(c.lnBound) + ",";
    csv += csv_escape(c.boundTag) + ",";
    const json margin = log10_slot(c.marginLog10);
    csv += (margin.is_string() ? margin.get<std::string>() : fmt_double(margin.get<double>())) +
           ",";
    csv += (std::isfinite(c.datX) ? fmt_double(c.datX) : "") + ",";
    csv += csv_escape(c.note) + ",";
    csv += csv_escape(inputs) + "\n";
  }
  write_text(dir / "cases.csv", csv);

  bool anyDat = false;
  for (const auto& c : rep.cases) anyDat = anyDat || std::isfinite(c.datX);
  if (anyDat) {
    std::string dat = "# x observed observed_log10 bound_log10\n";
    for (const auto& c : rep.cases) {
      if (!std::isfinite(c.datX)) continue;
      dat += fmt_double(c.datX) + " " + fmt_double(c.observed) + " " +
             fmt_ln_as_log10(c.lnObserved) + " " + fmt_ln_as_log10(c.lnBound) + "\n";
    }
    write_text(dir / (rep.name + ".dat"), dat);
  }

  if (!rep.rawRows.empty()) {
    std::string raw;
    for (std::size_t i = 0; i < rep.rawHeader.size(); ++i) {
      if (i) raw += ',';
      raw += csv_escape(rep.rawHeader[i]);
    }
    raw += '\n';
    for (const auto& row : rep.rawRows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) raw += ',';
        raw += fmt_double(row[i]);
      }
      raw += '\n';
    }
    write_text(dir / "raw.csv", raw);
  }
}

namespace {

// LogValue shape for a positive extended-precision quantity that may exceed
// double range in either direction.
json big_value_json(const xreal& v) {
  if (v <= 0) {
    json j;
    j["linear"] = to_double(v);
    j["log10"] = nullptr;
    return j;
  }
  return log_value_from_ln(log(v));
}

json radii_json(const AnnuliRadii& r) {
  json j;
  j["r1"] = to_double(r.r1);
  j["R1"] = to_double(r.R1);
  j["r2"] = to_double(r.r2);
  j["R2"] = to_double(r.R2);
  j["r3"] = to_double(r.r3);
  j["R3"] = to_double(r.R3);
  return j;
}

json csfuc_json(const CsfucResult& cs) {
  json j;
  j["exact"] = log_value_from_ln(cs.lnExact);
  j["exponent_n"] = big_value_json(cs.exponentN);
  j["gamma1"] = to_double(cs.gamma1);
  return j;
}

}  // namespace

json constants_json(const ModelParams& p, const xreal& delta, const CalibrationConstants& cal,
                    double E0, double lambda1, double T) {
  p.validate();
  cal.validate();
  if (!(delta > 0)) throw std::invalid_argument("constants_json: delta must be > 0");

  json root;
  root["schema"] = "ucplab-constants-v1";

  json in;
  in["d"] = p.d;
  in["theta_e"] = p.thetaE;
  in["theta_l"] = p.thetaL;
  in["norm_v"] = p.normV;
  in["norm_b"] = p.normB;
  in["norm_c"] = p.normC;
  in["g"] = p.G;
  in["delta"] = to_double(delta);
  in["e0"] = E0;
  in["lambda_1"] = lambda1;
  in["t_time"] = T;
  json jcal;
  jcal["theta"] = cal.cutoffTheta;
  jcal["cprime"] = cal.cacciopoliCPrime;
  in["calibration"] = jcal;
  root["inputs"] = in;

  const xreal d0 = delta0(p);
  root["delta0"] = big_value_json(d0);

  json radii = json::object();
  if (delta / xreal(p.G) <= xreal(1))
    radii["laplacian"] = radii_json(standard_radii(p, RadiiVariant::laplacian, delta));
  else
    radii["laplacian"] = "skipped: requires delta/G <= 1";
  const bool deltaAdmissible = delta <= d0;
  if (deltaAdmissible)
    radii["interp_delta"] = radii_json(standard_radii(p, RadiiVariant::interp_delta, delta));
  else
    radii["interp_delta"] = "skipped: requires delta <= delta0";
  const AnnuliRadii fixed = standard_radii(p, RadiiVariant::chain_fixed);
  radii["chain_fixed"] = radii_json(fixed);
  root["radii"] = radii;

  const ThreeAnnuliConstants tac = three_annuli_constants(fixed, p, cal);
  json jt;
  jt["mu"] = to_double(tac.mu);
  jt["mu1"] = to_double(tac.mu1);
  jt["d1"] = big_value_json(tac.D1);
  jt["d2"] = big_value_json(tac.D2);
  jt["d3"] = big_value_json(tac.D3);
  jt["alpha_star"] = big_value_json(tac.alphaStar);
  root["three_annuli"] = jt;

  root["assumption_radii_ok"] = check_assumption_radii(fixed, p);

  const ChainConstants ch = chain_constants(fixed, p, cal);
  json jc;
  jc["gamma"] = to_double(ch.gamma);
  jc["c1"] = log_value_from_ln(ch.lnC1);
  jc["gamma2"] = to_double(ch.gamma2);
  jc["c2"] = log_value_from_ln(ch.lnC2);
  jc["m"] = ch.m;
  jc["n_cover"] = big_value_json(ch.N);
  jc["m_cube"] = big_value_json(ch.M);
  jc["a"] = to_double(ch.a);
  root["chain"] = jc;

  if (deltaAdmissible) {
    json js;
    js["ball"] = csfuc_json(csfuc(delta, p, cal, false, false));
    js["cube"] = csfuc_json(csfuc(delta, p, cal, false, true));
    js["ball_homogeneous"] = csfuc_json(csfuc(delta, p, cal, true, false));
    root["csfuc"] = js;

    const ApplicationKappas kap = application_kappas(p, cal, delta, E0, lambda1);
    json jk;
    jk["kappa_short"] = log_value_from_ln(kap.lnKappaShort);
    jk["kappa_low"] = log_value_from_ln(kap.lnKappaLow);
    jk["kappa_lip"] = log_value_from_ln(kap.lnKappaLip);
    jk["n_real_zero"] = big_value_json(kap.NrealZero);
    jk["m_real"] = big_value_json(kap.Mreal);
    root["kappas"] = jk;

    root["control_cost"] = log_value_from_ln(control_cost(T, delta, p, cal));
  } else {
    root["csfuc"] = "skipped: requires delta <= delta0";
    root["kappas"] = "skipped: requires delta <= delta0";
    root["control_cost"] = "skipped: requires delta <= delta0";
  }

  const CoveringCounts cov = covering_counts(p, fixed);
  json jcov;
  jcov["k_d"] = to_double(cov.Kd);
  jcov["m_cube"] = big_value_json(cov.M);
  jcov["n_cover"] = big_value_json(cov.N);
  root["covering"] = jcov;

  return root;
}

}  // namespace ucplab
