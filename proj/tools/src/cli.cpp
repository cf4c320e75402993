#include "gostrata_cli/cli.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gostrata/gostrata.hpp"
#include "selftest.hpp"

namespace gos::cli {
namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv, Ascii };

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  return Format::Ascii;
}

std::string read_file(const std::string& path, const std::string& flag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(flag + ": cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  return out;
}

int parse_int(const std::string& s, const std::string& flag) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError(flag + ": not an integer: " + s);
  return v;
}

// "id:i", or a bare index on the first prime.
ArchPlace parse_place(const PlaceSystem& ps, const std::string& tok, const std::string& flag) {
  const auto colon = tok.rfind(':');
  int q = 0;
  std::string idx = tok;
  if (colon != std::string::npos) {
    q = ps.index_of(tok.substr(0, colon));
    if (q < 0) throw UsageError(flag + ": unknown prime " + tok.substr(0, colon));
    idx = tok.substr(colon + 1);
  }
  const int i = parse_int(idx, flag);
  if (i < 0 || i >= ps.prime(q).f) throw UsageError(flag + ": place index out of range: " + tok);
  return {q, i};
}

std::vector<Mask> parse_place_set(const PlaceSystem& ps, const std::string& list, const std::string& flag) {
  std::vector<Mask> m(static_cast<std::size_t>(ps.size()), 0);
  for (const std::string& tok : split_list(list)) {
    const ArchPlace a = parse_place(ps, tok, flag);
    m[static_cast<std::size_t>(a.prime)] |= bit(a.i);
  }
  return m;
}

std::string place_name(const PlaceSystem& ps, ArchPlace a) {
  return ps.prime(a.prime).id + ":" + std::to_string(a.i);
}

std::string mask_names(const PlaceSystem& ps, const std::vector<Mask>& m) {
  std::string out;
  for (int q = 0; q < ps.size(); ++q)
    for (int i : members(m[static_cast<std::size_t>(q)])) {
      if (!out.empty()) out += ' ';
      out += place_name(ps, {q, i});
    }
  return out;
}

std::string emb_name(const PlaceSystem& ps, int q, int j) {
  const int f = ps.prime(q).f;
  return ps.prime(q).id + ":" + std::to_string(j / f) + ":" + std::to_string(j % f);
}

void emit_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }
void emit_json(std::ostream& out, const std::string& text) { emit_json(out, ordered_json::parse(text)); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

template <class Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(jobs, n); ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

long resolve_p(const std::optional<long>& flag, const std::optional<long>& file) {
  if (flag) return *flag;
  if (file) return *file;
  throw UsageError("--p: required (or set \"p\" in the datum file)");
}

struct Common {
  std::string format;
  int jobs = 1;
  std::optional<long> p;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--format", c.format, "json, csv or ascii")
      ->check(CLI::IsMember({"json", "csv", "ascii"}))
      ->capture_default_str();
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256));
  sub->add_option("--p", c.p, "the residue characteristic")->check(CLI::Range(2L, 1000000L));
}

// ---------------------------------------------------------------- strata

struct StrataArgs {
  Common common;
  std::string datum;
  std::string t;
  std::optional<std::string> sheet;
  bool lift = false;
};

std::vector<Mask> sheet_choice(const DatumFile& df, const std::optional<std::string>& flag) {
  if (flag) return parse_place_set(df.datum.places, *flag, "--sheet");
  if (df.s_lift_sheet) return *df.s_lift_sheet;
  return std::vector<Mask>(static_cast<std::size_t>(df.datum.places.size()), 0);
}

std::string level_summary(const ShimuraDatum& d) {
  std::string out;
  for (int q = 0; q < d.places.size(); ++q) {
    if (!out.empty()) out += ' ';
    out += d.places.prime(q).id + "=" + level_name(d.level[static_cast<std::size_t>(q)]);
  }
  return out;
}

std::string case_summary(const ShimuraDatum& d, const StratumDescriptor& desc) {
  std::string out;
  for (int q = 0; q < d.places.size(); ++q) {
    if (!out.empty()) out += ' ';
    out += d.places.prime(q).id + "=" + case_name(desc.cases[static_cast<std::size_t>(q)]);
  }
  return out;
}

std::string sp_summary(const ShimuraDatum& d) {
  std::string out;
  for (int q = 0; q < d.places.size(); ++q)
    if (d.s.s_p[static_cast<std::size_t>(q)]) out += (out.empty() ? "" : " ") + d.places.prime(q).id;
  return out;
}

int run_strata(const StrataArgs& a, std::ostream& out) {
  const DatumFile df = datum_from_json(read_file(a.datum, "--datum"));
  const ShimuraDatum& d = df.datum;
  const std::vector<Mask> t = parse_place_set(d.places, a.t, "--T");
  const StratumDescriptor desc = stratum_descriptor(d, t);
  const Format fmt = parse_format(a.common.format);
  std::optional<std::pair<LiftChoice, DeltaSets>> lift;
  if (a.lift) {
    LiftOptions lo;
    lo.s_lift_sheet = sheet_choice(df, a.sheet);
    LiftChoice lc = lift_assignment(d, desc, lo);
    DeltaSets del = delta_sets(d, desc, lc);
    lift.emplace(std::move(lc), std::move(del));
  }
  switch (fmt) {
    case Format::Json: {
      ordered_json j = ordered_json::parse(descriptor_to_json(d, desc));
      if (lift) j["lift"] = ordered_json::parse(lift_to_json(d, lift->first, lift->second));
      emit_json(out, j);
      break;
    }
    case Format::Csv:
      out << "T,T_prime,S_of_T_infty,S_of_T_p,I_T,N,cases,level_T\n";
      out << csv_field(mask_names(d.places, desc.t)) << ',' << csv_field(mask_names(d.places, desc.t_prime))
          << ',' << csv_field(mask_names(d.places, desc.target.s.s_infty)) << ','
          << csv_field(sp_summary(desc.target)) << ',' << csv_field(mask_names(d.places, desc.i_t)) << ','
          << desc.n_bundle << ',' << csv_field(case_summary(d, desc)) << ','
          << csv_field(level_summary(desc.target)) << '\n';
      break;
    case Format::Ascii:
      out << "T        " << mask_names(d.places, desc.t) << '\n';
      out << "T'       " << mask_names(d.places, desc.t_prime) << '\n';
      out << "S(T)     " << mask_names(d.places, desc.target.s.s_infty) << '\n';
      out << "I_T      " << mask_names(d.places, desc.i_t) << '\n';
      out << "N        " << desc.n_bundle << '\n';
      out << "cases    " << case_summary(d, desc) << '\n';
      out << "levels   " << level_summary(desc.target) << '\n';
      for (int q = 0; q < d.places.size(); ++q) {
        out << "band " << d.places.prime(q).id << "  " << render_band_ascii(band_of(d, q)) << "  =>  "
            << render_band_ascii(band_of(desc.target, q)) << '\n';
      }
      break;
  }
  return kExitOk;
}

// ---------------------------------------------------------- strata-table

struct TableArgs {
  Common common;
  std::string datum;
};

int run_strata_table(const TableArgs& a, std::ostream& out) {
  const DatumFile df = datum_from_json(read_file(a.datum, "--datum"));
  const ShimuraDatum& d = df.datum;
  std::vector<ArchPlace> gap_places;
  for (int q = 0; q < d.places.size(); ++q)
    for (int i : members(d.gaps(q))) gap_places.push_back({q, i});
  if (gap_places.size() > 20) throw UsageError("--datum: more than 20 unramified places; the table would be too large");
  const int rows = 1 << gap_places.size();
  std::vector<StratumDescriptor> descs(static_cast<std::size_t>(rows));
  parallel_for(rows, a.common.jobs, [&](int r) {
    std::vector<Mask> t(static_cast<std::size_t>(d.places.size()), 0);
    for (std::size_t k = 0; k < gap_places.size(); ++k)
      if ((r >> k) & 1) t[static_cast<std::size_t>(gap_places[k].prime)] |= bit(gap_places[k].i);
    descs[static_cast<std::size_t>(r)] = stratum_descriptor(d, t);
  });
  switch (parse_format(a.common.format)) {
    case Format::Json: {
      ordered_json arr = ordered_json::array();
      for (const auto& desc : descs) arr.push_back(ordered_json::parse(descriptor_to_json(d, desc)));
      emit_json(out, arr);
      break;
    }
    case Format::Csv:
      out << "T,S_of_T_infty,S_of_T_p,I_T,N,cases,level_T\n";
      for (const auto& desc : descs)
        out << csv_field(mask_names(d.places, desc.t)) << ','
            << csv_field(mask_names(d.places, desc.target.s.s_infty)) << ','
            << csv_field(sp_summary(desc.target)) << ',' << csv_field(mask_names(d.places, desc.i_t)) << ','
            << desc.n_bundle << ',' << csv_field(case_summary(d, desc)) << ','
            << csv_field(level_summary(desc.target)) << '\n';
      break;
    case Format::Ascii: {
      std::size_t w = 4;
      for (const auto& desc : descs) w = std::max(w, mask_names(d.places, desc.t).size());
      out << std::left << std::setw(static_cast<int>(w)) << "T" << "  N  " << "S(T)" << '\n';
      for (const auto& desc : descs) {
        out << std::left << std::setw(static_cast<int>(w)) << mask_names(d.places, desc.t) << "  "
            << desc.n_bundle << "  " << mask_names(d.places, desc.target.s.s_infty);
        const std::string sp = sp_summary(desc.target);
        if (!sp.empty()) out << " + " << sp;
        for (int q = 0; q < d.places.size(); ++q)
          if (desc.target.level[static_cast<std::size_t>(q)] != Level::Hyperspecial)
            out << "  [" << d.places.prime(q).id << ' ' << level_name(desc.target.level[static_cast<std::size_t>(q)])
                << ']';
        out << '\n';
      }
      break;
    }
  }
  return kExitOk;
}

// ------------------------------------------------------------------ link

struct LinkArgs {
  Common common;
  std::optional<std::string> validate;
  std::vector<std::string> compose;
  std::optional<long> frobenius;
  std::optional<std::string> standard;
  std::optional<std::string> datum;
  std::string prime;
  int tau = 0;
  int sheet = 0;
};

int emit_link(const Link& l, Format fmt, std::ostream& out) {
  if (fmt == Format::Ascii) {
    out << render_link_ascii(l) << "v " << total_displacement(l) << '\n';
  } else if (fmt == Format::Csv) {
    out << "source,target,displacement\n";
    for (const auto& [v, dd] : l.disp) out << v << ',' << mod(v + dd, l.source.n) << ',' << dd << '\n';
  } else {
    emit_json(out, link_to_json(l));
  }
  return kExitOk;
}

int run_link(const LinkArgs& a, std::ostream& out) {
  const int modes = (a.validate ? 1 : 0) + (a.compose.empty() ? 0 : 1) + (a.frobenius ? 1 : 0) + (a.standard ? 1 : 0);
  if (modes != 1) throw UsageError("link: give exactly one of --validate, --compose, --frobenius, --standard");
  const Format fmt = parse_format(a.common.format);

  if (a.validate) {
    const Link l = link_from_json(read_file(*a.validate, "--validate"));
    const LinkReport rep = validate_link(l);
    if (fmt == Format::Json) {
      ordered_json j = {{"ok", rep.ok}, {"violation", rep.violation}, {"warnings", rep.warnings}};
      if (rep.ok) j["v"] = total_displacement(l);
      emit_json(out, j);
    } else if (fmt == Format::Csv) {
      out << "ok,violation,v\n" << (rep.ok ? "true" : "false") << ',' << csv_field(rep.violation) << ','
          << (rep.ok ? std::to_string(total_displacement(l)) : std::string()) << '\n';
    } else {
      out << render_link_ascii(l) << (rep.ok ? "valid" : "invalid: " + rep.violation) << '\n';
      for (const auto& w : rep.warnings) out << "warning: " << w << '\n';
      if (rep.ok) out << "v " << total_displacement(l) << '\n';
    }
    return rep.ok ? kExitOk : kExitDomain;
  }
  if (!a.compose.empty()) {
    if (a.compose.size() != 2) throw UsageError("--compose: expects two link files");
    // a.json after b.json: b is applied first.
    const Link outer = link_from_json(read_file(a.compose[0], "--compose"));
    const Link inner = link_from_json(read_file(a.compose[1], "--compose"));
    return emit_link(compose(outer, inner), fmt, out);
  }
  if (!a.datum) throw UsageError("--datum: required for --frobenius and --standard");
  const DatumFile df = datum_from_json(read_file(*a.datum, "--datum"));
  int q = 0;
  if (!a.prime.empty()) {
    q = df.datum.places.index_of(a.prime);
    if (q < 0) throw UsageError("--prime: unknown prime " + a.prime);
  }
  if (a.frobenius) return emit_link(frobenius_link(df.datum, q, *a.frobenius), fmt, out);

  StandardParams prm;
  prm.prime = q;
  prm.tau = a.tau;
  prm.sheet = a.sheet;
  if (df.s_lift_sheet) prm.s_lift = default_s_lift(df.datum, *df.s_lift_sheet)[static_cast<std::size_t>(q)];
  const LinkMorphismDescriptor m = standard_morphism(parse_morphism_kind(*a.standard), df.datum, prm);
  std::optional<long> p = a.common.p ? a.common.p : df.p;
  if (fmt == Format::Json) {
    emit_json(out, morphism_to_json(m, p));
  } else if (fmt == Format::Csv) {
    out << "kind,v,indentation,degree_exponent\n"
        << morphism_kind_name(m.note) << ',' << total_displacement(m.link) << ',' << m.indentation << ','
        << (m.degree_exponent ? std::to_string(*m.degree_exponent) : std::string()) << '\n';
  } else {
    out << morphism_kind_name(m.note) << '\n' << render_link_ascii(m.link);
    out << "v " << total_displacement(m.link) << "\nindentation " << m.indentation << '\n';
    if (m.degree_exponent) out << "degree p^" << *m.degree_exponent << '\n';
  }
  return kExitOk;
}

// ----------------------------------------------------------------- ample

struct AmpleArgs {
  Common common;
  std::string datum;
  std::optional<std::string> t;
};

int run_ample(const AmpleArgs& a, std::ostream& out) {
  const DatumFile df = datum_from_json(read_file(a.datum, "--datum"));
  const long p = resolve_p(a.common.p, df.p);
  const auto cone = ampleness_cone(df.datum, p);
  const PicardBasis basis = picard_basis(df.datum);
  std::optional<std::vector<Rational>> t;
  std::optional<AmpleResult> res;
  if (a.t) {
    std::vector<Rational> v;
    for (const std::string& tok : split_list(*a.t)) {
      try {
        v.push_back(rational_from_string(tok));
      } catch (const DomainError&) {
        throw UsageError("--t: not a rational number: " + tok);
      }
    }
    if (static_cast<int>(v.size()) != basis.size())
      throw UsageError("--t: expected " + std::to_string(basis.size()) + " weights");
    res = ample_necessary(df.datum, p, v);
    t = std::move(v);
  }
  auto holds = [&](const Inequality& q) {
    return Rational(q.coeff) * (*t)[static_cast<std::size_t>(basis.index_of(q.big))] >
           (*t)[static_cast<std::size_t>(basis.index_of(q.small))];
  };
  const char* note = "necessary condition only";
  switch (parse_format(a.common.format)) {
    case Format::Json: {
      ordered_json j;
      j["p"] = p;
      ordered_json names = ordered_json::array();
      for (const auto& tau : basis.taus) names.push_back(place_name(df.datum.places, tau));
      j["basis"] = names;
      ordered_json ineq = ordered_json::array();
      for (const auto& q : cone) ineq.push_back({{"lhs", q.lhs}, {"op", ">"}, {"rhs", q.rhs}});
      j["inequalities"] = ineq;
      if (res) {
        ordered_json tv = ordered_json::array();
        for (const auto& x : *t) tv.push_back(rational_to_string(x));
        j["t"] = tv;
        j["pass"] = res->pass;
        ordered_json viol = ordered_json::array();
        for (const auto& v : res->violations) viol.push_back(place_name(df.datum.places, v));
        j["violations"] = viol;
      }
      j["note"] = note;
      emit_json(out, j);
      break;
    }
    case Format::Csv:
      out << "# " << note << '\n' << "lhs,op,rhs" << (res ? ",holds" : "") << '\n';
      for (const auto& q : cone) {
        out << q.lhs << ",>," << q.rhs;
        if (res) out << ',' << (holds(q) ? "true" : "false");
        out << '\n';
      }
      break;
    case Format::Ascii:
      for (const auto& q : cone) {
        out << q.lhs << " > " << q.rhs;
        if (res) out << (holds(q) ? "   ok" : "   violated");
        out << '\n';
      }
      if (res) out << (res->pass ? "pass" : "fail") << '\n';
      out << note << '\n';
      break;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- picard

struct PicardArgs {
  Common common;
  std::string datum;
  bool matrix = false;
  std::optional<std::string> cls;
  bool fiber = false;
};

int run_picard(const PicardArgs& a, std::ostream& out) {
  const int modes = (a.matrix ? 1 : 0) + (a.cls ? 1 : 0) + (a.fiber ? 1 : 0);
  if (modes != 1) throw UsageError("picard: give exactly one of --matrix, --class, --fiber-degree");
  const DatumFile df = datum_from_json(read_file(a.datum, "--datum"));
  const ShimuraDatum& d = df.datum;
  const long p = resolve_p(a.common.p, df.p);
  const Format fmt = parse_format(a.common.format);
  const PicardBasis basis = picard_basis(d);
  std::vector<std::string> names;
  for (const auto& tau : basis.taus) names.push_back(place_name(d.places, tau));
  auto strs = [](const std::vector<Rational>& v) {
    std::vector<std::string> s;
    for (const auto& x : v) s.push_back(rational_to_string(x));
    return s;
  };

  if (a.matrix) {
    const HasseMatrix h = hasse_matrix(d, p);
    if (fmt == Format::Json) {
      ordered_json rows = ordered_json::array();
      for (const auto& r : h.c) rows.push_back(strs(r));
      emit_json(out, ordered_json{{"basis", names}, {"C", rows}, {"det", rational_to_string(h.det)}});
    } else {
      const char sep = fmt == Format::Csv ? ',' : ' ';
      if (fmt == Format::Csv) out << "row";
      else out << std::setw(8) << "";
      for (const auto& n : names) out << sep << std::setw(fmt == Format::Csv ? 0 : 8) << n;
      out << '\n';
      for (std::size_t i = 0; i < h.c.size(); ++i) {
        if (fmt == Format::Csv) out << names[i];
        else out << std::setw(8) << names[i];
        for (const auto& x : h.c[i]) out << sep << std::setw(fmt == Format::Csv ? 0 : 8) << rational_to_string(x);
        out << '\n';
      }
      out << (fmt == Format::Csv ? "det," : "det ") << rational_to_string(h.det) << '\n';
    }
    return kExitOk;
  }
  if (a.cls) {
    const ArchPlace tau = parse_place(d.places, *a.cls, "--class");
    const PicardVector v = divisor_class(d, p, tau);
    const HasseMatrix h = hasse_matrix(d, p);
    const auto coords = in_hasse_coordinates(h, v);
    if (fmt == Format::Json) {
      emit_json(out, ordered_json{{"tau", place_name(d.places, tau)},
                                  {"basis", names},
                                  {"class", strs(v.coeffs)},
                                  {"hasse_coordinates", strs(coords)}});
    } else {
      if (fmt == Format::Csv) out << "place,coefficient,hasse_coordinate\n";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (fmt == Format::Csv)
          out << names[i] << ',' << rational_to_string(v.coeffs[i]) << ',' << rational_to_string(coords[i]) << '\n';
        else
          out << names[i] << "  " << rational_to_string(v.coeffs[i]) << "  (" << rational_to_string(coords[i])
              << " in Hasse coordinates)\n";
      }
    }
    return kExitOk;
  }
  ordered_json rows = ordered_json::array();
  if (fmt == Format::Csv) out << "tau,n_tau,fiber_degree,normal_bundle\n";
  for (const auto& tau : basis.taus) {
    const Rational fd = fiber_degree(d, p, divisor_class(d, p, tau), tau);
    std::optional<BigInt> nb;
    try {
      nb = normal_bundle_class(d, p, tau);
    } catch (const DomainError& e) {
      if (e.code() != ErrorCode::Inapplicable) throw;
    }
    const int n = n_tau(d, tau).n;
    const std::string name = place_name(d.places, tau);
    if (fmt == Format::Json) {
      ordered_json r = {{"tau", name}, {"n_tau", n}, {"fiber_degree", rational_to_string(fd)}};
      r["normal_bundle"] = nb ? ordered_json(nb->str()) : ordered_json(nullptr);
      rows.push_back(r);
    } else if (fmt == Format::Csv) {
      out << name << ',' << n << ',' << rational_to_string(fd) << ',' << (nb ? nb->str() : "") << '\n';
    } else {
      out << name << "  n=" << n << "  fiber degree " << rational_to_string(fd);
      if (nb) out << "  normal bundle " << nb->str();
      out << '\n';
    }
  }
  if (fmt == Format::Json) emit_json(out, ordered_json{{"p", p}, {"rows", rows}});
  return kExitOk;
}

// ------------------------------------------------------------- dieudonne

struct DieudonneArgs {
  Common common;
  bool classify = false;
  bool roundtrip = false;
  bool twist = false;
  std::optional<std::string> point;
  std::optional<std::string> datum;
  std::optional<std::uint64_t> seed;
  std::optional<int> f;
  int trials = 1;
  int trial = 0;
  int N = 8;
  bool emit_point = false;
};

DieudonnePoint load_point(const std::string& path) {
  const PointFile pf = point_file_from_json(read_file(path, "--point"));
  return make_point(pf.ring, pf.datum, pf.f_mats, pf.pairings,
                    signature_from_lift(pf.datum.places, {pf.s_lift}).s[0], pf.s_lift);
}

struct Sampler {
  long p = 0;
  int f = 0;
  int N = 8;
  std::uint64_t seed = 0;
  std::optional<ShimuraDatum> datum;
};

Sampler make_sampler(const DieudonneArgs& a) {
  Sampler s;
  if (!a.seed) throw UsageError("--seed: required for randomized points");
  s.seed = *a.seed;
  if (a.datum) {
    const DatumFile df = datum_from_json(read_file(*a.datum, "--datum"));
    s.datum = df.datum;
    s.f = df.datum.f(0);
    s.p = resolve_p(a.common.p, df.p);
  } else {
    if (!a.f) throw UsageError("--f: required unless --datum is given");
    s.f = *a.f;
    s.p = resolve_p(a.common.p, std::nullopt);
  }
  s.N = a.N;
  return s;
}

std::string stratum_names(const DieudonnePoint& pt, Mask t) { return mask_names(pt.datum.places, {t}); }

int run_dieudonne(const DieudonneArgs& a, std::ostream& out) {
  const int modes = (a.classify ? 1 : 0) + (a.roundtrip ? 1 : 0) + (a.twist ? 1 : 0);
  if (modes != 1) throw UsageError("dieudonne: give exactly one of --classify, --roundtrip, --twist");
  const Format fmt = parse_format(a.common.format);
  if (fmt == Format::Csv) throw UsageError("--format: csv is not available for dieudonne");

  if (a.roundtrip) {
    struct Row {
      RoundtripOutcome outcome;
      bool identities = true;
    };
    std::vector<Row> rows;
    if (a.point) {
      const DieudonnePoint pt = load_point(*a.point);
      Mask sheet1 = 0;
      for (int i : members(pt.datum.s_at(0)))
        if (has(pt.s_lift, pt.iso->f + i)) sheet1 |= bit(i);
      rows.push_back({roundtrip_all_strata(pt, sheet1), check_frobenius_identities(pt).ok()});
    } else {
      const Sampler s = make_sampler(a);
      if (a.trials < 1) throw UsageError("--trials: must be positive");
      rows.resize(static_cast<std::size_t>(a.trials));
      parallel_for(a.trials, a.common.jobs, [&](int i) {
        Row& r = rows[static_cast<std::size_t>(i)];
        try {
          const TrialSample t = sample_trial(s.p, s.f, s.N, s.seed, static_cast<std::uint64_t>(i), s.datum);
          r.outcome = roundtrip_all_strata(t.point, t.sheet1);
          r.identities = check_frobenius_identities(t.point).ok();
        } catch (const DomainError& e) {
          r.outcome.failure = e.what();
        }
      });
    }
    int exact = 0;
    long strata = 0;
    for (const Row& r : rows) {
      exact += r.outcome.exact() ? 1 : 0;
      strata += r.outcome.strata_checked;
    }
    const int total = static_cast<int>(rows.size());
    if (fmt == Format::Json) {
      ordered_json fails = ordered_json::array();
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].outcome.exact()) fails.push_back({{"trial", i}, {"reason", rows[i].outcome.failure}});
      emit_json(out, ordered_json{{"trials", total}, {"exact", exact}, {"strata_checked", strata}, {"failures", fails}});
    } else {
      out << exact << '/' << total << " roundtrips exact\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].outcome.exact()) out << "trial " << i << ": " << rows[i].outcome.failure << '\n';
    }
    return exact == total ? kExitOk : kExitDomain;
  }

  DieudonnePoint pt;
  if (a.point) {
    pt = load_point(*a.point);
  } else {
    const Sampler s = make_sampler(a);
    pt = sample_trial(s.p, s.f, s.N, s.seed, static_cast<std::uint64_t>(a.trial), s.datum).point;
  }
  const Mask stratum = stratum_of_point(pt);

  if (a.classify) {
    const PointReport rep = check_point(pt);
    const IdentityReport ids = check_frobenius_identities(pt);
    if (fmt == Format::Json) {
      ordered_json hasse = ordered_json::array();
      for (int i : members(pt.datum.gaps(0)))
        for (int j : {i, pt.iso->conj(i)})
          hasse.push_back({{"embedding", emb_name(pt.datum.places, 0, j)}, {"vanishes", hasse_vanishes(pt, j)}});
      ordered_json j = {{"valid", rep.ok},
                        {"signature", pt.signature},
                        {"stratum", ordered_json::array()},
                        {"hasse", hasse},
                        {"frobenius_identities", ids.ok()}};
      for (int i : members(stratum)) j["stratum"].push_back(place_name(pt.datum.places, {0, i}));
      if (a.emit_point) j["point"] = ordered_json::parse(point_to_json(pt));
      emit_json(out, j);
    } else {
      out << "valid " << (rep.ok ? "yes" : "no: " + rep.violation) << '\n';
      out << "signature";
      for (int s : pt.signature) out << ' ' << s;
      out << "\nstratum " << stratum_names(pt, stratum) << '\n';
      out << "frobenius identities " << (ids.ok() ? "hold" : "fail: " + ids.detail) << '\n';
    }
    return rep.ok && ids.ok() ? kExitOk : kExitDomain;
  }

  const DieudonnePoint tw = twisted_partial_frobenius(pt);
  const Mask after = stratum_of_point(tw);
  const Mask expected = shift_emask(pt.iso->f, true, stratum, 2) & full_mask(pt.iso->f);
  const bool ok = after == expected;
  if (fmt == Format::Json) {
    auto names = [&](Mask m) {
      ordered_json arr = ordered_json::array();
      for (int i : members(m)) arr.push_back(place_name(pt.datum.places, {0, i}));
      return arr;
    };
    emit_json(out, ordered_json{{"stratum", names(stratum)},
                                {"twisted_stratum", names(after)},
                                {"expected", names(expected)},
                                {"consistent", ok}});
  } else {
    out << "stratum          " << stratum_names(pt, stratum) << '\n';
    out << "twisted stratum  " << stratum_names(tw, after) << '\n';
    out << (ok ? "consistent with sigma^2" : "NOT consistent with sigma^2") << '\n';
  }
  return ok ? kExitOk : kExitDomain;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Goren-Oort strata, link morphisms and Dieudonne modules", "gostrata"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "gostrata 0.1.0");

  StrataArgs sa;
  auto* strata = app.add_subcommand("strata", "describe one stratum");
  add_common(strata, sa.common, "json");
  strata->add_option("--datum", sa.datum, "datum JSON file")->required();
  strata->add_option("--T", sa.t, "comma-separated places, e.g. p1:0,p1:2");
  strata->add_flag("--lift", sa.lift, "also emit the lifted sets and the Delta sets");
  strata->add_option("--sheet", sa.sheet, "S places whose lift sits on sheet 1");

  TableArgs ta;
  auto* table = app.add_subcommand("strata-table", "every stratum of a datum");
  add_common(table, ta.common, "json");
  table->add_option("--datum", ta.datum, "datum JSON file")->required();

  LinkArgs la;
  auto* link = app.add_subcommand("link", "link calculus");
  add_common(link, la.common, "json");
  link->add_option("--validate", la.validate, "link JSON file");
  link->add_option("--compose", la.compose, "two link files; the second is applied first")->expected(2);
  link->add_option("--frobenius", la.frobenius, "power of the Frobenius link");
  link->add_option("--standard", la.standard, "PartialFrobenius, DeltaTau0, EtaTauMinusPlus or TrivialHecke");
  link->add_option("--datum", la.datum, "datum JSON file");
  link->add_option("--prime", la.prime, "prime id (defaults to the first)");
  link->add_option("--tau", la.tau, "cycle index of tau (tau_0 for DeltaTau0)");
  link->add_option("--sheet", la.sheet, "sheet of the lift of tau_0");

  AmpleArgs aa;
  auto* ample = app.add_subcommand("ample", "necessary ampleness inequalities");
  add_common(ample, aa.common, "json");
  ample->add_option("--datum", aa.datum, "datum JSON file")->required();
  ample->add_option("--t", aa.t, "comma-separated rational weights in basis order");

  PicardArgs pa;
  auto* picard = app.add_subcommand("picard", "Hasse divisor classes");
  add_common(picard, pa.common, "json");
  picard->add_option("--datum", pa.datum, "datum JSON file")->required();
  picard->add_flag("--matrix", pa.matrix, "matrix of vanishing-locus classes");
  picard->add_option("--class", pa.cls, "class of the vanishing locus at a place");
  picard->add_flag("--fiber-degree", pa.fiber, "fiber degrees and normal bundles");

  DieudonneArgs da;
  auto* dieu = app.add_subcommand("dieudonne", "Dieudonne module points");
  add_common(dieu, da.common, "json");
  dieu->add_flag("--classify", da.classify, "validate a point and report its stratum");
  dieu->add_flag("--roundtrip", da.roundtrip, "isogeny triple and reconstruction over every stratum");
  dieu->add_flag("--twist", da.twist, "twisted partial Frobenius");
  dieu->add_option("--point", da.point, "point JSON file");
  dieu->add_option("--datum", da.datum, "single-prime datum for random points");
  dieu->add_option("--seed", da.seed, "seed for random points");
  dieu->add_option("--f", da.f, "inertia degree for random data")->check(CLI::Range(1, 8));
  dieu->add_option("--trials", da.trials, "number of random points");
  dieu->add_option("--trial", da.trial, "index of the random point to classify or twist");
  dieu->add_option("--N", da.N, "Witt vector length")->check(CLI::Range(6, 12));
  dieu->add_flag("--emit-point", da.emit_point, "include the point itself in the JSON report");

  SelftestArgs st;
  auto* self = app.add_subcommand("selftest", "run the built-in verification suites");
  self->add_flag("--quick", st.quick, "smaller sweeps");
  self->add_option("--jobs", st.jobs, "worker threads")->check(CLI::Range(1, 256));

  std::vector<const char*> argv{"gostrata"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  // dieudonne --roundtrip reads best as a one-line summary unless a format is requested.
  if (dieu->parsed() && da.roundtrip && dieu->count("--format") == 0) da.common.format = "ascii";

  try {
    if (strata->parsed()) return run_strata(sa, out);
    if (table->parsed()) return run_strata_table(ta, out);
    if (link->parsed()) return run_link(la, out);
    if (ample->parsed()) return run_ample(aa, out);
    if (picard->parsed()) return run_picard(pa, out);
    if (dieu->parsed()) return run_dieudonne(da, out);
    return run_selftest(st, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error (" << error_code_name(e.code()) << "): " << e.what() << '\n';
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "error (InvalidArgument): malformed JSON: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace gos::cli
