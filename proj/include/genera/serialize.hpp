#pragma once
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "genera/multiseries.hpp"

// Versioned line-oriented text format for MultiSeries, bit-exact round trip.
//
//   multiseries v1 ring=elg pmax=<P> qmax=<Q>
//   multiseries v1 ring=cob pmax=<P> K=<K> dmax=<D>
//   pwin <n> s <slo> <shi|inf> u <ulo> <uhi|inf>     one per p-order
//   ywin <n> <b> <c> <d> <valid>                     elg rows cut by a y-window
//   begin
//   p^<n> s^<b> u^<c> q^<d> y2^<e> : <num>[/<den>]   elg
//   p^<n> s^<b> u^<c> v[<e1>,..,<eK>] : <num>[/<den>]  cob
//   end
//
// Normalized YLaurent rows keep lo at the first stored exponent, so only the
// validity cap needs a ywin line; windowed-empty rows are pure ywin entries.

namespace genera {

struct SeriesFileInfo {
  std::string ring;  // "elg" or "cob"
  int pmax = 0;
  int qmax = 0;  // elg
  int K = 0, dmax = 0;  // cob
};

namespace detail {

inline std::string cap_str(int v) { return v == kExact ? "inf" : std::to_string(v); }

inline int parse_int(const std::string& tok, int lineno, const char* what) {
  try {
    size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw config_error("line " + std::to_string(lineno) + ": bad " + std::string(what) + " '" + tok + "'");
  }
}

inline int parse_cap(const std::string& tok, int lineno, const char* what) {
  return tok == "inf" ? kExact : parse_int(tok, lineno, what);
}

inline int parse_expo(const std::string& tok, const std::string& prefix, int lineno) {
  if (tok.size() <= prefix.size() || tok.compare(0, prefix.size(), prefix) != 0)
    throw config_error("line " + std::to_string(lineno) + ": expected " + prefix + "<int>, got '" + tok + "'");
  return parse_int(tok.substr(prefix.size()), lineno, "exponent");
}

inline Q parse_rational(const std::string& tok, int lineno) {
  if (tok.empty() || tok.find_first_not_of("-0123456789/") != std::string::npos)
    throw config_error("line " + std::to_string(lineno) + ": bad rational '" + tok + "'");
  Q r;
  if (mpq_set_str(r.get_mpq_t(), tok.c_str(), 10) != 0)
    throw config_error("line " + std::to_string(lineno) + ": bad rational '" + tok + "'");
  r.canonicalize();
  return r;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// Reads physical lines, skipping blanks; tracks line numbers for diagnostics.
struct LineReader {
  std::istream& in;
  int lineno = 0;
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        return true;
      }
    }
    return false;
  }
};

template <class R>
inline void write_pwin_lines(std::ostream& os, const MultiSeries<R>& f) {
  for (int n = 0; n <= f.nmax; ++n) {
    const auto& l = f.a[static_cast<size_t>(n)];
    os << "pwin " << n << " s " << l.s_lo << ' ' << cap_str(l.s_hi) << " u " << l.u_lo << ' ' << cap_str(l.u_hi)
       << '\n';
  }
}

}  // namespace detail

inline SeriesFileInfo parse_series_header(const std::string& line, int lineno = 1) {
  auto tok = detail::tokens(line);
  if (tok.size() < 4 || tok[0] != "multiseries" || tok[1] != "v1")
    throw config_error("line " + std::to_string(lineno) + ": not a multiseries v1 header: '" + line + "'");
  SeriesFileInfo info;
  bool have_pmax = false;
  for (size_t i = 2; i < tok.size(); ++i) {
    auto eq = tok[i].find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": bad header field '" + tok[i] + "'");
    std::string key = tok[i].substr(0, eq), val = tok[i].substr(eq + 1);
    if (key == "ring") {
      info.ring = val;
    } else if (key == "pmax") {
      info.pmax = detail::parse_int(val, lineno, "pmax");
      have_pmax = true;
    } else if (key == "qmax") {
      info.qmax = detail::parse_int(val, lineno, "qmax");
    } else if (key == "K") {
      info.K = detail::parse_int(val, lineno, "K");
    } else if (key == "dmax") {
      info.dmax = detail::parse_int(val, lineno, "dmax");
    } else {
      throw config_error("line " + std::to_string(lineno) + ": unknown header field '" + key + "'");
    }
  }
  if (info.ring != "elg" && info.ring != "cob")
    throw config_error("line " + std::to_string(lineno) + ": unknown ring tag '" + info.ring + "'");
  if (!have_pmax || info.pmax < 0)
    throw config_error("line " + std::to_string(lineno) + ": header missing pmax");
  if (info.ring == "elg" && info.qmax < 0) throw config_error("header qmax < 0");
  if (info.ring == "cob" && (info.K <= 0 || info.dmax < 0))
    throw config_error("line " + std::to_string(lineno) + ": cob header needs K and dmax");
  return info;
}

inline void write_multiseries(std::ostream& os, const MultiElg& f) {
  int qm = f.a.at(0).proto.qmax;
  for (const auto& layer : f.a) {
    if (layer.proto.qmax != qm) throw config_error("mixed q-truncations in one series");
    for (const auto& [k, v] : layer.m)
      if (v.qmax != qm) throw config_error("mixed q-truncations in one series");
  }
  os << "multiseries v1 ring=elg pmax=" << f.nmax << " qmax=" << qm << '\n';
  detail::write_pwin_lines(os, f);
  for (int n = 0; n <= f.nmax; ++n)
    for (const auto& [k, v] : f.a[static_cast<size_t>(n)].m)
      for (int d = 0; d <= qm; ++d)
        if (v.qrow(d).valid != kExact)
          os << "ywin " << n << ' ' << k.first << ' ' << k.second << ' ' << d << ' ' << v.qrow(d).valid << '\n';
  os << "begin\n";
  for (int n = 0; n <= f.nmax; ++n)
    for (const auto& [k, v] : f.a[static_cast<size_t>(n)].m)
      for (int d = 0; d <= qm; ++d) {
        const YLaurent& row = v.qrow(d);
        for (size_t i = 0; i < row.a.size(); ++i)
          if (!qzero(row.a[i]))
            os << "p^" << n << " s^" << k.first << " u^" << k.second << " q^" << d << " y2^"
               << row.lo + static_cast<int>(i) << " : " << row.a[i].get_str() << '\n';
      }
  os << "end\n";
}

inline void write_multiseries(std::ostream& os, const MultiCob& f) {
  const VRing* ring = f.a.at(0).proto.ring;
  for (const auto& layer : f.a) {
    if (layer.proto.ring != ring) throw config_error("mixed v-rings in one series");
    for (const auto& [k, v] : layer.m)
      if (v.ring != ring) throw config_error("mixed v-rings in one series");
  }
  os << "multiseries v1 ring=cob pmax=" << f.nmax << " K=" << ring->K << " dmax=" << ring->Dmax << '\n';
  detail::write_pwin_lines(os, f);
  os << "begin\n";
  for (int n = 0; n <= f.nmax; ++n)
    for (const auto& [k, v] : f.a[static_cast<size_t>(n)].m)
      for (size_t i = 0; i < v.c.size(); ++i) {
        if (qzero(v.c[i])) continue;
        os << "p^" << n << " s^" << k.first << " u^" << k.second << " v[";
        for (int j = 0; j < ring->K; ++j) os << (j ? "," : "") << ring->mono[i][static_cast<size_t>(j)];
        os << "] : " << v.c[i].get_str() << '\n';
      }
  os << "end\n";
}

namespace detail {

struct ParsedBody {
  SeriesFileInfo info;
  // pwin per order: s_lo s_hi u_lo u_hi
  std::vector<std::array<int, 4>> pwin;
  // body lines, already split into tokens, with line numbers
  std::vector<std::pair<int, std::vector<std::string>>> ywin, monomials;
};

inline ParsedBody parse_series_file(std::istream& in) {
  LineReader rd{in};
  std::string line;
  if (!rd.next(line)) throw config_error("empty series file");
  ParsedBody out;
  out.info = parse_series_header(line, rd.lineno);
  out.pwin.assign(static_cast<size_t>(out.info.pmax) + 1, {0, kExact, 0, kExact});
  std::vector<bool> seen(static_cast<size_t>(out.info.pmax) + 1, false);
  bool in_body = false, ended = false;
  while (rd.next(line)) {
    auto tok = tokens(line);
    if (!in_body) {
      if (tok[0] == "begin") {
        in_body = true;
      } else if (tok[0] == "pwin") {
        if (tok.size() != 8 || tok[2] != "s" || tok[5] != "u")
          throw config_error("line " + std::to_string(rd.lineno) + ": malformed pwin line");
        int n = parse_int(tok[1], rd.lineno, "p-order");
        if (n < 0 || n > out.info.pmax)
          throw config_error("line " + std::to_string(rd.lineno) + ": pwin order " + tok[1] + " out of range");
        if (seen[static_cast<size_t>(n)])
          throw config_error("line " + std::to_string(rd.lineno) + ": duplicate pwin for order " + tok[1]);
        seen[static_cast<size_t>(n)] = true;
        out.pwin[static_cast<size_t>(n)] = {parse_int(tok[3], rd.lineno, "s_lo"), parse_cap(tok[4], rd.lineno, "s_hi"),
                                            parse_int(tok[6], rd.lineno, "u_lo"), parse_cap(tok[7], rd.lineno, "u_hi")};
      } else if (tok[0] == "ywin") {
        if (out.info.ring != "elg")
          throw config_error("line " + std::to_string(rd.lineno) + ": ywin line in a cob series");
        if (tok.size() != 6) throw config_error("line " + std::to_string(rd.lineno) + ": malformed ywin line");
        out.ywin.emplace_back(rd.lineno, std::move(tok));
      } else {
        throw config_error("line " + std::to_string(rd.lineno) + ": unexpected line before begin: '" + line + "'");
      }
    } else {
      if (tok[0] == "end") {
        ended = true;
        break;
      }
      out.monomials.emplace_back(rd.lineno, std::move(tok));
    }
  }
  if (!in_body || !ended) throw config_error("series file truncated: missing " + std::string(in_body ? "end" : "begin"));
  for (int n = 0; n <= out.info.pmax; ++n)
    if (!seen[static_cast<size_t>(n)]) throw config_error("series file missing pwin for order " + std::to_string(n));
  return out;
}

}  // namespace detail

inline MultiElg read_multiseries_elg(std::istream& in) {
  auto body = detail::parse_series_file(in);
  if (body.info.ring != "elg") throw config_error("expected an elg series, file says ring=" + body.info.ring);
  const int qm = body.info.qmax;
  MultiElg f(body.info.pmax, SULayer<QYSeries>(QYSeries::zero(qm)));
  // (n, b, c) -> raw QYSeries under assembly
  std::map<std::tuple<int, int, int>, QYSeries> entries;
  auto entry = [&](int n, int b, int c) -> QYSeries& {
    auto it = entries.find({n, b, c});
    if (it == entries.end()) it = entries.emplace(std::make_tuple(n, b, c), QYSeries::zero(qm)).first;
    return it->second;
  };
  for (const auto& [lineno, tok] : body.ywin) {
    int n = detail::parse_int(tok[1], lineno, "p-order");
    if (n < 0 || n > body.info.pmax) throw config_error("line " + std::to_string(lineno) + ": ywin order out of range");
    int b = detail::parse_int(tok[2], lineno, "s-exponent");
    int c = detail::parse_int(tok[3], lineno, "u-exponent");
    int d = detail::parse_int(tok[4], lineno, "q-exponent");
    if (d < 0 || d > qm) throw config_error("line " + std::to_string(lineno) + ": ywin q-exponent beyond qmax");
    entry(n, b, c).qrow_mut(d).valid = detail::parse_int(tok[5], lineno, "y-validity");
  }
  for (const auto& [lineno, tok] : body.monomials) {
    if (tok.size() != 7 || tok[5] != ":")
      throw config_error("line " + std::to_string(lineno) + ": malformed elg monomial line");
    int n = detail::parse_expo(tok[0], "p^", lineno);
    if (n < 0 || n > body.info.pmax)
      throw config_error("line " + std::to_string(lineno) + ": p-exponent out of range");
    int b = detail::parse_expo(tok[1], "s^", lineno);
    int c = detail::parse_expo(tok[2], "u^", lineno);
    int d = detail::parse_expo(tok[3], "q^", lineno);
    if (d < 0 || d > qm) throw config_error("line " + std::to_string(lineno) + ": q-exponent beyond qmax");
    int e = detail::parse_expo(tok[4], "y2^", lineno);
    YLaurent& row = entry(n, b, c).qrow_mut(d);
    if (row.valid != kExact && e > row.valid)
      throw config_error("line " + std::to_string(lineno) + ": stored coefficient above its ywin validity");
    if (row.a.empty()) {
      row.lo = e;
      row.a.assign(1, Q(0));
    } else if (e < row.lo) {
      row.a.insert(row.a.begin(), static_cast<size_t>(row.lo - e), Q(0));
      row.lo = e;
    } else if (e > row.hi_stored()) {
      row.a.resize(static_cast<size_t>(e - row.lo) + 1, Q(0));
    }
    Q& slot = row.a[static_cast<size_t>(e - row.lo)];
    if (!qzero(slot)) throw config_error("line " + std::to_string(lineno) + ": duplicate monomial");
    slot = detail::parse_rational(tok[6], lineno);
  }
  for (auto& [key, v] : entries) {
    for (auto& row : v.row) row.normalize();
    auto [n, b, c] = key;
    f.a[static_cast<size_t>(n)].m[{b, c}] = std::move(v);
  }
  for (int n = 0; n <= f.nmax; ++n) {
    auto& l = f.a[static_cast<size_t>(n)];
    l.s_lo = body.pwin[static_cast<size_t>(n)][0];
    l.s_hi = body.pwin[static_cast<size_t>(n)][1];
    l.u_lo = body.pwin[static_cast<size_t>(n)][2];
    l.u_hi = body.pwin[static_cast<size_t>(n)][3];
    l.normalize();
  }
  return f;
}

inline MultiCob read_multiseries_cob(std::istream& in) {
  auto body = detail::parse_series_file(in);
  if (body.info.ring != "cob") throw config_error("expected a cob series, file says ring=" + body.info.ring);
  const VRing& ring = VRing::get(body.info.K, body.info.dmax);
  MultiCob f(body.info.pmax, SULayer<VGraded>(VGraded(ring)));
  for (const auto& [lineno, tok] : body.monomials) {
    if (tok.size() != 6 || tok[4] != ":")
      throw config_error("line " + std::to_string(lineno) + ": malformed cob monomial line");
    int n = detail::parse_expo(tok[0], "p^", lineno);
    if (n < 0 || n > body.info.pmax)
      throw config_error("line " + std::to_string(lineno) + ": p-exponent out of range");
    int b = detail::parse_expo(tok[1], "s^", lineno);
    int c = detail::parse_expo(tok[2], "u^", lineno);
    const std::string& vt = tok[3];
    if (vt.size() < 3 || vt.compare(0, 2, "v[") != 0 || vt.back() != ']')
      throw config_error("line " + std::to_string(lineno) + ": expected v[..], got '" + vt + "'");
    std::vector<int> expo;
    std::string item;
    std::istringstream items(vt.substr(2, vt.size() - 3));
    while (std::getline(items, item, ',')) expo.push_back(detail::parse_int(item, lineno, "v-exponent"));
    if (static_cast<int>(expo.size()) != ring.K)
      throw config_error("line " + std::to_string(lineno) + ": v-multi-index length != K");
    auto it = ring.index.find(expo);
    if (it == ring.index.end())
      throw config_error("line " + std::to_string(lineno) + ": v-monomial beyond dmax");
    auto& layer = f.a[static_cast<size_t>(n)];
    auto mit = layer.m.find({b, c});
    if (mit == layer.m.end()) mit = layer.m.emplace(std::make_pair(b, c), VGraded(ring)).first;
    Q& slot = mit->second.c[static_cast<size_t>(it->second)];
    if (!qzero(slot)) throw config_error("line " + std::to_string(lineno) + ": duplicate monomial");
    slot = detail::parse_rational(tok[5], lineno);
  }
  for (int n = 0; n <= f.nmax; ++n) {
    auto& l = f.a[static_cast<size_t>(n)];
    l.s_lo = body.pwin[static_cast<size_t>(n)][0];
    l.s_hi = body.pwin[static_cast<size_t>(n)][1];
    l.u_lo = body.pwin[static_cast<size_t>(n)][2];
    l.u_hi = body.pwin[static_cast<size_t>(n)][3];
    l.normalize();
  }
  return f;
}

template <class S>
inline std::string serialize_to_string(const S& f) {
  std::ostringstream os;
  write_multiseries(os, f);
  return os.str();
}

inline void save_multiseries(const std::string& path, const MultiElg& f) {
  std::ofstream os(path);
  if (!os) throw config_error("cannot open '" + path + "' for writing");
  write_multiseries(os, f);
  if (!os.good()) throw config_error("write to '" + path + "' failed");
}
inline void save_multiseries(const std::string& path, const MultiCob& f) {
  std::ofstream os(path);
  if (!os) throw config_error("cannot open '" + path + "' for writing");
  write_multiseries(os, f);
  if (!os.good()) throw config_error("write to '" + path + "' failed");
}

inline SeriesFileInfo peek_series_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open '" + path + "'");
  detail::LineReader rd{is};
  std::string line;
  if (!rd.next(line)) throw config_error("'" + path + "' is empty");
  return parse_series_header(line, rd.lineno);
}

inline MultiElg load_multiseries_elg(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open '" + path + "'");
  return read_multiseries_elg(is);
}
inline MultiCob load_multiseries_cob(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open '" + path + "'");
  return read_multiseries_cob(is);
}

}  // namespace genera
