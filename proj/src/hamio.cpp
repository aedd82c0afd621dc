// Copyright 2026 The rdmpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "rdmpt/hamio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "rdmpt/errors.hpp"

namespace rdmpt::hamio {

IntegralTable::IntegralTable(int n_spatial_, int n_electrons_)
    : n_spatial(n_spatial_),
      n_electrons(n_electrons_),
      h(Eigen::MatrixXd::Zero(2 * n_spatial_, 2 * n_spatial_)),
      g(2 * n_spatial_) {}

TableDiagnostics diagnose(const IntegralTable& t) {
  TableDiagnostics d;
  const int n = t.n_spin();
  d.hermiticity = (t.h - t.h.transpose()).cwiseAbs().maxCoeff();
  if (n == 0) d.hermiticity = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = t.g(p, q, r, s);
          d.antisymmetry = std::max({d.antisymmetry, std::abs(v + t.g(q, p, r, s)),
                                     std::abs(v + t.g(p, q, s, r)),
                                     std::abs(v - t.g(q, p, s, r))});
          const bool direct = spin_of(p) == spin_of(r) && spin_of(q) == spin_of(s);
          const bool exchange = spin_of(p) == spin_of(s) && spin_of(q) == spin_of(r);
          if (!direct && !exchange) d.spin_selection = std::max(d.spin_selection, std::abs(v));
        }
  return d;
}

// ---------------------------------------------------------------------------
// Reference determinant and active spaces

ReferenceDeterminant ReferenceDeterminant::aufbau(int n_spin, int n_electrons) {
  if (n_electrons < 0 || n_electrons > n_spin)
    throw ValidationError("aufbau: electron count out of range");
  ReferenceDeterminant ref;
  for (int p = 0; p < n_spin; ++p) (p < n_electrons ? ref.occupied : ref.virtual_).push_back(p);
  return ref;
}

ReferenceDeterminant ReferenceDeterminant::from_occupied(int n_spin, std::vector<int> occupied) {
  std::sort(occupied.begin(), occupied.end());
  if (std::adjacent_find(occupied.begin(), occupied.end()) != occupied.end())
    throw ValidationError("reference determinant: repeated occupied index");
  ReferenceDeterminant ref;
  ref.occupied = std::move(occupied);
  for (int p = 0; p < n_spin; ++p)
    if (!std::binary_search(ref.occupied.begin(), ref.occupied.end(), p)) ref.virtual_.push_back(p);
  if (!ref.occupied.empty() && (ref.occupied.front() < 0 || ref.occupied.back() >= n_spin))
    throw ValidationError("reference determinant: index out of range");
  return ref;
}

bool ReferenceDeterminant::is_occupied(int p) const {
  return std::binary_search(occupied.begin(), occupied.end(), p);
}

void ReferenceDeterminant::validate(const IntegralTable& t) const {
  if (static_cast<int>(occupied.size()) != t.n_electrons)
    throw ValidationError("reference determinant has " + std::to_string(occupied.size()) +
                          " occupied orbitals but the table has " +
                          std::to_string(t.n_electrons) + " electrons");
  if (static_cast<int>(occupied.size() + virtual_.size()) != t.n_spin())
    throw ValidationError("reference determinant does not span the table's orbitals");
  std::vector<int> all(occupied);
  all.insert(all.end(), virtual_.begin(), virtual_.end());
  std::sort(all.begin(), all.end());
  for (int p = 0; p < t.n_spin(); ++p)
    if (all[p] != p) throw ValidationError("reference determinant: occupied and virtual overlap");
}

namespace {

std::vector<int> to_spin_orbitals(const std::vector<int>& spatial) {
  std::vector<int> out;
  for (int s : spatial) {
    out.push_back(spin_orbital(s, 0));
    out.push_back(spin_orbital(s, 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ActiveSpaceSpec ActiveSpaceSpec::from_spatial(const std::vector<int>& frozen_occupied,
                                              const std::vector<int>& active,
                                              const std::vector<int>& frozen_virtual) {
  return {to_spin_orbitals(frozen_occupied), to_spin_orbitals(active),
          to_spin_orbitals(frozen_virtual)};
}

ActiveSpaceSpec ActiveSpaceSpec::full(int n_spin) {
  ActiveSpaceSpec s;
  for (int p = 0; p < n_spin; ++p) s.active.push_back(p);
  return s;
}

int ActiveSpaceSpec::n_spin() const noexcept {
  return static_cast<int>(frozen_occupied.size() + active.size() + frozen_virtual.size());
}

void ActiveSpaceSpec::validate(int n) const {
  std::vector<int> seen(n, 0);
  for (const auto* set : {&frozen_occupied, &active, &frozen_virtual})
    for (int p : *set) {
      if (p < 0 || p >= n)
        throw ValidationError("active space: orbital " + std::to_string(p) + " out of range");
      if (seen[p]++)
        throw ValidationError("active space: orbital " + std::to_string(p) +
                              " appears in more than one set");
    }
  for (int p = 0; p < n; ++p)
    if (!seen[p])
      throw ValidationError("active space: orbital " + std::to_string(p) + " is not assigned");
}

// ---------------------------------------------------------------------------
// FCIDUMP

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Fortran writers sometimes emit 1.0D-03.
double parse_real(std::string tok) {
  for (char& c : tok)
    if (c == 'D' || c == 'd') c = 'E';
  std::size_t used = 0;
  const double v = std::stod(tok, &used);
  if (used != tok.size()) throw std::invalid_argument(tok);
  return v;
}

struct Header {
  std::map<std::string, std::vector<std::string>> values;
  int int_value(const std::string& key, const std::string& source, int line) const {
    auto it = values.find(key);
    if (it == values.end() || it->second.empty())
      throw ParseError(source, line, "FCIDUMP header is missing " + key);
    try {
      return std::stoi(it->second.front());
    } catch (const std::exception&) {
      throw ParseError(source, line, "FCIDUMP header value for " + key + " is not an integer");
    }
  }
};

// Reads the &FCI ... &END (or /) namelist. Returns the line number of its end.
int read_header(std::istream& in, const std::string& source, Header& header) {
  std::string text;
  std::string line;
  int line_no = 0;
  bool started = false;
  bool finished = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string u = upper(line);
    if (!started) {
      auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError(source, line_no, "expected '&FCI' namelist header");
      }
      started = true;
      u = u.substr(pos + 4);
    }
    auto end = u.find("&END");
    if (end == std::string::npos) end = u.find('/');
    if (end != std::string::npos) {
      text += u.substr(0, end);
      finished = true;
      break;
    }
    text += u + ",";
  }
  if (!started) throw ParseError(source, line_no, "empty FCIDUMP file");
  if (!finished) throw ParseError(source, line_no, "unterminated FCIDUMP header");

  // KEY=v1,v2,...  KEY2=...
  std::string key;
  std::string token;
  auto flush = [&](int at) {
    if (token.empty()) return;
    if (key.empty()) throw ParseError(source, at, "value '" + token + "' before any key");
    header.values[key].push_back(token);
    token.clear();
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (c == '=') {
      // token holds the key name
      std::string name;
      for (char ch : token)
        if (!std::isspace(static_cast<unsigned char>(ch))) name += ch;
      if (name.empty()) throw ParseError(source, line_no, "'=' without a key");
      key = name;
      header.values[key];
      token.clear();
    } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      // A key may follow the last value without a comma; defer until we see '='.
      if (!token.empty()) {
        std::size_t j = k;
        while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j < text.size() && text[j] == '=') continue;
        flush(line_no);
      }
    } else {
      token += c;
    }
  }
  if (!token.empty()) flush(line_no);
  return line_no;
}

}  // namespace

IntegralTable parse_fcidump(std::istream& in, const std::string& source) {
  Header header;
  int line_no = read_header(in, source, header);
  const int norb = header.int_value("NORB", source, line_no);
  const int nelec = header.int_value("NELEC", source, line_no);
  const int ms2 = header.values.count("MS2") ? header.int_value("MS2", source, line_no) : 0;
  if (header.values.count("UHF") && !header.values["UHF"].empty()) {
    const std::string v = header.values["UHF"].front();
    if (v == "1" || v == ".TRUE." || v == "T" || v == "TRUE")
      throw ParseError(source, line_no, "unrestricted FCIDUMP files are not supported");
  }
  if (norb < 0 || nelec < 0 || nelec > 2 * norb)
    throw ValidationError(source + ": inconsistent NORB/NELEC in header");

  IntegralTable t(norb, nelec);
  t.ms2 = ms2;
  const std::size_t n = static_cast<std::size_t>(norb);
  std::vector<double> eri(n * n * n * n, 0.0);
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(norb, norb);
  auto at = [&](int i, int j, int k, int l) -> double& {
    return eri[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  };

  bool have_core = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string vtok;
    if (!(ls >> vtok)) continue;
    int idx[4];
    double value;
    try {
      value = parse_real(vtok);
    } catch (const std::exception&) {
      throw ParseError(source, line_no, "cannot parse integral value '" + vtok + "'");
    }
    for (int& k : idx)
      if (!(ls >> k)) throw ParseError(source, line_no, "expected four orbital indices");
    std::string extra;
    if (ls >> extra) throw ParseError(source, line_no, "trailing text '" + extra + "'");
    for (int k : idx)
      if (k < 0 || k > norb)
        throw ValidationError(source + ":" + std::to_string(line_no) + ": orbital index " +
                              std::to_string(k) + " outside 0.." + std::to_string(norb));
    const auto [i, j, k, l] = std::tuple{idx[0], idx[1], idx[2], idx[3]};
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      t.e_nuclear = value;
      have_core = true;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0)
        throw ValidationError(source + ":" + std::to_string(line_no) +
                              ": one-body entry with a zero index");
      h1(i - 1, j - 1) = value;
      h1(j - 1, i - 1) = value;
    } else if (i == 0 && j == 0 && k != 0 && l == 0) {
      // orbital energy lines carry no Hamiltonian information
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0)
        throw ValidationError(source + ":" + std::to_string(line_no) +
                              ": two-body entry with a zero index");
      const int a = i - 1, b = j - 1, c = k - 1, d = l - 1;
      for (auto [p, q, r, s] : {std::tuple{a, b, c, d}, {b, a, c, d}, {a, b, d, c}, {b, a, d, c},
                                {c, d, a, b}, {d, c, a, b}, {c, d, b, a}, {d, c, b, a}})
        at(p, q, r, s) = value;
    }
  }
  if (!have_core)
    throw ValidationError(source + ": missing core energy entry (value 0 0 0 0)");

  const int ns = t.n_spin();
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q)
      if (spin_of(p) == spin_of(q)) t.h(p, q) = h1(spatial_of(p), spatial_of(q));

  // <pq||rs> = (PR|QS) d(sp,sr) d(sq,ss) - (PS|QR) d(sp,ss) d(sq,sr)
  for (int p = 0; p < ns; ++p)
    for (int q = 0; q < ns; ++q)
      for (int r = 0; r < ns; ++r)
        for (int s = 0; s < ns; ++s) {
          double v = 0.0;
          const int P = spatial_of(p), Q = spatial_of(q), R = spatial_of(r), S = spatial_of(s);
          if (spin_of(p) == spin_of(r) && spin_of(q) == spin_of(s)) v += at(P, R, Q, S);
          if (spin_of(p) == spin_of(s) && spin_of(q) == spin_of(r)) v -= at(P, S, Q, R);
          t.g(p, q, r, s) = v;
        }
  return t;
}

IntegralTable load_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open FCIDUMP file " + path.string());
  return parse_fcidump(in, path.string());
}

void write_fcidump(const IntegralTable& t, std::ostream& out) {
  const int n = t.n_spatial;
  out << " &FCI NORB=" << n << ",NELEC=" << t.n_electrons << ",MS2=" << t.ms2 << ",\n  ORBSYM=";
  for (int k = 0; k < n; ++k) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  out << std::setprecision(17) << std::scientific;
  // (PR|QS) = <pq|rs> with p,r alpha and q,s beta, which the antisymmetrized
  // tensor stores without an exchange contribution.
  auto chem = [&](int i, int j, int k, int l) {
    return t.g(spin_orbital(i, 0), spin_orbital(k, 1), spin_orbital(j, 0), spin_orbital(l, 1));
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = chem(i, j, k, l);
          if (v != 0.0)
            out << v << ' ' << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' ' << l + 1 << '\n';
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = t.h(spin_orbital(i, 0), spin_orbital(j, 0));
      if (v != 0.0) out << v << ' ' << i + 1 << ' ' << j + 1 << " 0 0\n";
    }
  out << t.e_nuclear << " 0 0 0 0\n";
}

void write_fcidump(const IntegralTable& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write FCIDUMP file " + path.string());
  write_fcidump(t, out);
}

// ---------------------------------------------------------------------------

NormalOrderedHamiltonian normal_order(const IntegralTable& t, const ReferenceDeterminant& ref) {
  ref.validate(t);
  NormalOrderedHamiltonian nh;
  const int n = t.n_spin();
  double e0 = t.e_nuclear;
  for (int i : ref.occupied) e0 += t.h(i, i);
  for (int i : ref.occupied)
    for (int j : ref.occupied) e0 += 0.5 * t.g(i, j, i, j);
  nh.e0 = e0;
  nh.f = t.h;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int i : ref.occupied) nh.f(p, q) += t.g(p, i, q, i);
  nh.gamma = t.g;
  return nh;
}

IntegralTable freeze_core(const IntegralTable& t, const ActiveSpaceSpec& spec) {
  if (spec.n_spin() != t.n_spin())
    throw ValidationError("freeze_core: active space covers " + std::to_string(spec.n_spin()) +
                          " spin orbitals but the table has " + std::to_string(t.n_spin()));
  spec.validate(t.n_spin());
  const int n_act = static_cast<int>(spec.active.size());
  if (n_act % 2 != 0) throw ValidationError("freeze_core: active space must hold whole spatial orbitals");
  for (std::size_t k = 0; k < spec.active.size(); k += 2)
    if (spec.active[k] % 2 != 0 || spec.active[k + 1] != spec.active[k] + 1)
      throw ValidationError("freeze_core: active spin orbitals must be sorted alpha/beta pairs");
  const int n_core = static_cast<int>(spec.frozen_occupied.size());
  if (n_core > t.n_electrons) throw ValidationError("freeze_core: more frozen orbitals than electrons");

  IntegralTable out(n_act / 2, t.n_electrons - n_core);
  out.ms2 = t.ms2;
  double e = t.e_nuclear;
  for (int c : spec.frozen_occupied) e += t.h(c, c);
  for (int c : spec.frozen_occupied)
    for (int d : spec.frozen_occupied) e += 0.5 * t.g(c, d, c, d);
  out.e_nuclear = e;
  for (int a = 0; a < n_act; ++a)
    for (int b = 0; b < n_act; ++b) {
      const int p = spec.active[a], q = spec.active[b];
      double v = t.h(p, q);
      for (int c : spec.frozen_occupied) v += t.g(p, c, q, c);
      out.h(a, b) = v;
    }
  for (int a = 0; a < n_act; ++a)
    for (int b = 0; b < n_act; ++b)
      for (int c = 0; c < n_act; ++c)
        for (int d = 0; d < n_act; ++d)
          out.g(a, b, c, d) = t.g(spec.active[a], spec.active[b], spec.active[c], spec.active[d]);
  return out;
}

double energy_from_rdm(const IntegralTable& t, const RdmPair& rdm) {
  const int n = t.n_spin();
  if (rdm.n_orbitals() != n || rdm.rho2.dim() != n)
    throw ValidationError("energy_from_rdm: RDM over " + std::to_string(rdm.n_orbitals()) +
                          " orbitals, table over " + std::to_string(n));
  CompensatedSum e;
  e.add(t.e_nuclear);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) e.add(t.h(p, q) * rdm.rho1(p, q));
  const auto g = t.g.data();
  const auto r = rdm.rho2.data();
  double two = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) two += g[k] * r[k];
  e.add(0.25 * two);
  return e.value();
}

}  // namespace rdmpt::hamio
