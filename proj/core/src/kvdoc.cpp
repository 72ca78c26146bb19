#include "gradnorm/kvdoc.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gradnorm/errors.hpp"

namespace gradnorm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& tok) {
  if (tok == "nan") return std::nan("");
  if (tok == "inf") return HUGE_VAL;
  if (tok == "-inf") return -HUGE_VAL;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(tok.c_str(), &end);
  // Underflow to a subnormal also sets ERANGE; only overflow is an error.
  if (end == tok.c_str() || *end != '\0' || (errno == ERANGE && std::isinf(v))) {
    throw ParseError("key '" + key + "': not a number: '" + tok + "'");
  }
  return v;
}

std::vector<double> parse_numbers(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(key, tok));
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KvDoc KvDoc::parse(const std::string& text) {
  KvDoc doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    if (doc.has(key)) throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    doc.set(key, trim(t.substr(eq + 1)));
  }
  return doc;
}

KvDoc KvDoc::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string KvDoc::serialize() const {
  std::string out;
  for (const auto& k : order_) out += k + " = " + values_.at(k) + "\n";
  return out;
}

void KvDoc::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize();
  if (!out) throw Error("write failed for '" + path + "'");
}

bool KvDoc::has(const std::string& key) const { return values_.count(key) != 0; }

const std::string& KvDoc::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError("missing key '" + key + "'");
  return it->second;
}

std::string KvDoc::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double KvDoc::get_double(const std::string& key) const { return parse_number(key, get(key)); }

long KvDoc::get_int(const std::string& key) const {
  const std::string& s = get(key);
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError("key '" + key + "': not an integer: '" + s + "'");
  }
  return v;
}

bool KvDoc::get_bool(const std::string& key) const {
  const std::string& s = get(key);
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw ParseError("key '" + key + "': not a boolean: '" + s + "'");
}

Eigen::VectorXd KvDoc::get_vector(const std::string& key) const {
  const auto v = parse_numbers(key, get(key));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd KvDoc::get_matrix(const std::string& key) const {
  const auto v = parse_numbers(key, get(key));
  if (v.size() < 2) throw ParseError("key '" + key + "': matrix needs 'rows cols' header");
  const double r = v[0], c = v[1];
  if (r < 0 || c < 0 || r != std::floor(r) || c != std::floor(c) ||
      static_cast<double>(v.size() - 2) != r * c) {
    throw ParseError("key '" + key + "': matrix size does not match its header");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  std::size_t p = 2;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = v[p++];
  return m;
}

void KvDoc::set(const std::string& key, const std::string& value) {
  if (!has(key)) order_.push_back(key);
  values_[key] = value;
}

void KvDoc::set_double(const std::string& key, double v) { set(key, format_double(v)); }
void KvDoc::set_int(const std::string& key, long v) { set(key, std::to_string(v)); }
void KvDoc::set_bool(const std::string& key, bool v) { set(key, v ? "true" : "false"); }

void KvDoc::set_vector(const std::string& key, const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  set(key, s);
}

void KvDoc::set_matrix(const std::string& key, const Eigen::MatrixXd& m) {
  std::string s = std::to_string(m.rows()) + " " + std::to_string(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += " " + format_double(m(i, j));
  set(key, s);
}

void KvDoc::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& k : order_) {
    bool ok = false;
    for (const auto& a : allowed) {
      if (!a.empty() && a.back() == '.' ? k.rfind(a, 0) == 0 : k == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ParseError("unknown key '" + k + "'");
  }
}

KvDoc KvDoc::sub(const std::string& prefix) const {
  KvDoc out;
  for (const auto& k : order_) {
    if (k.rfind(prefix, 0) == 0) out.set(k.substr(prefix.size()), values_.at(k));
  }
  return out;
}

void KvDoc::merge(const KvDoc& other, const std::string& prefix) {
  for (const auto& k : other.order_) set(prefix + k, other.values_.at(k));
}

}  // namespace gradnorm
