#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace gradnorm {

// Flat `key = value` text document. Lines starting with '#' are comments.
// Keys keep insertion order on output so serialized files diff cleanly.
class KvDoc {
 public:
  static KvDoc parse(const std::string& text);
  static KvDoc read_file(const std::string& path);

  std::string serialize() const;
  void write_file(const std::string& path) const;

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;

  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  Eigen::VectorXd get_vector(const std::string& key) const;
  // Stored as `rows cols v00 v01 ...` (row-major).
  Eigen::MatrixXd get_matrix(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double v);
  void set_int(const std::string& key, long v);
  void set_bool(const std::string& key, bool v);
  void set_vector(const std::string& key, const Eigen::VectorXd& v);
  void set_matrix(const std::string& key, const Eigen::MatrixXd& m);

  const std::vector<std::string>& keys() const { return order_; }

  // Throws ParseError naming the first key not in `allowed`. A prefix entry
  // ending in '.' admits every key under that prefix.
  void require_known(const std::vector<std::string>& allowed) const;

  // Keys under `prefix`, with the prefix stripped.
  KvDoc sub(const std::string& prefix) const;
  void merge(const KvDoc& other, const std::string& prefix);

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> order_;
};

// 17 significant digits, round-trips through strtod.
std::string format_double(double v);

}  // namespace gradnorm
