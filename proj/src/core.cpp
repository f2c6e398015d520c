#include "derivreg/core.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace derivreg {

DerivIndex::DerivIndex(int k, std::uint32_t bits)
  : k_(k)
  , bits_(bits)
{
  if (k < 1 || k > kMaxDim) {
    throw std::invalid_argument("derivative index dimension must be in 1.." +
                                std::to_string(kMaxDim));
  }
  if (k < 32 && (bits >> k) != 0u) {
    throw std::invalid_argument("derivative index has bits beyond dimension");
  }
}

DerivIndex
DerivIndex::ones(int k)
{
  return DerivIndex(k, k >= 32 ? ~0u : ((1u << k) - 1u));
}

DerivIndex
DerivIndex::from_coords(int k, std::span<const int> coords)
{
  std::uint32_t bits = 0;
  for (int c : coords) {
    if (c < 0 || c >= k) {
      throw std::invalid_argument("coordinate " + std::to_string(c) +
                                  " out of range for k=" + std::to_string(k));
    }
    bits |= 1u << c;
  }
  return DerivIndex(k, bits);
}

DerivIndex
DerivIndex::parse(std::string_view text)
{
  std::vector<int> digits;
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      digits.push_back(ch - '0');
    } else if (ch == ',' || ch == ' ' || ch == '(' || ch == ')' || ch == '\t') {
      continue;
    } else {
      throw std::invalid_argument("invalid derivative index '" +
                                  std::string(text) + "'");
    }
  }
  if (digits.empty()) {
    throw std::invalid_argument("empty derivative index");
  }
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    bits |= static_cast<std::uint32_t>(digits[i]) << i;
  }
  return DerivIndex(static_cast<int>(digits.size()), bits);
}

int
DerivIndex::order() const
{
  return std::popcount(bits_);
}

bool
DerivIndex::subset_of(const DerivIndex& other) const
{
  return k_ == other.k_ && (bits_ & ~other.bits_) == 0u;
}

std::vector<int>
DerivIndex::coords() const
{
  std::vector<int> out;
  for (int i = 0; i < k_; ++i) {
    if (test(i)) {
      out.push_back(i);
    }
  }
  return out;
}

DerivIndex
DerivIndex::operator|(const DerivIndex& o) const
{
  if (k_ != o.k_) {
    throw std::invalid_argument("derivative index dimension mismatch");
  }
  return DerivIndex(k_, bits_ | o.bits_);
}

DerivIndex
DerivIndex::operator&(const DerivIndex& o) const
{
  if (k_ != o.k_) {
    throw std::invalid_argument("derivative index dimension mismatch");
  }
  return DerivIndex(k_, bits_ & o.bits_);
}

DerivIndex
DerivIndex::complement_in(const DerivIndex& within) const
{
  if (k_ != within.k_) {
    throw std::invalid_argument("derivative index dimension mismatch");
  }
  return DerivIndex(k_, within.bits_ & ~bits_);
}

std::string
DerivIndex::str() const
{
  std::string s = "(";
  for (int i = 0; i < k_; ++i) {
    if (i > 0) {
      s += ',';
    }
    s += test(i) ? '1' : '0';
  }
  return s + ")";
}

std::vector<DerivIndex>
subsets_of(const DerivIndex& set)
{
  // Enumerate submasks in increasing numeric order.
  std::vector<DerivIndex> out;
  const std::uint32_t mask = set.bits();
  std::uint32_t sub = 0;
  while (true) {
    out.emplace_back(set.dim(), sub);
    if (sub == mask) {
      break;
    }
    sub = ((sub | ~mask) + 1u) & mask;
  }
  return out;
}

// ---------------------------------------------------------------------------

DataSet::DataSet(DerivIndex deriv, std::vector<double> points,
                 std::vector<double> y)
  : deriv_(deriv)
  , points_(std::move(points))
  , y_(std::move(y))
{
  const auto k = static_cast<std::size_t>(deriv_.dim());
  if (k == 0) {
    throw std::invalid_argument("dataset needs a derivative index with k >= 1");
  }
  if (y_.empty()) {
    throw std::invalid_argument("dataset is empty: n >= 1 required");
  }
  if (points_.size() != y_.size() * k) {
    throw std::invalid_argument("dataset shape mismatch: " +
                                std::to_string(points_.size()) +
                                " coordinates for " + std::to_string(y_.size()) +
                                " responses with k=" + std::to_string(k));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double v = points_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("design point " + std::to_string(i / k + 1) +
                        ", coordinate " + std::to_string(i % k + 1) +
                        " = " + format_double(v) + " lies outside [0,1]");
    }
  }
  for (double v : y_) {
    if (!std::isfinite(v)) {
      throw DomainError("non-finite response in dataset");
    }
  }
}

DataSet
DataSet::with_responses(std::vector<double> y) const
{
  return DataSet(deriv_, points_, std::move(y));
}

DataSet
DataSet::canonicalized() const
{
  const std::size_t n = size();
  const auto k = static_cast<std::size_t>(dim());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t c = 0; c < k; ++c) {
      const double xa = points_[a * k + c];
      const double xb = points_[b * k + c];
      if (xa != xb) {
        return xa < xb;
      }
    }
    return y_[a] < y_[b];
  });
  std::vector<double> pts(points_.size());
  std::vector<double> ys(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(points_.begin() + static_cast<std::ptrdiff_t>(order[r] * k), k,
                pts.begin() + static_cast<std::ptrdiff_t>(r * k));
    ys[r] = y_[order[r]];
  }
  return DataSet(deriv_, std::move(pts), std::move(ys));
}

// ---------------------------------------------------------------------------

TestFunction::TestFunction(int k, DerivFn fn, std::string name, HasFn has)
  : k_(k)
  , fn_(std::move(fn))
  , name_(std::move(name))
  , has_(std::move(has))
{
  if (k < 1 || k > DerivIndex::kMaxDim) {
    throw std::invalid_argument("test function dimension out of range");
  }
}

double
TestFunction::operator()(std::span<const double> x) const
{
  return derivative(DerivIndex::zeros(k_), x);
}

bool
TestFunction::has_derivative(const DerivIndex& alpha) const
{
  return alpha.dim() == k_ && (!has_ || has_(alpha));
}

double
TestFunction::derivative(const DerivIndex& alpha, std::span<const double> x) const
{
  if (!has_derivative(alpha)) {
    throw std::out_of_range("derivative " + alpha.str() + " not supplied by " +
                            (name_.empty() ? std::string("test function") : name_));
  }
  if (static_cast<int>(x.size()) != k_) {
    throw std::invalid_argument("point dimension mismatch");
  }
  return fn_(alpha, x);
}

TestFunction
TestFunction::restricted_to(std::vector<DerivIndex> available) const
{
  auto fn = fn_;
  return TestFunction(
    k_, fn, name_, [available = std::move(available)](const DerivIndex& a) {
      return std::find(available.begin(), available.end(), a) != available.end();
    });
}

double
Factor::value(double x) const
{
  switch (kind) {
    case Kind::power:
      return param == 0.0 ? 1.0 : std::pow(x, param);
    case Kind::sine:
      return std::sin(param * x);
    case Kind::cosine:
      return std::cos(param * x);
    case Kind::exponential:
      return std::exp(param * x);
  }
  return 0.0;
}

double
Factor::derivative(double x) const
{
  switch (kind) {
    case Kind::power:
      if (param == 0.0) {
        return 0.0;
      }
      return param == 1.0 ? 1.0 : param * std::pow(x, param - 1.0);
    case Kind::sine:
      return param * std::cos(param * x);
    case Kind::cosine:
      return -param * std::sin(param * x);
    case Kind::exponential:
      return param * std::exp(param * x);
  }
  return 0.0;
}

TestFunction
make_separable(int k, std::vector<SeparableTerm> terms, std::string name)
{
  for (const auto& t : terms) {
    if (static_cast<int>(t.factors.size()) != k) {
      throw std::invalid_argument("separable term needs one factor per coordinate");
    }
  }
  return TestFunction(
    k,
    [terms = std::move(terms)](const DerivIndex& alpha, std::span<const double> x) {
      double total = 0.0;
      for (const auto& t : terms) {
        double prod = t.coefficient;
        for (std::size_t j = 0; j < t.factors.size(); ++j) {
          prod *= alpha.test(static_cast<int>(j)) ? t.factors[j].derivative(x[j])
                                                  : t.factors[j].value(x[j]);
        }
        total += prod;
      }
      return total;
    },
    std::move(name));
}

SeparableTerm
monomial(double coefficient, std::vector<int> powers)
{
  SeparableTerm t;
  t.coefficient = coefficient;
  for (int p : powers) {
    t.factors.push_back({ Factor::Kind::power, static_cast<double>(p) });
  }
  return t;
}

// ---------------------------------------------------------------------------

RngStream::RngStream(std::uint64_t seed, std::vector<std::uint64_t> path)
  : seed_(seed)
  , path_(std::move(path))
{
  std::vector<std::uint32_t> words;
  words.reserve(3 + 2 * path_.size());
  words.push_back(static_cast<std::uint32_t>(seed_));
  words.push_back(static_cast<std::uint32_t>(seed_ >> 32));
  // The path length keeps [3] and [3,0] apart.
  words.push_back(static_cast<std::uint32_t>(path_.size()));
  for (auto id : path_) {
    words.push_back(static_cast<std::uint32_t>(id));
    words.push_back(static_cast<std::uint32_t>(id >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

RngStream
split_stream(std::uint64_t seed, std::vector<std::uint64_t> ids)
{
  return RngStream(seed, std::move(ids));
}

// ---------------------------------------------------------------------------

RescaleResult
rescale_to_unit(std::span<const double> raw, int k)
{
  if (k < 1) {
    throw std::invalid_argument("rescale_to_unit: k must be positive");
  }
  const auto kk = static_cast<std::size_t>(k);
  if (raw.empty() || raw.size() % kk != 0) {
    throw std::invalid_argument("rescale_to_unit: matrix shape mismatch");
  }
  const std::size_t n = raw.size() / kk;
  RescaleResult out;
  out.scaled.resize(raw.size());
  out.maps.resize(kk);
  for (std::size_t c = 0; c < kk; ++c) {
    double lo = raw[c];
    double hi = raw[c];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, raw[i * kk + c]);
      hi = std::max(hi, raw[i * kk + c]);
    }
    if (!(hi > lo)) {
      throw std::invalid_argument("coordinate " + std::to_string(c + 1) +
                                  " is constant; cannot rescale to [0,1]");
    }
    out.maps[c] = AffineMap{ lo, hi - lo };
    for (std::size_t i = 0; i < n; ++i) {
      double t = out.maps[c].to_unit(raw[i * kk + c]);
      out.scaled[i * kk + c] = std::clamp(t, 0.0, 1.0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string
format_double(double v)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view
trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view>
split_commas(std::string_view line)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return cells;
}

} // namespace

CsvTable
read_csv(std::istream& in, std::size_t expected_columns)
{
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (lineno == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
      view.remove_prefix(3);
    }
    if (trim(view).empty()) {
      continue;
    }
    auto cells = split_commas(view);
    if (!have_header) {
      for (auto c : cells) {
        table.header.emplace_back(c);
      }
      if (expected_columns != 0 && cells.size() != expected_columns) {
        throw ParseError("header has " + std::to_string(cells.size()) +
                           " columns, expected " +
                           std::to_string(expected_columns),
                         lineno);
      }
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected " +
                         std::to_string(table.header.size()) + " cells, got " +
                         std::to_string(cells.size()),
                       lineno);
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) {
      double v = 0.0;
      auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (c.empty() || res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw ParseError("line " + std::to_string(lineno) +
                           ": non-numeric cell '" + std::string(c) + "'",
                         lineno);
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw ParseError("missing header row", lineno);
  }
  return table;
}

CsvTable
read_csv_file(const std::string& path, std::size_t expected_columns)
{
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open '" + path + "'");
  }
  return read_csv(in, expected_columns);
}

void
write_csv(std::ostream& out, const CsvTable& table)
{
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << '\n';
  }
}

void
write_csv_file(const std::string& path, const CsvTable& table)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot write '" + path + "'");
  }
  write_csv(out, table);
  if (!out) {
    throw std::ios_base::failure("write failed for '" + path + "'");
  }
}

DataSet
load_csv(std::istream& in, int k, const DerivIndex& deriv)
{
  if (deriv.dim() != k) {
    throw std::invalid_argument("derivative index " + deriv.str() +
                                " does not match k=" + std::to_string(k));
  }
  auto table = read_csv(in, static_cast<std::size_t>(k) + 1);
  if (table.rows.empty()) {
    throw std::invalid_argument("no data rows: n >= 1 required");
  }
  std::vector<double> pts;
  std::vector<double> y;
  pts.reserve(table.rows.size() * static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (int c = 0; c < k; ++c) {
      if (!(row[c] >= 0.0 && row[c] <= 1.0)) {
        throw DomainError("data row " + std::to_string(r + 1) + ": " +
                          table.header[c] + " = " + format_double(row[c]) +
                          " lies outside [0,1]");
      }
      pts.push_back(row[c]);
    }
    y.push_back(row[k]);
  }
  return DataSet(deriv, std::move(pts), std::move(y));
}

DataSet
load_csv(const std::string& path, int k, const DerivIndex& deriv)
{
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open '" + path + "'");
  }
  return load_csv(in, k, deriv);
}

void
emit_csv(std::ostream& out, const DataSet& data)
{
  CsvTable t;
  for (int c = 0; c < data.dim(); ++c) {
    t.header.push_back("x" + std::to_string(c + 1));
  }
  t.header.emplace_back("y");
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = data.point(i);
    std::vector<double> row(p.begin(), p.end());
    row.push_back(data.response(i));
    t.rows.push_back(std::move(row));
  }
  write_csv(out, t);
}

} // namespace derivreg
