#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace derivreg {

inline constexpr const char* kVersion = "1.0.0";

//! Malformed input text (CSV rows, config values). Carries the 1-based line.
class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(what)
    , line_(line)
  {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

//! A value lies outside the domain the library works on (e.g. x not in [0,1]).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! Which coordinates of g are differentiated once. Bit i is coordinate i.
class DerivIndex
{
public:
  static constexpr int kMaxDim = 31;

  DerivIndex() = default;
  DerivIndex(int k, std::uint32_t bits);

  static DerivIndex zeros(int k) { return DerivIndex(k, 0u); }
  static DerivIndex ones(int k);
  static DerivIndex from_coords(int k, std::span<const int> coords);
  //! Accepts "1,0,1", "(1,0,1)" or "101".
  static DerivIndex parse(std::string_view text);

  int dim() const { return k_; }
  std::uint32_t bits() const { return bits_; }
  bool test(int i) const { return (bits_ >> i) & 1u; }
  int order() const;
  bool is_zero() const { return bits_ == 0; }
  bool subset_of(const DerivIndex& other) const;
  std::vector<int> coords() const;

  DerivIndex operator|(const DerivIndex& o) const;
  DerivIndex operator&(const DerivIndex& o) const;
  //! Coordinates in `within` that are not set here.
  DerivIndex complement_in(const DerivIndex& within) const;
  DerivIndex complement() const { return complement_in(ones(k_)); }

  std::string str() const;

  auto operator<=>(const DerivIndex&) const = default;

private:
  int k_ = 0;
  std::uint32_t bits_ = 0;
};

//! All subsets of `set` (as DerivIndex of the same dimension), ordered by bits.
std::vector<DerivIndex> subsets_of(const DerivIndex& set);

//! Design points in [0,1]^k with responses for one derivative index.
class DataSet
{
public:
  DataSet() = default;
  //! `points` is row-major n×k. Throws DomainError for coordinates outside
  //! [0,1] and std::invalid_argument for shape problems or n == 0.
  DataSet(DerivIndex deriv, std::vector<double> points, std::vector<double> y);

  int dim() const { return deriv_.dim(); }
  std::size_t size() const { return y_.size(); }
  const DerivIndex& deriv() const { return deriv_; }
  std::span<const double> point(std::size_t i) const
  {
    return { points_.data() + i * static_cast<std::size_t>(dim()),
             static_cast<std::size_t>(dim()) };
  }
  double coord(std::size_t i, int c) const
  {
    return points_[i * static_cast<std::size_t>(dim()) + c];
  }
  double response(std::size_t i) const { return y_[i]; }
  std::span<const double> points() const { return points_; }
  std::span<const double> responses() const { return y_; }

  DataSet with_responses(std::vector<double> y) const;
  //! Rows sorted lexicographically by (x, y); fixes summation order.
  DataSet canonicalized() const;

private:
  DerivIndex deriv_;
  std::vector<double> points_;
  std::vector<double> y_;
};

//! A function on [0,1]^k that can report each mixed first-order partial g^α.
class TestFunction
{
public:
  using DerivFn =
    std::function<double(const DerivIndex&, std::span<const double>)>;
  using HasFn = std::function<bool(const DerivIndex&)>;

  TestFunction(int k, DerivFn fn, std::string name = {}, HasFn has = {});

  int dim() const { return k_; }
  const std::string& name() const { return name_; }
  double operator()(std::span<const double> x) const;
  //! Throws std::out_of_range naming the index when it is not supplied.
  double derivative(const DerivIndex& alpha, std::span<const double> x) const;
  bool has_derivative(const DerivIndex& alpha) const;
  //! Same function with only the listed derivatives available.
  TestFunction restricted_to(std::vector<DerivIndex> available) const;

private:
  int k_;
  DerivFn fn_;
  std::string name_;
  HasFn has_;
};

//! Univariate building block of a separable test function.
struct Factor
{
  enum class Kind
  {
    power,
    sine,
    cosine,
    exponential
  };
  Kind kind = Kind::power;
  double param = 0.0; // exponent for power, frequency/rate otherwise

  double value(double x) const;
  double derivative(double x) const;
};

//! coefficient · Π_j factors[j](x_j); factors.size() == k.
struct SeparableTerm
{
  double coefficient = 1.0;
  std::vector<Factor> factors;
};

//! Sum of separable terms, with exact mixed first-order partials.
TestFunction make_separable(int k, std::vector<SeparableTerm> terms,
                            std::string name = {});

//! Convenience: monomial coefficient · Π x_j^{powers[j]}.
SeparableTerm monomial(double coefficient, std::vector<int> powers);

//! Deterministic random stream keyed by (seed, id path).
class RngStream
{
public:
  RngStream(std::uint64_t seed, std::vector<std::uint64_t> path);

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double a, double b)
  {
    return std::uniform_real_distribution<double>(a, b)(engine_);
  }
  double normal() { return normal_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{ 0.0, 1.0 };
};

RngStream split_stream(std::uint64_t seed, std::vector<std::uint64_t> ids);

//! x ↦ (x − offset) / scale onto [0,1].
struct AffineMap
{
  double offset = 0.0;
  double scale = 1.0;
  double to_unit(double x) const { return (x - offset) / scale; }
  double from_unit(double t) const { return offset + scale * t; }
};

struct RescaleResult
{
  std::vector<double> scaled; // row-major n×k
  std::vector<AffineMap> maps;
};

//! Map each coordinate of a row-major n×k matrix affinely onto [0,1].
RescaleResult rescale_to_unit(std::span<const double> raw, int k);

struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

//! Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

CsvTable read_csv(std::istream& in, std::size_t expected_columns);
CsvTable read_csv_file(const std::string& path, std::size_t expected_columns);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

//! Header row, k coordinate columns, one response column; coordinates must
//! already lie in [0,1].
DataSet load_csv(const std::string& path, int k, const DerivIndex& deriv);
DataSet load_csv(std::istream& in, int k, const DerivIndex& deriv);
void emit_csv(std::ostream& out, const DataSet& data);

} // namespace derivreg
