#include "mono/function.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mono {

TruthTable::TruthTable(int n) : n_(n) {
  if (n < 1 || n > 30)
    throw std::invalid_argument("TruthTable: n must be in 1..30");
  values_.assign(uint64_t{1} << n, 0);
}

int TruthTable::evaluate(const Point& x) const {
  if (x.dimension() != n_)
    throw std::invalid_argument("TruthTable::evaluate: dimension mismatch");
  return values_[x.index()];
}

BoolFun handle_of(std::shared_ptr<const TruthTable> table) {
  int n = table->n();
  return BoolFun{n, [t = std::move(table)](const Point& x) {
                   return t->evaluate(x);
                 }};
}

TruthTable to_truth_table(const BoolFun& f) {
  if (f.n > 30)
    throw std::invalid_argument("to_truth_table: n > 30");
  TruthTable table(f.n);
  for (uint64_t idx = 0; idx < table.size(); ++idx)
    table.set(idx, f.eval(Point::from_index(f.n, idx)));
  return table;
}

void save_truth_table(const TruthTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_truth_table: cannot open " + path);
  out << "n=" << table.n() << "\n";
  std::string bits(table.size(), '0');
  for (uint64_t idx = 0; idx < table.size(); ++idx)
    if (table.at(idx)) bits[idx] = '1';
  out << bits << "\n";
  if (!out) throw std::runtime_error("save_truth_table: write failed: " + path);
}

TruthTable load_truth_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_truth_table: cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || header.size() < 3 || header.compare(0, 2, "n=") != 0)
    throw std::runtime_error("load_truth_table: bad header in " + path);
  int n = 0;
  try {
    size_t consumed = 0;
    n = std::stoi(header.substr(2), &consumed);
    if (consumed != header.size() - 2) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw std::runtime_error("load_truth_table: bad header in " + path);
  }
  if (n < 1 || n > 30)
    throw std::runtime_error("load_truth_table: n out of range in " + path);
  std::string bits;
  if (!std::getline(in, bits))
    throw std::runtime_error("load_truth_table: missing value line in " + path);
  if (bits.size() != (uint64_t{1} << n))
    throw std::runtime_error("load_truth_table: wrong value count in " + path);
  std::string rest;
  if (std::getline(in, rest) && !rest.empty())
    throw std::runtime_error("load_truth_table: trailing content in " + path);
  TruthTable table(n);
  for (uint64_t idx = 0; idx < bits.size(); ++idx) {
    char c = bits[idx];
    if (c != '0' && c != '1')
      throw std::runtime_error("load_truth_table: illegal character in " + path);
    table.set(idx, c - '0');
  }
  return table;
}

int QueryMeter::eval(const Point& x) {
  ++total_;
  for (const auto& [p, v] : cache_)
    if (p == x) return caching_ ? v : fn_->eval(x);
  int v = fn_->eval(x);
  ++distinct_;
  cache_.emplace_back(x, v);
  return v;
}

namespace {

bool dominated_by(const Point& center, const Point& x) {
  // center <= x coordinatewise (non-strict)
  for (int i = 0; i < center.word_count(); ++i)
    if (center.words()[i] & ~x.words()[i]) return false;
  return true;
}

void check_coord_param(int coord, int n, const char* what) {
  if (coord < 1 || coord > n)
    throw std::invalid_argument(std::string(what) + ": coordinate out of range");
}

[[noreturn]] void throw_dimension_mismatch() {
  throw std::invalid_argument("evaluate: dimension mismatch");
}

}  // namespace

BoolFun instantiate(const FamilySpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("instantiate: n must be >= 1");
  switch (spec.kind) {
    case FamilySpec::Kind::Dictator: {
      check_coord_param(spec.coord, n, "Dictator");
      int i = spec.coord;
      return {n, [n, i](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                return x.bit(i) ? 1 : 0;
              }};
    }
    case FamilySpec::Kind::AntiDictator: {
      check_coord_param(spec.coord, n, "AntiDictator");
      int i = spec.coord;
      return {n, [n, i](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                return x.bit(i) ? 0 : 1;
              }};
    }
    case FamilySpec::Kind::Majority: {
      if (n % 2 == 0)
        throw std::invalid_argument("Majority: n must be odd");
      int half = n / 2;
      return {n, [n, half](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                return x.weight() > half ? 1 : 0;
              }};
    }
    case FamilySpec::Kind::Parity:
      return {n, [n](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                return x.weight() & 1;
              }};
    case FamilySpec::Kind::Threshold: {
      if (spec.threshold < 0 || spec.threshold > n + 1)
        throw std::invalid_argument("Threshold: t must be in 0..n+1");
      int t = spec.threshold;
      return {n, [n, t](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                return x.weight() >= t ? 1 : 0;
              }};
    }
    case FamilySpec::Kind::RandomBernoulli: {
      if (!(spec.prob >= 0.0 && spec.prob <= 1.0))
        throw std::invalid_argument("RandomBernoulli: p must be in [0,1]");
      double p = spec.prob;
      uint64_t seed = spec.seed;
      return {n, [n, p, seed](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                double u = static_cast<double>(x.hash(seed) >> 11) * 0x1.0p-53;
                return u < p ? 1 : 0;
              }};
    }
    case FamilySpec::Kind::RandomMonotone: {
      if (spec.cone_count < 1)
        throw std::invalid_argument("RandomMonotone: cone_count must be >= 1");
      auto centers = std::make_shared<std::vector<Point>>();
      RngStream rng = RngStream::from_seed(spec.seed);
      for (int c = 0; c < spec.cone_count; ++c)
        centers->push_back(sample_point(rng, n));
      return {n, [n, centers](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                for (const Point& c : *centers)
                  if (dominated_by(c, x)) return 1;
                return 0;
              }};
    }
    case FamilySpec::Kind::Blended: {
      if (!spec.base) throw std::invalid_argument("Blended: missing base");
      if (n > 64) throw std::invalid_argument("Blended: n must be <= 64");
      check_coord_param(spec.coord, n, "Blended");
      uint64_t full = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
      if (spec.subcube_mask & ~full)
        throw std::invalid_argument("Blended: subcube mask exceeds dimension");
      uint64_t noise_bit = uint64_t{1} << (spec.coord - 1);
      if (spec.subcube_mask & noise_bit)
        throw std::invalid_argument("Blended: noise coordinate is fixed by the subcube");
      BoolFun base = instantiate(*spec.base, n);
      uint64_t mask = spec.subcube_mask;
      uint64_t values = RngStream::mix(spec.seed + 0x6A09E667F3BCC909ULL) & mask;
      int noise_coord = spec.coord;
      return {n, [n, base, mask, values, noise_coord](const Point& x) {
                if (x.dimension() != n) throw_dimension_mismatch();
                int b = base.eval(x);
                if ((x.words()[0] & mask) != values) return b;
                return b ^ (x.bit(noise_coord) ? 0 : 1);
              }};
    }
  }
  throw std::invalid_argument("instantiate: unknown family kind");
}

namespace {

std::vector<std::string> split_fields(const std::string& text, int max_fields) {
  std::vector<std::string> fields;
  size_t pos = 0;
  while (static_cast<int>(fields.size()) + 1 < max_fields) {
    size_t colon = text.find(':', pos);
    if (colon == std::string::npos) break;
    fields.push_back(text.substr(pos, colon - pos));
    pos = colon + 1;
  }
  fields.push_back(text.substr(pos));
  return fields;
}

uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    size_t consumed = 0;
    uint64_t v = std::stoull(s, &consumed, 0);
    if (consumed != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("FamilySpec: bad ") + what + ": " + s);
  }
}

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

}  // namespace

std::string FamilySpec::name() const {
  switch (kind) {
    case Kind::Dictator:
      return "dictator:" + std::to_string(coord);
    case Kind::AntiDictator:
      return "antidictator:" + std::to_string(coord);
    case Kind::Majority:
      return "majority";
    case Kind::Parity:
      return "parity";
    case Kind::Threshold:
      return "threshold:" + std::to_string(threshold);
    case Kind::RandomBernoulli:
      return "bernoulli:" + format_prob(prob) + ":" + std::to_string(seed);
    case Kind::RandomMonotone:
      return "monotone:" + std::to_string(seed) + ":" + std::to_string(cone_count);
    case Kind::Blended: {
      char mask_buf[32];
      std::snprintf(mask_buf, sizeof mask_buf, "0x%llx",
                    static_cast<unsigned long long>(subcube_mask));
      return "blended:" + std::to_string(coord) + ":" + mask_buf + ":" +
             std::to_string(seed) + ":" + (base ? base->name() : "?");
    }
  }
  return "?";
}

FamilySpec FamilySpec::parse(const std::string& text) {
  size_t colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);

  if (head == "dictator" || head == "antidictator") {
    if (rest.empty()) throw std::invalid_argument("FamilySpec: " + head + " needs a coordinate");
    int i = static_cast<int>(parse_u64(rest, "coordinate"));
    return head == "dictator" ? dictator(i) : anti_dictator(i);
  }
  if (head == "majority") return majority();
  if (head == "parity") return parity();
  if (head == "threshold") {
    if (rest.empty()) throw std::invalid_argument("FamilySpec: threshold needs a level");
    return threshold_at(static_cast<int>(parse_u64(rest, "threshold")));
  }
  if (head == "bernoulli") {
    auto f = split_fields(rest, 2);
    if (f.size() != 2) throw std::invalid_argument("FamilySpec: bernoulli:<p>:<seed>");
    double p = 0;
    try {
      size_t consumed = 0;
      p = std::stod(f[0], &consumed);
      if (consumed != f[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("FamilySpec: bad probability: " + f[0]);
    }
    return bernoulli(p, parse_u64(f[1], "seed"));
  }
  if (head == "monotone") {
    auto f = split_fields(rest, 2);
    if (f.size() != 2) throw std::invalid_argument("FamilySpec: monotone:<seed>:<cones>");
    return random_monotone(parse_u64(f[0], "seed"),
                           static_cast<int>(parse_u64(f[1], "cone count")));
  }
  if (head == "blended") {
    auto f = split_fields(rest, 4);
    if (f.size() != 4)
      throw std::invalid_argument("FamilySpec: blended:<coord>:<mask>:<seed>:<base>");
    return blended(parse(f[3]), static_cast<int>(parse_u64(f[0], "coordinate")),
                   parse_u64(f[1], "mask"), parse_u64(f[2], "seed"));
  }
  throw std::invalid_argument("FamilySpec: unknown family: " + head);
}

}  // namespace mono
